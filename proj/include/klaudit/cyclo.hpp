#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "numeric.hpp"
#include "rational.hpp"

namespace klaudit {

inline constexpr int64_t kCycLevelMax = 3600;
inline constexpr int64_t kCycExactDegreeCap = 2400;
inline constexpr int64_t kRowEntryCap = int64_t(1) << 55;

namespace detail {

// Exact division of integer polynomials, used only while building Phi_L.
inline std::vector<int64_t> poly_div_exact(std::vector<int64_t> num,
                                           const std::vector<int64_t>& den) {
    const auto dn = static_cast<int64_t>(num.size()) - 1;
    const auto dd = static_cast<int64_t>(den.size()) - 1;
    std::vector<int64_t> quot(dn - dd + 1, 0);
    for (int64_t k = dn; k >= dd; --k) {
        const int64_t c = num[k];
        if (c == 0) continue;
        // den is monic throughout the cyclotomic recursion
        quot[k - dd] = c;
        for (int64_t j = 0; j <= dd; ++j) num[k - dd + j] -= c * den[j];
    }
    return quot;
}

}  // namespace detail

/// Phi_L as an integer coefficient vector (degree phi(L)), built by dividing
/// x^L - 1 by the proper-divisor cyclotomics; memoized.
inline std::shared_ptr<const std::vector<int64_t>> cyclotomic_poly(int64_t level) {
    if (level < 1 || level > kCycLevelMax)
        throw CapacityError("cyclotomic_poly: level outside [1, " +
                            std::to_string(kCycLevelMax) + "]");
    static std::shared_mutex mutex;
    static std::map<int64_t, std::shared_ptr<const std::vector<int64_t>>> cache;
    {
        std::shared_lock lock(mutex);
        if (auto it = cache.find(level); it != cache.end()) return it->second;
    }
    std::vector<int64_t> poly(level + 1, 0);
    poly[0] = -1;
    poly[level] = 1;  // x^L - 1
    for (int64_t d : divisors(level)) {
        if (d == level) continue;
        poly = detail::poly_div_exact(std::move(poly), *cyclotomic_poly(d));
    }
    auto built = std::make_shared<const std::vector<int64_t>>(std::move(poly));
    std::unique_lock lock(mutex);
    return cache.try_emplace(level, std::move(built)).first->second;
}

/// Reduction engine for one level: canonical coordinates of zeta_L^k in the
/// power basis 1, zeta, ..., zeta^(d-1), d = deg Phi_L. Rows are small
/// integers; construction checks they stay within kRowEntryCap.
class PhiReducer {
public:
    explicit PhiReducer(int64_t level)
        : level_(level), phi_(cyclotomic_poly(level)) {
        degree_ = static_cast<int64_t>(phi_->size()) - 1;
        if (level_ <= degree_) return;  // L = 1: no out-of-basis powers
        rows_.assign(static_cast<std::size_t>(level_ - degree_) * degree_, 0);
        std::vector<int64_t> row(degree_, 0);
        // zeta^d = -(lower coefficients of Phi)
        for (int64_t j = 0; j < degree_; ++j) row[j] = -(*phi_)[j];
        store_row(degree_, row);
        for (int64_t k = degree_ + 1; k < level_; ++k) {
            const int64_t top = row[degree_ - 1];
            for (int64_t j = degree_ - 1; j > 0; --j) row[j] = row[j - 1];
            row[0] = 0;
            if (top != 0)
                for (int64_t j = 0; j < degree_; ++j) {
                    row[j] -= top * (*phi_)[j];
                    if (row[j] >= kRowEntryCap || row[j] <= -kRowEntryCap)
                        throw CapacityError("PhiReducer: coefficient growth at level " +
                                            std::to_string(level_));
                }
            store_row(k, row);
        }
    }

    int64_t level() const { return level_; }
    int64_t degree() const { return degree_; }
    const std::vector<int64_t>& phi() const { return *phi_; }

    /// Canonical coordinates of sum_k hist[k] * zeta^k; hist has length L.
    template <typename Int>
    std::vector<Int> reduce(const std::vector<Int>& hist) const {
        std::vector<Int> out(degree_, Int(0));
        for (int64_t k = 0; k < level_ && k < static_cast<int64_t>(hist.size()); ++k) {
            const Int& c = hist[k];
            if (c == 0) continue;
            if (k < degree_) {
                out[k] += c;
            } else {
                const int64_t* row = row_ptr(k);
                for (int64_t j = 0; j < degree_; ++j)
                    if (row[j] != 0) out[j] += c * Int(row[j]);
            }
        }
        return out;
    }

    bool is_zero(const std::vector<int64_t>& hist) const {
        std::vector<__int128> acc(degree_, 0);
        for (int64_t k = 0; k < level_ && k < static_cast<int64_t>(hist.size()); ++k) {
            const int64_t c = hist[k];
            if (c == 0) continue;
            if (k < degree_) {
                acc[k] += c;
            } else {
                const int64_t* row = row_ptr(k);
                for (int64_t j = 0; j < degree_; ++j)
                    if (row[j] != 0) acc[j] += static_cast<__int128>(c) * row[j];
            }
        }
        return std::all_of(acc.begin(), acc.end(), [](__int128 v) { return v == 0; });
    }

private:
    void store_row(int64_t k, const std::vector<int64_t>& row) {
        std::copy(row.begin(), row.end(),
                  rows_.begin() + static_cast<std::size_t>(k - degree_) * degree_);
    }
    const int64_t* row_ptr(int64_t k) const {
        return rows_.data() + static_cast<std::size_t>(k - degree_) * degree_;
    }

    int64_t level_;
    std::shared_ptr<const std::vector<int64_t>> phi_;
    int64_t degree_;
    std::vector<int64_t> rows_;
};

inline std::shared_ptr<const PhiReducer> phi_reducer(int64_t level) {
    static std::shared_mutex mutex;
    static std::map<int64_t, std::shared_ptr<const PhiReducer>> cache;
    {
        std::shared_lock lock(mutex);
        if (auto it = cache.find(level); it != cache.end()) return it->second;
    }
    auto built = std::make_shared<const PhiReducer>(level);
    std::unique_lock lock(mutex);
    return cache.try_emplace(level, std::move(built)).first->second;
}

/// Integer combination of L-th roots of unity kept as a length-L exponent
/// histogram. This is the workhorse for exact identity checking: sums are
/// accumulated as integer counts and zero-tested through PhiReducer.
struct ExpHist {
    int64_t level = 1;
    std::vector<int64_t> counts;

    ExpHist() : counts(1, 0) {}
    explicit ExpHist(int64_t L) : level(L), counts(L, 0) {}

    void add(int64_t exponent, int64_t weight = 1) {
        counts[mod_reduce(exponent, level)] += weight;
    }
    ExpHist& operator-=(const ExpHist& o) {
        for (int64_t k = 0; k < level; ++k) counts[k] -= o.counts[k];
        return *this;
    }
    ExpHist& operator+=(const ExpHist& o) {
        for (int64_t k = 0; k < level; ++k) counts[k] += o.counts[k];
        return *this;
    }
    /// this += zeta^shift * scale * o
    void add_rotated(const ExpHist& o, int64_t shift, int64_t scale = 1) {
        shift = mod_reduce(shift, level);
        for (int64_t k = 0; k < level; ++k) {
            const int64_t c = o.counts[k];
            if (c == 0) continue;
            int64_t j = k + shift;
            if (j >= level) j -= level;
            counts[j] += c * scale;
        }
    }
    bool is_zero() const { return phi_reducer(level)->is_zero(counts); }

    BigComplex eval() const {
        const auto roots = root_table(level);
        BigComplex acc;
        for (int64_t k = 0; k < level; ++k)
            if (counts[k] != 0) acc += BigFloat(counts[k]) * roots->root(k);
        return acc;
    }
};

/// Convolution in Z[zeta_L]: histogram of the product of two histograms.
inline ExpHist conv(const ExpHist& a, const ExpHist& b) {
    ExpHist out(a.level);
    for (int64_t i = 0; i < a.level; ++i) {
        const int64_t ci = a.counts[i];
        if (ci == 0) continue;
        for (int64_t j = 0; j < b.level; ++j) {
            const int64_t cj = b.counts[j];
            if (cj == 0) continue;
            int64_t k = i + j;
            if (k >= out.level) k -= out.level;
            out.counts[k] += ci * cj;
        }
    }
    return out;
}

/// Element of Q(zeta_L) in canonical form mod Phi_L. Equality of values is
/// equality of coefficient vectors at a common level.
class CycNumber {
public:
    CycNumber() : level_(1), coeffs_(1, Rat(0)) {}

    static CycNumber zero(int64_t level) { return CycNumber(level); }
    static CycNumber one(int64_t level = 1) {
        CycNumber c(level);
        c.coeffs_[0] = 1;
        return c;
    }
    static CycNumber from_rational(const Rat& r, int64_t level = 1) {
        CycNumber c(level);
        c.coeffs_[0] = r;
        return c;
    }
    /// zeta_L^k
    static CycNumber root_power(int64_t level, int64_t k) {
        check_exact_capacity(level);
        std::vector<Rat> hist(level, Rat(0));
        hist[mod_reduce(k, level)] = 1;
        CycNumber c(level);
        c.coeffs_ = phi_reducer(level)->reduce(hist);
        return c;
    }
    static CycNumber from_hist(const ExpHist& h) {
        check_exact_capacity(h.level);
        const auto red = phi_reducer(h.level);
        auto ints = red->reduce(h.counts);
        CycNumber c(h.level);
        for (int64_t j = 0; j < red->degree(); ++j) c.coeffs_[j] = Rat(ints[j]);
        return c;
    }

    int64_t level() const { return level_; }
    const std::vector<Rat>& coeffs() const { return coeffs_; }

    bool is_zero() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(),
                           [](const Rat& r) { return r == 0; });
    }
    bool is_rational() const {
        for (std::size_t j = 1; j < coeffs_.size(); ++j)
            if (coeffs_[j] != 0) return false;
        return true;
    }
    Rat rational_part() const { return coeffs_[0]; }

    CycNumber lifted(int64_t new_level) const {
        if (new_level == level_) return *this;
        if (new_level % level_ != 0)
            throw PreconditionError("CycNumber::lifted: target level not a multiple");
        check_exact_capacity(new_level);
        const int64_t stride = new_level / level_;
        std::vector<Rat> hist(new_level, Rat(0));
        for (std::size_t k = 0; k < coeffs_.size(); ++k)
            if (coeffs_[k] != 0) hist[k * stride] += coeffs_[k];
        CycNumber out(new_level);
        out.coeffs_ = phi_reducer(new_level)->reduce(hist);
        return out;
    }

    friend CycNumber operator+(const CycNumber& a, const CycNumber& b) {
        const int64_t L = std::lcm(a.level_, b.level_);
        CycNumber x = a.lifted(L), y = b.lifted(L);
        for (std::size_t j = 0; j < x.coeffs_.size(); ++j) x.coeffs_[j] += y.coeffs_[j];
        return x;
    }
    friend CycNumber operator-(const CycNumber& a, const CycNumber& b) {
        return a + (-b);
    }
    CycNumber operator-() const {
        CycNumber out = *this;
        for (auto& c : out.coeffs_) c = -c;
        return out;
    }
    friend CycNumber operator*(const Rat& s, const CycNumber& a) {
        CycNumber out = a;
        for (auto& c : out.coeffs_) c *= s;
        return out;
    }
    friend CycNumber operator*(const CycNumber& a, const CycNumber& b) {
        const int64_t L = std::lcm(a.level_, b.level_);
        const CycNumber x = a.lifted(L), y = b.lifted(L);
        std::vector<Rat> hist(L, Rat(0));
        for (std::size_t i = 0; i < x.coeffs_.size(); ++i) {
            if (x.coeffs_[i] == 0) continue;
            for (std::size_t j = 0; j < y.coeffs_.size(); ++j) {
                if (y.coeffs_[j] == 0) continue;
                std::size_t k = i + j;
                if (k >= static_cast<std::size_t>(L)) k -= L;
                hist[k] += x.coeffs_[i] * y.coeffs_[j];
            }
        }
        CycNumber out(L);
        out.coeffs_ = phi_reducer(L)->reduce(hist);
        return out;
    }

    /// Complex conjugation, zeta -> zeta^{-1}.
    CycNumber conj() const {
        std::vector<Rat> hist(level_, Rat(0));
        for (std::size_t k = 0; k < coeffs_.size(); ++k)
            if (coeffs_[k] != 0)
                hist[mod_reduce(-static_cast<int64_t>(k), level_)] += coeffs_[k];
        CycNumber out(level_);
        out.coeffs_ = phi_reducer(level_)->reduce(hist);
        return out;
    }

    friend bool operator==(const CycNumber& a, const CycNumber& b) {
        const int64_t L = std::lcm(a.level_, b.level_);
        return a.lifted(L).coeffs_ == b.lifted(L).coeffs_;
    }

    BigComplex eval() const {
        const auto roots = root_table(level_);
        BigComplex acc;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (coeffs_[k] == 0) continue;
            acc += coeffs_[k].convert_to<BigFloat>() * roots->root(static_cast<int64_t>(k));
        }
        return acc;
    }
    /// Rigorous bound on |value - eval()|: every root is accurate to a few
    /// ulps of the 166-bit backend, terms accumulate linearly.
    double eval_error_bound() const {
        double coeff_mass = 0;
        for (const auto& c : coeffs_) coeff_mass += std::abs(to_double(Rat(c)));
        return (coeff_mass + 1.0) * (static_cast<double>(coeffs_.size()) + 2.0) * 1e-45;
    }

    /// "c0 + c1*z + ..." with z = zeta_level; used by report serialization.
    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (coeffs_[k] == 0) continue;
            if (!first) os << " + ";
            os << klaudit::to_string(Rat(coeffs_[k]));
            if (k > 0) os << "*z" << level_ << "^" << k;
            first = false;
        }
        if (first) os << "0";
        return os.str();
    }

private:
    explicit CycNumber(int64_t level) : level_(level) {
        check_exact_capacity(level);
        coeffs_.assign(phi_reducer(level)->degree(), Rat(0));
    }
    static void check_exact_capacity(int64_t level) {
        if (level < 1 || level > kCycLevelMax)
            throw CapacityError("CycNumber: level outside supported range");
        if (euler_phi(level) > kCycExactDegreeCap)
            throw CapacityError("CycNumber: deg Phi exceeds exact-arithmetic cap");
    }

    int64_t level_;
    std::vector<Rat> coeffs_;
};

inline bool cyc_equal(const CycNumber& a, const CycNumber& b) { return a == b; }

/// A finite sum's value: exact cyclotomic form when the level is within the
/// exact cap, always a high-precision complex with a tracked error bound.
struct SumValue {
    std::optional<CycNumber> exact;
    BigComplex approx;
    double error_bound = 0;

    static SumValue from_hist(const ExpHist& h) {
        SumValue v;
        v.approx = h.eval();
        int64_t mass = 0;
        for (int64_t c : h.counts) mass += std::abs(c);
        v.error_bound = (static_cast<double>(mass) + 1.0) *
                        (static_cast<double>(h.level) + 2.0) * 1e-45;
        if (h.level <= kCycLevelMax && euler_phi(h.level) <= kCycExactDegreeCap)
            v.exact = CycNumber::from_hist(h);
        return v;
    }
    bool exact_equals(const SumValue& o) const {
        return exact && o.exact && *exact == *o.exact;
    }
};

/// cyc_eval per the module contract: the backend carries a 166-bit
/// significand, so any requested precision up to ~150 bits is served.
inline std::pair<BigComplex, double> cyc_eval(const CycNumber& a, int precision_bits = 53) {
    if (precision_bits < 53)
        throw PreconditionError("cyc_eval: precision_bits must be >= 53");
    if (precision_bits > 150)
        throw CapacityError("cyc_eval: backend precision is 166 bits; <=150 supported");
    return {a.eval(), a.eval_error_bound()};
}

}  // namespace klaudit
