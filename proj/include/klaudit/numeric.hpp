#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <vector>

#include "arith.hpp"

namespace klaudit {

// ~166-bit significand; every SumValue approximation is carried here so the
// shipped error bounds stay far below 2^-40.
using BigFloat = boost::multiprecision::cpp_bin_float_50;

/// Minimal complex over BigFloat (std::complex is only specified for
/// builtin floating types).
struct BigComplex {
    BigFloat re = 0, im = 0;

    BigComplex() = default;
    BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}
    explicit BigComplex(double r) : re(r), im(0) {}

    BigComplex& operator+=(const BigComplex& o) { re += o.re; im += o.im; return *this; }
    BigComplex& operator-=(const BigComplex& o) { re -= o.re; im -= o.im; return *this; }
    friend BigComplex operator+(BigComplex a, const BigComplex& b) { return a += b; }
    friend BigComplex operator-(BigComplex a, const BigComplex& b) { return a -= b; }
    friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend BigComplex operator*(const BigFloat& s, const BigComplex& a) {
        return {s * a.re, s * a.im};
    }
    BigComplex conj() const { return {re, -im}; }
    BigFloat abs() const { return sqrt(re * re + im * im); }
    std::complex<double> to_double() const {
        return {re.convert_to<double>(), im.convert_to<double>()};
    }
};

inline BigFloat big_pi() {
    static const BigFloat pi = boost::multiprecision::default_ops::get_constant_pi<BigFloat::backend_type>();
    return pi;
}

/// e(k/L) to BigFloat precision, memoized per level.
class RootTable {
public:
    explicit RootTable(int64_t level) : level_(level), roots_(level) {
        const BigFloat two_pi = 2 * big_pi();
        for (int64_t k = 0; k < level; ++k) {
            const BigFloat t = two_pi * k / level;
            roots_[k] = {cos(t), sin(t)};
        }
    }
    const BigComplex& root(int64_t k) const { return roots_[mod_reduce(k, level_)]; }
    int64_t level() const { return level_; }

private:
    int64_t level_;
    std::vector<BigComplex> roots_;
};

inline std::shared_ptr<const RootTable> root_table(int64_t level) {
    static std::shared_mutex mutex;
    static std::map<int64_t, std::shared_ptr<const RootTable>> cache;
    {
        std::shared_lock lock(mutex);
        if (auto it = cache.find(level); it != cache.end()) return it->second;
    }
    auto built = std::make_shared<const RootTable>(level);
    std::unique_lock lock(mutex);
    return cache.try_emplace(level, std::move(built)).first->second;
}

/// e(k/q) in double precision for the sampling audits; memoized per modulus.
inline std::shared_ptr<const std::vector<std::complex<double>>> unit_roots_d(int64_t q) {
    static std::shared_mutex mutex;
    static std::map<int64_t, std::shared_ptr<const std::vector<std::complex<double>>>> cache;
    {
        std::shared_lock lock(mutex);
        if (auto it = cache.find(q); it != cache.end()) return it->second;
    }
    auto table = std::make_shared<std::vector<std::complex<double>>>(q);
    for (int64_t k = 0; k < q; ++k) {
        const double t = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(q);
        (*table)[k] = {std::cos(t), std::sin(t)};
    }
    std::unique_lock lock(mutex);
    return cache.try_emplace(q, std::move(table)).first->second;
}

}  // namespace klaudit
