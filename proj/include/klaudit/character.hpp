#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "arith.hpp"
#include "cyclo.hpp"
#include "errors.hpp"
#include "unitgroup.hpp"

namespace klaudit {

/// e(num/den) as a reduced fraction of a full turn; the exact phase of a
/// character value.
struct UnitPhase {
    int64_t num = 0;
    int64_t den = 1;

    void normalize() {
        num = mod_reduce(num, den);
        const int64_t g = std::gcd(num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }
};

/// Dirichlet character mod q as an exponent vector on the fixed generator
/// basis of unit_group(q). Completely multiplicative on units, 0 elsewhere.
class DirichletCharacter {
public:
    DirichletCharacter(int64_t q, std::vector<int64_t> exponent_vector)
        : group_(unit_group(q)), exps_(std::move(exponent_vector)) {
        const auto& gens = group_->generators();
        if (exps_.size() != gens.size())
            throw PreconditionError("DirichletCharacter: exponent vector size mismatch");
        group_exponent_ = 1;
        for (std::size_t i = 0; i < exps_.size(); ++i) {
            exps_[i] = mod_reduce(exps_[i], gens[i].order);
            group_exponent_ = std::lcm(group_exponent_, gens[i].order);
        }
        order_ = 1;
        for (std::size_t i = 0; i < exps_.size(); ++i) {
            const int64_t d = gens[i].order / std::gcd(exps_[i], gens[i].order);
            order_ = std::lcm(order_, d);
        }
        conductor_ = compute_conductor();
    }

    static DirichletCharacter principal(int64_t q) {
        return DirichletCharacter(q, std::vector<int64_t>(unit_group(q)->generators().size(), 0));
    }

    int64_t modulus() const { return group_->modulus(); }
    const std::vector<int64_t>& exponent_vector() const { return exps_; }
    int64_t order() const { return order_; }
    int64_t conductor() const { return conductor_; }
    bool is_principal() const { return order_ == 1; }
    bool is_primitive() const { return conductor_ == modulus(); }
    bool is_even() const { return phase(-1)->num == 0; }

    DirichletCharacter conjugate() const {
        std::vector<int64_t> e = exps_;
        const auto& gens = group_->generators();
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = mod_reduce(-e[i], gens[i].order);
        return DirichletCharacter(modulus(), std::move(e));
    }

    /// Exact phase of chi(n); nullopt when chi(n)=0 (n not a unit).
    std::optional<UnitPhase> phase(int64_t n) const {
        const int64_t q = modulus();
        if (q == 1) return UnitPhase{0, 1};
        const int64_t r = mod_reduce(n, q);
        if (std::gcd(r, q) != 1) return std::nullopt;
        const auto& e = group_->dlog(r);
        const auto& gens = group_->generators();
        const int64_t D = group_exponent_;
        int64_t num = 0;
        for (std::size_t i = 0; i < e.size(); ++i)
            num = mod_reduce(num + exps_[i] * e[i] % D * (D / gens[i].order), D);
        UnitPhase ph{num, D};
        ph.normalize();
        return ph;
    }

    /// chi(n) as an exact cyclotomic number (level = order of the value).
    CycNumber eval(int64_t n) const {
        const auto ph = phase(n);
        if (!ph) return CycNumber::zero(1);
        return CycNumber::root_power(ph->den, ph->num);
    }

private:
    int64_t compute_conductor() const {
        const auto& gens = group_->generators();
        int64_t f = 1;
        std::vector<std::size_t> idx2;
        for (std::size_t i = 0; i < gens.size(); ++i) {
            if (gens[i].prime == 2) {
                idx2.push_back(i);
                continue;
            }
            const int64_t p = gens[i].prime;
            const int64_t m = gens[i].order / std::gcd(exps_[i], gens[i].order);
            // odd component of value-order m: conductor contribution
            // p^{v_p(m)+1} when nontrivial
            if (m == 1) continue;
            int64_t mp = m;
            int v = 0;
            while (mp % p == 0) { mp /= p; ++v; }
            f *= ipow(p, v + 1);
        }
        // 2-part basis is [3] for 4||q, [-1, 3-lift] for 8|q. For 8|q the
        // kernel filtration is generated by 5, so the conductor exponent is
        // read off the order of chi at (the CRT lift of) 5.
        const auto value_order = [&](std::size_t i) {
            return gens[i].order / std::gcd(exps_[i], gens[i].order);
        };
        if (idx2.size() == 1) {
            if (value_order(idx2[0]) > 1) f *= 4;
        } else if (idx2.size() == 2) {
            const bool trivial2 = value_order(idx2[0]) == 1 && value_order(idx2[1]) == 1;
            if (!trivial2) {
                const int64_t q = modulus();
                const int64_t pe = ipow(2, gens[idx2[0]].exponent);
                const int64_t rest = q / pe;
                int64_t five = 5 % pe;
                if (rest > 1) {
                    const int64_t t = mul_mod(mod_reduce(five - 1, pe), inv_mod(rest % pe, pe), pe);
                    five = mod_reduce(1 + rest * t, q);
                }
                const auto ph5 = phase(five);
                if (ph5->den == 1) {
                    f *= 4;
                } else {
                    int64_t m = ph5->den;
                    int s = 0;
                    while (m % 2 == 0) { m /= 2; ++s; }
                    f *= ipow(2, s + 2);
                }
            }
        }
        return f;
    }

    std::shared_ptr<const UnitGroup> group_;
    std::vector<int64_t> exps_;
    int64_t group_exponent_ = 1;
    int64_t order_ = 1;
    int64_t conductor_ = 1;
};

/// All phi(q) characters mod q in deterministic (mixed-radix ascending) order.
inline std::vector<DirichletCharacter> characters(int64_t q) {
    const auto group = unit_group(q);
    const auto& gens = group->generators();
    std::vector<DirichletCharacter> out;
    out.reserve(group->phi());
    std::vector<int64_t> e(gens.size(), 0);
    for (;;) {
        out.emplace_back(q, e);
        std::size_t i = 0;
        for (; i < gens.size(); ++i) {
            if (++e[i] < gens[i].order) break;
            e[i] = 0;
        }
        if (i == gens.size()) break;
    }
    return out;
}

inline CycNumber char_eval(const DirichletCharacter& chi, int64_t n) { return chi.eval(n); }

inline int64_t conductor(const DirichletCharacter& chi) { return chi.conductor(); }

/// The character mod q induced by chi (defined mod f, f | q).
inline DirichletCharacter induced_character(const DirichletCharacter& chi, int64_t q) {
    const int64_t f = chi.modulus();
    if (q % f != 0) throw PreconditionError("induced_character: f must divide q");
    const auto group = unit_group(q);
    const auto& gens = group->generators();
    std::vector<int64_t> e(gens.size(), 0);
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const auto ph = chi.phase(gens[i].residue);
        if (!ph) throw std::logic_error("induced_character: generator not unit mod f");
        if (gens[i].order % ph->den != 0)
            throw PreconditionError("induced_character: chi does not extend mod q");
        e[i] = ph->num * (gens[i].order / ph->den);
    }
    return DirichletCharacter(q, std::move(e));
}

/// The primitive character mod conductor(chi) that induces chi.
inline DirichletCharacter restrict_to_conductor(const DirichletCharacter& chi) {
    const int64_t q = chi.modulus(), f = chi.conductor();
    const auto group = unit_group(f);
    const auto& gens = group->generators();
    std::vector<int64_t> e(gens.size(), 0);
    for (std::size_t i = 0; i < gens.size(); ++i) {
        // shift the generator into a residue coprime to q without changing
        // its class mod f
        int64_t rep = gens[i].residue == 0 ? 1 : gens[i].residue;
        while (std::gcd(rep, q) != 1) rep += f;
        const auto ph = chi.phase(rep);
        if (!ph || gens[i].order % ph->den != 0)
            throw std::logic_error("restrict_to_conductor: inconsistent conductor");
        e[i] = ph->num * (gens[i].order / ph->den);
    }
    return DirichletCharacter(f, std::move(e));
}

/// Gauss sum tau(chi) = sum_{x mod q} chi(x) e(x/q), exact in Q(zeta_L) with
/// L = lcm(q, phi(q)) whenever that field is within the exact cap.
inline SumValue gauss_sum(const DirichletCharacter& chi) {
    const int64_t q = chi.modulus();
    const int64_t L = std::lcm(q, std::max<int64_t>(euler_phi(q), 1));
    if (L <= kCycLevelMax) {
        ExpHist h(L);
        for (int64_t x = q == 1 ? 0 : 1; x < q || (q == 1 && x == 0); ++x) {
            const auto ph = chi.phase(x);
            if (!ph) continue;
            h.add(ph->num * (L / ph->den) + x * (L / q));
            if (q == 1) break;
        }
        return SumValue::from_hist(h);
    }
    SumValue v;
    const BigFloat two_pi = 2 * big_pi();
    for (int64_t x = 1; x < q; ++x) {
        const auto ph = chi.phase(x);
        if (!ph) continue;
        const BigFloat t = two_pi * (BigFloat(ph->num) / ph->den + BigFloat(x) / q);
        v.approx += BigComplex{cos(t), sin(t)};
    }
    v.error_bound = static_cast<double>(q) * 1e-44;
    return v;
}

/// tau*(chi, n0) = sum_{alpha mod q} e(n0 alpha / q) chi(n0 alpha). The
/// character is used exactly as passed (callers conjugate explicitly).
inline SumValue tau_star(const DirichletCharacter& chi, int64_t n0, int64_t q) {
    if (chi.modulus() != q) throw PreconditionError("tau_star: modulus mismatch");
    if (n0 < 1) throw PreconditionError("tau_star: n0 must be >= 1");
    const int64_t L = std::lcm(q, std::max<int64_t>(euler_phi(q), 1));
    if (L > kCycLevelMax) throw CapacityError("tau_star: level beyond exact cap");
    ExpHist h(L);
    for (int64_t a = 0; a < q || (q == 1 && a == 0); ++a) {
        const auto ph = chi.phase(n0 * a);
        if (!ph) { if (q == 1) break; continue; }
        h.add(ph->num * (L / ph->den) + mod_reduce(n0 * a, q) * (L / q));
        if (q == 1) break;
    }
    return SumValue::from_hist(h);
}

}  // namespace klaudit
