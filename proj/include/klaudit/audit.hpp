#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "arith.hpp"
#include "cyclo.hpp"
#include "expsum.hpp"
#include "numeric.hpp"
#include "parallel.hpp"

namespace klaudit {

struct WeilAuditResult {
    double max_ratio = 0;
    int64_t at_p = 0, at_m = 0, at_n = 0;
    int64_t sums_evaluated = 0;
};

/// |Kl2(m,n;p)| / (2 gcd(m,n,p)^{1/2} p^{1/2}) over primes p <= p_max with a
/// seeded sample of (m,n) per prime. The classical bound says the ratio
/// never exceeds 1; the audit reports the observed maximum.
inline WeilAuditResult weil_audit(int64_t p_max, int samples_per_prime, uint64_t seed,
                                  int threads = 0) {
    const auto primes = primes_up_to(p_max);
    struct Slot { double ratio = 0; int64_t p = 0, m = 0, n = 0; int64_t count = 0; };
    std::vector<Slot> slots(primes.size());
    parallel_for(static_cast<int64_t>(primes.size()), [&](int64_t i) {
        const int64_t p = primes[i];
        // per-prime deterministic substream
        std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<uint64_t>(p)));
        std::uniform_int_distribution<int64_t> pick(0, p - 1);
        const auto roots = unit_roots_d(p);
        std::vector<int64_t> inv(p, 0);
        for (int64_t x = 1; x < p; ++x) inv[x] = inv_mod(x, p);
        Slot& slot = slots[i];
        slot.p = p;
        for (int s = 0; s < samples_per_prime; ++s) {
            int64_t m = pick(rng), n = pick(rng);
            if (m == 0 && n == 0) m = 1;
            std::complex<long double> acc = 0;
            for (int64_t x = 1; x < p; ++x) {
                const auto& r = (*roots)[mod_reduce(m * x + n * inv[x], p)];
                acc += std::complex<long double>(r.real(), r.imag());
            }
            const double g = static_cast<double>(std::gcd(std::gcd(m, n), p));
            const double ratio = static_cast<double>(std::abs(acc)) /
                                 (2.0 * std::sqrt(g) * std::sqrt(static_cast<double>(p)));
            ++slot.count;
            if (ratio > slot.ratio) { slot.ratio = ratio; slot.m = m; slot.n = n; }
        }
    }, threads);
    WeilAuditResult out;
    for (const auto& s : slots) {
        out.sums_evaluated += s.count;
        if (s.ratio > out.max_ratio) {
            out.max_ratio = s.ratio;
            out.at_p = s.p;
            out.at_m = s.m;
            out.at_n = s.n;
        }
    }
    return out;
}

struct Kl3BoundAuditResult {
    double max_ratio = 0;  // |Kl3(m,n;1,1,p)| / (3p)
    int64_t at_p = 0, at_m = 0, at_n = 0;
};

inline Kl3BoundAuditResult kl3_bound_audit(int64_t p_max, int samples_per_prime,
                                           uint64_t seed, int threads = 0) {
    const auto primes = primes_up_to(p_max);
    std::vector<Kl3BoundAuditResult> slots(primes.size());
    parallel_for(static_cast<int64_t>(primes.size()), [&](int64_t i) {
        const int64_t p = primes[i];
        std::mt19937_64 rng(seed ^ (0xda942042e4dd58b5ULL * static_cast<uint64_t>(p)));
        std::uniform_int_distribution<int64_t> pick(0, p - 1);
        const auto roots = unit_roots_d(p);
        std::vector<int64_t> inv(p, 0);
        for (int64_t x = 1; x < p; ++x) inv[x] = inv_mod(x, p);
        auto& slot = slots[i];
        slot.at_p = p;
        for (int s = 0; s < samples_per_prime; ++s) {
            const int64_t m = pick(rng), n = pick(rng);
            std::complex<long double> acc = 0;
            for (int64_t x = 1; x < p; ++x) {
                const int64_t mx = mul_mod(m, x, p);
                for (int64_t y = 1; y < p; ++y) {
                    const auto& r = (*roots)[mod_reduce(mx + n * y + inv[mul_mod(x, y, p)], p)];
                    acc += std::complex<long double>(r.real(), r.imag());
                }
            }
            const double ratio =
                static_cast<double>(std::abs(acc)) / (3.0 * static_cast<double>(p));
            if (ratio > slot.max_ratio) { slot.max_ratio = ratio; slot.at_m = m; slot.at_n = n; }
        }
    }, threads);
    Kl3BoundAuditResult out;
    for (const auto& s : slots)
        if (s.max_ratio > out.max_ratio) out = s;
    return out;
}

struct CorrelationAuditResult {
    double sup_constant_plain = 0;
    double sup_constant_conj = 0;
    int64_t at_q_plain = 0, at_q_conj = 0;
    int64_t triples = 0;
};

/// Measures the implied constant in
/// |sum_gamma Kl2(m g,1;q) Kl2(n g,1;q)* e(h g/q)| <= C (m,n,q)^{1/2} (m-n,h,q)^{1/2} q^{3/2}
/// in both conjugation variants over q <= q_max with seeded (m,n,h) samples.
inline CorrelationAuditResult correlation_audit(int64_t q_max, int triples_per_q,
                                                uint64_t seed, int threads = 0) {
    struct Slot { double plain = 0, conj = 0; int64_t triples = 0; };
    std::vector<Slot> slots(q_max + 1);
    parallel_for(q_max - 1, [&](int64_t i) {
        const int64_t q = i + 2;
        std::mt19937_64 rng(seed ^ (0xbf58476d1ce4e5b9ULL * static_cast<uint64_t>(q)));
        std::uniform_int_distribution<int64_t> pick(0, q - 1);
        const auto roots = unit_roots_d(q);
        std::vector<int64_t> inv(q, 0);
        for (int64_t x = 1; x < q; ++x)
            if (std::gcd(x, q) == 1) inv[x] = inv_mod(x, q);
        // Kl2(v,1;q) for all v
        std::vector<std::complex<double>> K(q, 0.0);
        for (int64_t v = 0; v < q; ++v) {
            std::complex<double> acc = 0;
            for (int64_t x = 1; x < q; ++x) {
                if (inv[x] == 0) continue;
                acc += (*roots)[mod_reduce(v * x + inv[x], q)];
            }
            K[v] = acc;
        }
        auto& slot = slots[q];
        for (int t = 0; t < triples_per_q; ++t) {
            const int64_t m = pick(rng), n = pick(rng), h = pick(rng);
            std::complex<double> plain = 0, conj = 0;
            for (int64_t g = 0; g < q; ++g) {
                const auto a = K[mul_mod(m, g, q)];
                const auto b = K[mul_mod(n, g, q)];
                const auto e = (*roots)[mul_mod(h, g, q)];
                plain += a * b * e;
                conj += a * std::conj(b) * e;
            }
            const double g1 = static_cast<double>(std::gcd(std::gcd(m, n), q));
            const double g2 = static_cast<double>(std::gcd(std::gcd(mod_reduce(m - n, q), h), q));
            const double denom = std::sqrt(g1) * std::sqrt(g2) * std::pow(static_cast<double>(q), 1.5);
            slot.plain = std::max(slot.plain, std::abs(plain) / denom);
            slot.conj = std::max(slot.conj, std::abs(conj) / denom);
            ++slot.triples;
        }
    }, threads);
    CorrelationAuditResult out;
    for (int64_t q = 2; q <= q_max; ++q) {
        out.triples += slots[q].triples;
        if (slots[q].plain > out.sup_constant_plain) {
            out.sup_constant_plain = slots[q].plain;
            out.at_q_plain = q;
        }
        if (slots[q].conj > out.sup_constant_conj) {
            out.sup_constant_conj = slots[q].conj;
            out.at_q_conj = q;
        }
    }
    return out;
}

struct VanishingSweepResult {
    bool all_zero = true;
    int64_t q_failed = 0, ell_failed = 0;
    int64_t checks = 0;
};

/// sum over t mod q of Kl3(ell t, 1; 1,1,q) must vanish exactly for every
/// gcd(ell,q)=1; checked by exact cyclotomic reduction for all q <= q_max.
inline VanishingSweepResult complete_sum_vanishing_sweep(int64_t q_max, int threads = 0) {
    struct Slot { bool ok = true; int64_t ell = 0; int64_t checks = 0; };
    std::vector<Slot> slots(q_max + 1);
    parallel_for(q_max - 1, [&](int64_t i) {
        const int64_t q = i + 2;
        auto& slot = slots[q];
        std::vector<int64_t> inv(q, 0);
        std::vector<int64_t> units;
        for (int64_t x = 1; x < q; ++x)
            if (std::gcd(x, q) == 1) {
                inv[x] = inv_mod(x, q);
                units.push_back(x);
            }
        for (int64_t ell : units) {
            ExpHist h(q);
            for (int64_t t = 0; t < q; ++t) {
                const int64_t a = mul_mod(ell, t, q);
                for (int64_t x : units) {
                    const int64_t ax = mul_mod(a, x, q);
                    for (int64_t y : units) h.add(ax + y + inv[mul_mod(x, y, q)]);
                }
            }
            ++slot.checks;
            if (!h.is_zero()) {
                slot.ok = false;
                slot.ell = ell;
                return;
            }
        }
    }, threads);
    VanishingSweepResult out;
    for (int64_t q = 2; q <= q_max; ++q) {
        out.checks += slots[q].checks;
        if (!slots[q].ok && out.all_zero) {
            out.all_zero = false;
            out.q_failed = q;
            out.ell_failed = slots[q].ell;
        }
    }
    return out;
}

struct SymmetryCheckResult {
    bool ok = true;
    int64_t q_failed = 0, m_failed = 0, n_failed = 0;
};

/// Kl2(m,n;q) = Kl2(n,m;q) exactly (histogram identity under x -> x^{-1}).
inline SymmetryCheckResult kl2_symmetry_check(int64_t q_max, int pairs_per_q,
                                              uint64_t seed) {
    SymmetryCheckResult out;
    std::mt19937_64 rng(seed);
    for (int64_t q = 1; q <= q_max && out.ok; ++q) {
        std::uniform_int_distribution<int64_t> pick(0, q - 1);
        for (int t = 0; t < pairs_per_q; ++t) {
            const int64_t m = pick(rng), n = pick(rng);
            ExpHist a = kl2_hist(m, n, q);
            a -= kl2_hist(n, m, q);
            if (!a.is_zero()) {
                out = {false, q, m, n};
                break;
            }
        }
    }
    return out;
}

}  // namespace klaudit
