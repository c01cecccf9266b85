#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "arith.hpp"
#include "character.hpp"
#include "cyclo.hpp"
#include "errors.hpp"
#include "parallel.hpp"

namespace klaudit {

/// One exponential-sum evaluation request (the batch API's unit of work).
struct KloostermanQuery {
    enum class Kind { kl2, kl2_twisted, kl3, hyper_kl2, csum, correlation };
    Kind kind = Kind::kl2;
    int64_t m = 0, n = 0, q = 1;
    std::optional<DirichletCharacter> chi;
    int64_t d1 = 1, d2 = 1;          // divisor pair for kl3 / hyper_kl2
    int64_t q1 = 1, q2 = 1;          // hyper_kl2 moduli pair
    int64_t s = 1, u = 1, h = 0;     // csum / correlation extras
    bool conjugate_second = false;
};

namespace detail {

/// Inverse table mod q for all units (0 elsewhere), O(q) per call site that
/// keeps it.
inline std::vector<int64_t> inverse_table(int64_t q) {
    std::vector<int64_t> inv(std::max<int64_t>(q, 1), 0);
    if (q == 1) return inv;
    for (int64_t x = 1; x < q; ++x)
        if (std::gcd(x, q) == 1) inv[x] = inv_mod(x, q);
    return inv;
}

}  // namespace detail

/// Kl2(m,n;q) = sum over xy = 1 mod q of e((mx+ny)/q) as a histogram.
/// Modulus 1 is the single zero-phase term.
inline ExpHist kl2_hist(int64_t m, int64_t n, int64_t q) {
    ExpHist h(q);
    if (q == 1) {
        h.add(0);
        return h;
    }
    m = mod_reduce(m, q);
    n = mod_reduce(n, q);
    for (int64_t x = 1; x < q; ++x) {
        if (std::gcd(x, q) != 1) continue;
        h.add(m * x + n * inv_mod(x, q));
    }
    return h;
}

inline SumValue kloosterman(int64_t m, int64_t n, int64_t q) {
    if (q < 1) throw PreconditionError("kloosterman: q must be >= 1");
    return SumValue::from_hist(kl2_hist(m, n, q));
}

inline ExpHist lift_hist(const ExpHist& h, int64_t new_level) {
    if (h.level == new_level) return h;
    ExpHist out(new_level);
    const int64_t stride = new_level / h.level;
    for (int64_t k = 0; k < h.level; ++k)
        if (h.counts[k]) out.counts[k * stride] += h.counts[k];
    return out;
}

/// CRT splitting Kl2(m,n;q1 q2) = Kl2(m q2bar, n q2bar; q1) Kl2(m q1bar, n q1bar; q2),
/// the optimized path validated against naive enumeration.
inline SumValue kloosterman_crt(int64_t m, int64_t n, int64_t q) {
    const auto fact = factorize(q);
    if (fact.factors.size() <= 1) return kloosterman(m, n, q);
    ExpHist acc(1);
    acc.add(0);
    for (const auto& [p, e] : fact.factors) {
        const int64_t pe = ipow(p, e);
        const int64_t rest = q / pe;
        const int64_t rbar = inv_mod(rest % pe, pe);
        const ExpHist comp = kl2_hist(mul_mod(mod_reduce(m, pe), rbar, pe),
                                      mul_mod(mod_reduce(n, pe), rbar, pe), pe);
        const int64_t L = std::lcm(acc.level, pe);
        acc = conv(lift_hist(acc, L), lift_hist(comp, L));
    }
    return SumValue::from_hist(acc);
}

/// Twisted Kloosterman sum: sum over xy = 1 mod q of chi(x) e((mx+ny)/q).
inline SumValue kloosterman_twisted(const DirichletCharacter& chi, int64_t m, int64_t n,
                                    int64_t q) {
    if (chi.modulus() != q) throw PreconditionError("kloosterman_twisted: modulus mismatch");
    const int64_t L = std::lcm(q, std::max<int64_t>(chi.order(), 1));
    ExpHist h(L);
    if (q == 1) {
        h.add(0);
        return SumValue::from_hist(h);
    }
    m = mod_reduce(m, q);
    n = mod_reduce(n, q);
    for (int64_t x = 1; x < q; ++x) {
        if (std::gcd(x, q) != 1) continue;
        const auto ph = chi.phase(x);
        h.add(ph->num * (L / ph->den) +
              mod_reduce(m * x + n * inv_mod(x, q), q) * (L / q));
    }
    return SumValue::from_hist(h);
}

/// Kl3 with divisor parameters: sum over xyz = 1 mod c of
/// e((d1 m x + d1 d2 n y + d1 d2 z)/c).
inline ExpHist kl3_hist(int64_t m, int64_t n, int64_t d1, int64_t d2, int64_t c) {
    if (c < 1 || d1 < 1 || d2 < 1) throw PreconditionError("kl3: arguments must be >= 1");
    if (c % d1 != 0 || (c / d1) % d2 != 0)
        throw PreconditionError("kl3: requires d1 | c and d2 | c/d1");
    ExpHist h(c);
    if (c == 1) {
        h.add(0);
        return h;
    }
    const auto inv = detail::inverse_table(c);
    const int64_t a = mod_reduce(d1 * m, c);
    const int64_t b = mod_reduce(d1 * d2 % c * mod_reduce(n, c), c);
    const int64_t w = mod_reduce(d1 * d2, c);
    for (int64_t x = 1; x < c; ++x) {
        if (std::gcd(x, c) != 1) continue;
        const int64_t ax = mul_mod(a, x, c);
        for (int64_t y = 1; y < c; ++y) {
            if (inv[y] == 0) continue;
            h.add(ax + mul_mod(b, y, c) + mul_mod(w, inv[mul_mod(x, y, c)], c));
        }
    }
    return h;
}

inline SumValue kl3(int64_t m, int64_t n, int64_t d1, int64_t d2, int64_t c) {
    return SumValue::from_hist(kl3_hist(m, n, d1, d2, c));
}

/// The hyper-Kloosterman sum with moduli pair q = (q1,q2), divisors
/// d = (d1,d2): double sum over x1 mod q1c/d1, x2 mod q1q2c/(d1d2) of
/// e(d1 x1 n / c + d2 inv(x1 x2) / (q1c/d1) + x2 m / (q1q2c/(d1d2))).
/// x2 runs over canonical representatives; terms whose inner inverse does not
/// exist mod q1c/d1 are skipped.
inline ExpHist hyper_kl2_hist(int64_t n, int64_t m, int64_t c, int64_t q1, int64_t q2,
                              int64_t d1, int64_t d2) {
    if (c < 1 || q1 < 1 || q2 < 1 || d1 < 1 || d2 < 1)
        throw PreconditionError("hyper_kl2: arguments must be >= 1");
    if ((q1 * c) % d1 != 0 || (q1 * q2 * c / d1) % d2 != 0)
        throw PreconditionError("hyper_kl2: requires d1 | q1 c and d2 | q1 q2 c / d1");
    const int64_t A = q1 * c / d1;
    const int64_t B = q1 * q2 * c / (d1 * d2);
    const int64_t L = std::lcm(std::lcm(c, A), B);
    ExpHist h(L);
    const auto invA = detail::inverse_table(A);
    const auto units1 = units_mod(A);
    const auto units2 = units_mod(B);
    for (int64_t x1 : units1) {
        const int64_t term1 =
            mod_reduce(d1 % c * mod_reduce(x1, c) % c * mod_reduce(n, c), c) * (L / c);
        for (int64_t x2 : units2) {
            int64_t term2 = 0;
            if (A > 1) {
                const int64_t prod = mul_mod(mod_reduce(x1, A), mod_reduce(x2, A), A);
                if (invA[prod] == 0) continue;  // inner inverse does not exist
                term2 = mul_mod(mod_reduce(d2, A), invA[prod], A) * (L / A);
            }
            const int64_t term3 = mul_mod(mod_reduce(x2, B), mod_reduce(m, B), B) * (L / B);
            h.add(term1 + term2 + term3);
        }
    }
    return h;
}

inline SumValue hyper_kl2(int64_t n, int64_t m, int64_t c, int64_t q1, int64_t q2,
                          int64_t d1, int64_t d2) {
    return SumValue::from_hist(hyper_kl2_hist(n, m, c, q1, q2, d1, d2));
}

/// c-sum: sum over units gamma mod q of e((m gamma + n inv(s gamma))/q)
/// times Kl2(u gamma, 1; q); u stands for the reduced unit in the inner
/// Kloosterman argument.
inline ExpHist csum_hist(int64_t u, int64_t s, int64_t m, int64_t n, int64_t q) {
    if (q < 1) throw PreconditionError("csum: q must be >= 1");
    if (q > 1 && std::gcd(mod_reduce(s, q), q) != 1)
        throw PreconditionError("csum: requires gcd(s,q)=1");
    if (q > 1 && std::gcd(mod_reduce(u, q), q) != 1)
        throw PreconditionError("csum: requires gcd(u,q)=1");
    ExpHist h(q);
    if (q == 1) {
        h.add(0);
        return h;
    }
    const auto inv = detail::inverse_table(q);
    u = mod_reduce(u, q);
    s = mod_reduce(s, q);
    m = mod_reduce(m, q);
    n = mod_reduce(n, q);
    for (int64_t g = 1; g < q; ++g) {
        if (inv[g] == 0) continue;
        const int64_t outer = mul_mod(m, g, q) + mul_mod(n, inv[mul_mod(s, g, q)], q);
        const int64_t ug = mul_mod(u, g, q);
        for (int64_t x = 1; x < q; ++x) {
            if (inv[x] == 0) continue;
            h.add(outer + mul_mod(ug, x, q) + inv[x]);
        }
    }
    return h;
}

inline SumValue csum(int64_t u, int64_t s, int64_t m, int64_t n, int64_t q) {
    return SumValue::from_hist(csum_hist(u, s, m, n, q));
}

/// Correlation of two Kloosterman sums against an additive character:
/// sum over ALL gamma mod q of Kl2(m gamma,1;q) * Kl2(n gamma,1;q) * e(h gamma/q),
/// with the second factor conjugated iff conjugate_second.
inline ExpHist correlation_hist(int64_t m, int64_t n, int64_t h, int64_t q,
                                bool conjugate_second) {
    if (q < 2) throw PreconditionError("correlation_sum: q must be >= 2");
    ExpHist out(q);
    const auto inv = detail::inverse_table(q);
    m = mod_reduce(m, q);
    n = mod_reduce(n, q);
    h = mod_reduce(h, q);
    const int64_t sign = conjugate_second ? -1 : 1;
    for (int64_t g = 0; g < q; ++g) {
        const int64_t mg = mul_mod(m, g, q), ng = mul_mod(n, g, q);
        const int64_t hg = mul_mod(h, g, q);
        for (int64_t x = 1; x < q; ++x) {
            if (inv[x] == 0) continue;
            const int64_t first = mul_mod(mg, x, q) + inv[x];
            for (int64_t y = 1; y < q; ++y) {
                if (inv[y] == 0) continue;
                out.add(first + sign * (mul_mod(ng, y, q) + inv[y]) + hg);
            }
        }
    }
    return out;
}

inline SumValue correlation_sum(int64_t m, int64_t n, int64_t h, int64_t q,
                                bool conjugate_second) {
    return SumValue::from_hist(correlation_hist(m, n, h, q, conjugate_second));
}

/// Batch evaluation: deterministic slot-indexed results, parallel across
/// queries.
inline std::vector<SumValue> evaluate_batch(const std::vector<KloostermanQuery>& queries,
                                            int threads = 0) {
    std::vector<SumValue> out(queries.size());
    parallel_for(static_cast<int64_t>(queries.size()), [&](int64_t i) {
        const auto& qr = queries[i];
        switch (qr.kind) {
            case KloostermanQuery::Kind::kl2:
                out[i] = kloosterman(qr.m, qr.n, qr.q);
                break;
            case KloostermanQuery::Kind::kl2_twisted:
                out[i] = kloosterman_twisted(*qr.chi, qr.m, qr.n, qr.q);
                break;
            case KloostermanQuery::Kind::kl3:
                out[i] = kl3(qr.m, qr.n, qr.d1, qr.d2, qr.q);
                break;
            case KloostermanQuery::Kind::hyper_kl2:
                out[i] = hyper_kl2(qr.n, qr.m, qr.q, qr.q1, qr.q2, qr.d1, qr.d2);
                break;
            case KloostermanQuery::Kind::csum:
                out[i] = csum(qr.u, qr.s, qr.m, qr.n, qr.q);
                break;
            case KloostermanQuery::Kind::correlation:
                out[i] = correlation_sum(qr.m, qr.n, qr.h, qr.q, qr.conjugate_second);
                break;
        }
    }, threads);
    return out;
}

}  // namespace klaudit
