#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace klaudit {

using std::int64_t;
using std::uint64_t;

struct PrimePower {
    int64_t prime;
    int exponent;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime-power decomposition of a positive modulus. factors is empty for q=1
/// and kept in strictly increasing prime order.
struct ModulusFactorization {
    int64_t q = 1;
    std::vector<PrimePower> factors;
};

inline ModulusFactorization factorize(int64_t q) {
    if (q < 1) throw std::invalid_argument("factorize: q must be >= 1");
    ModulusFactorization out;
    out.q = q;
    int64_t n = q;
    for (int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        out.factors.push_back({p, e});
    }
    if (n > 1) out.factors.push_back({n, 1});
    return out;
}

inline int64_t ipow(int64_t b, int e) {
    int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

inline int64_t euler_phi(const ModulusFactorization& f) {
    int64_t phi = 1;
    for (const auto& [p, e] : f.factors) phi *= ipow(p, e - 1) * (p - 1);
    return phi;
}

inline int64_t euler_phi(int64_t q) { return euler_phi(factorize(q)); }

/// Exponent of (Z/q)^x (Carmichael function).
inline int64_t carmichael(int64_t q) {
    const auto f = factorize(q);
    int64_t lam = 1;
    for (const auto& [p, e] : f.factors) {
        int64_t comp;
        if (p == 2)
            comp = e == 1 ? 1 : (e == 2 ? 2 : ipow(2, e - 2));
        else
            comp = ipow(p, e - 1) * (p - 1);
        lam = std::lcm(lam, comp);
    }
    return lam;
}

inline std::vector<int64_t> divisors(int64_t q) {
    const auto f = factorize(q);
    std::vector<int64_t> divs{1};
    for (const auto& [p, e] : f.factors) {
        const std::size_t n = divs.size();
        int64_t pe = 1;
        for (int i = 1; i <= e; ++i) {
            pe *= p;
            for (std::size_t j = 0; j < n; ++j) divs.push_back(divs[j] * pe);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

inline int64_t mod_reduce(int64_t a, int64_t q) {
    int64_t r = a % q;
    return r < 0 ? r + q : r;
}

inline int64_t mul_mod(int64_t a, int64_t b, int64_t q) {
    return static_cast<int64_t>((static_cast<__int128>(a) * b) % q);
}

inline int64_t pow_mod(int64_t b, int64_t e, int64_t q) {
    if (q == 1) return 0;
    int64_t r = 1;
    b = mod_reduce(b, q);
    while (e > 0) {
        if (e & 1) r = mul_mod(r, b, q);
        b = mul_mod(b, b, q);
        e >>= 1;
    }
    return r;
}

/// Inverse of a mod q; throws on non-units (callers that want 0 for
/// non-units, like character evaluation, must check gcd first).
inline int64_t inv_mod(int64_t a, int64_t q) {
    if (q == 1) return 0;
    a = mod_reduce(a, q);
    int64_t t = 0, new_t = 1, r = q, new_r = a;
    while (new_r != 0) {
        const int64_t quot = r / new_r;
        t = std::exchange(new_t, t - quot * new_t);
        r = std::exchange(new_r, r - quot * new_r);
    }
    if (r != 1) throw std::domain_error("inv_mod: argument is not a unit");
    return t < 0 ? t + q : t;
}

inline bool is_prime(int64_t n) {
    if (n < 2) return false;
    for (int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2))
        if (n % p == 0) return false;
    return true;
}

inline std::vector<int64_t> primes_up_to(int64_t n) {
    std::vector<bool> sieve(std::max<int64_t>(n + 1, 2), true);
    sieve[0] = sieve[1] = false;
    for (int64_t p = 2; p * p <= n; ++p)
        if (sieve[p])
            for (int64_t k = p * p; k <= n; k += p) sieve[k] = false;
    std::vector<int64_t> out;
    for (int64_t p = 2; p <= n; ++p)
        if (sieve[p]) out.push_back(p);
    return out;
}

/// Units of Z/q as sorted residues. q=1 yields {0}, the zero-phase
/// convention used by the degenerate sums.
inline std::vector<int64_t> units_mod(int64_t q) {
    if (q == 1) return {0};
    std::vector<int64_t> out;
    for (int64_t x = 1; x < q; ++x)
        if (std::gcd(x, q) == 1) out.push_back(x);
    return out;
}

}  // namespace klaudit
