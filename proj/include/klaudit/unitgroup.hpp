#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <shared_mutex>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"

namespace klaudit {

struct UnitGenerator {
    int64_t residue;  // global residue mod q (CRT-lifted)
    int64_t order;
    int64_t prime;    // prime-power component this generator spans
    int exponent;
};

/// Structure of (Z/q)^x on a fixed deterministic generator basis: components
/// in increasing prime order, 2^k (k>=3) contributing [-1, 3]. Every unit is
/// a unique product of generator powers; the discrete-log table is built once
/// per modulus and shared behind a read-optimized cache.
class UnitGroup {
public:
    explicit UnitGroup(int64_t q) : q_(q) {
        if (q < 1) throw PreconditionError("UnitGroup: q must be >= 1");
        const auto fact = factorize(q);
        for (const auto& [p, e] : fact.factors) {
            const int64_t pe = ipow(p, e);
            const int64_t rest = q / pe;
            if (p == 2) {
                if (e == 1) continue;  // trivial component
                if (e == 2) {
                    push_generator(crt_lift(3, pe, rest), 2, p, e);
                } else {
                    push_generator(crt_lift(pe - 1, pe, rest), 2, p, e);
                    push_generator(crt_lift(3, pe, rest), ipow(2, e - 2), p, e);
                }
            } else {
                const int64_t g = primitive_root_mod_prime_power(p, e);
                push_generator(crt_lift(g, pe, rest), ipow(p, e - 1) * (p - 1), p, e);
            }
        }
        phi_ = 1;
        for (const auto& g : generators_) phi_ *= g.order;
        build_dlog_table();
    }

    int64_t modulus() const { return q_; }
    int64_t phi() const { return phi_; }
    const std::vector<UnitGenerator>& generators() const { return generators_; }
    std::vector<int64_t> structure() const {
        std::vector<int64_t> s;
        for (const auto& g : generators_) s.push_back(g.order);
        return s;
    }

    bool is_unit(int64_t n) const { return std::gcd(mod_reduce(n, q_), q_) == 1 || q_ == 1; }

    /// Exponent vector of a unit on the generator basis.
    const std::vector<int32_t>& dlog(int64_t n) const {
        const int64_t r = q_ == 1 ? 0 : mod_reduce(n, q_);
        const auto it = dlog_.find(r);
        if (it == dlog_.end())
            throw PreconditionError("UnitGroup::dlog: argument is not a unit");
        return it->second;
    }

private:
    static int64_t primitive_root_mod_prime_power(int64_t p, int e) {
        // smallest primitive root mod p, bumped by p if it fails to stay
        // primitive mod p^2 (then it is primitive for every p^e)
        int64_t g = 2;
        for (;; ++g) {
            if (order_mod(g, p) == p - 1) break;
        }
        if (e == 1) return g;
        const int64_t p2 = p * p;
        if (pow_mod(g, p - 1, p2) == 1) g += p;
        return g;
    }
    static int64_t order_mod(int64_t g, int64_t m) {
        int64_t v = mod_reduce(g, m), acc = v, k = 1;
        while (acc != 1) {
            acc = mul_mod(acc, v, m);
            if (++k > m) throw std::logic_error("order_mod: not a unit");
        }
        return k;
    }
    int64_t crt_lift(int64_t g, int64_t pe, int64_t rest) const {
        if (rest == 1) return mod_reduce(g, q_);
        // x = g mod pe, x = 1 mod rest
        const int64_t inv = inv_mod(rest % pe, pe);
        const int64_t t = mul_mod(mod_reduce(g - 1, pe), inv, pe);
        return mod_reduce(1 + rest * t, q_);
    }
    void push_generator(int64_t residue, int64_t order, int64_t prime, int exponent) {
        generators_.push_back({residue, order, prime, exponent});
    }
    void build_dlog_table() {
        std::vector<int32_t> exps(generators_.size(), 0);
        int64_t value = q_ == 1 ? 0 : 1;
        for (;;) {
            dlog_[value] = exps;
            std::size_t i = 0;
            for (; i < generators_.size(); ++i) {
                value = mul_mod(value, generators_[i].residue, q_);
                if (++exps[i] < generators_[i].order) break;
                exps[i] = 0;
                // wrapping multiplies by residue^order == 1; value is back
            }
            if (i == generators_.size()) break;
        }
        if (static_cast<int64_t>(dlog_.size()) != phi_)
            throw std::logic_error("UnitGroup: generator basis does not span the units");
    }

    int64_t q_;
    int64_t phi_ = 1;
    std::vector<UnitGenerator> generators_;
    std::map<int64_t, std::vector<int32_t>> dlog_;
};

inline std::shared_ptr<const UnitGroup> unit_group(int64_t q) {
    static std::shared_mutex mutex;
    static std::map<int64_t, std::shared_ptr<const UnitGroup>> cache;
    {
        std::shared_lock lock(mutex);
        if (auto it = cache.find(q); it != cache.end()) return it->second;
    }
    auto built = std::make_shared<const UnitGroup>(q);
    std::unique_lock lock(mutex);
    return cache.try_emplace(q, std::move(built)).first->second;
}

}  // namespace klaudit
