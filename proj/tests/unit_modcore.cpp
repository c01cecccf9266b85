#include <catch2/catch_amalgamated.hpp>

#include "klaudit/arith.hpp"
#include "klaudit/character.hpp"
#include "klaudit/cyclo.hpp"
#include "klaudit/unitgroup.hpp"

using namespace klaudit;

TEST_CASE("factorize basics") {
    auto f = factorize(12);
    REQUIRE(f.factors == std::vector<PrimePower>{{2, 2}, {3, 1}});
    REQUIRE(factorize(1).factors.empty());
    REQUIRE(factorize(97).factors == std::vector<PrimePower>{{97, 1}});
    REQUIRE(euler_phi(12) == 4);
    REQUIRE(euler_phi(1) == 1);
}

TEST_CASE("unit group structure") {
    // brute-force oracle: order of each generator, product of orders = phi
    auto g5 = unit_group(5);
    REQUIRE(g5->generators().size() == 1);
    REQUIRE(g5->generators()[0].order == 4);
    {
        int64_t g = g5->generators()[0].residue;
        int64_t acc = g, k = 1;
        while (acc != 1) { acc = mul_mod(acc, g, 5); ++k; }
        REQUIRE(k == 4);
    }

    auto g8 = unit_group(8);
    std::vector<int64_t> residues, orders;
    for (auto& gen : g8->generators()) {
        residues.push_back(gen.residue);
        orders.push_back(gen.order);
    }
    REQUIRE(residues == std::vector<int64_t>{7, 3});
    REQUIRE(orders == std::vector<int64_t>{2, 2});

    REQUIRE(unit_group(1)->phi() == 1);
    REQUIRE(unit_group(1)->generators().empty());

    // every unit decomposes uniquely: spot-check a composite modulus
    auto g360 = unit_group(360);
    int64_t prod = 1;
    for (auto& gen : g360->generators()) prod *= gen.order;
    REQUIRE(prod == euler_phi(360));
    for (int64_t x : units_mod(360)) {
        auto e = g360->dlog(x);
        int64_t acc = 1;
        for (std::size_t i = 0; i < e.size(); ++i)
            acc = mul_mod(acc, pow_mod(g360->generators()[i].residue, e[i], 360), 360);
        REQUIRE(acc == x);
    }
}

TEST_CASE("character counts and principal values") {
    REQUIRE(characters(12).size() == 4);
    auto chi0 = DirichletCharacter::principal(6);
    REQUIRE(char_eval(chi0, 5) == CycNumber::one());
    REQUIRE(char_eval(chi0, 4).is_zero());
}

TEST_CASE("quadratic character mod 5") {
    // enumeration of squares mod 5: residues {1,4}
    DirichletCharacter quad(5, {2});
    REQUIRE(quad.order() == 2);
    REQUIRE(char_eval(quad, 4) == CycNumber::one());
    REQUIRE(char_eval(quad, 3) == -CycNumber::one());
    REQUIRE(char_eval(quad, 3) == CycNumber::from_rational(Rat(-1)));
}

TEST_CASE("multiplicativity is exact in cyclotomic form") {
    for (int64_t q : {5, 8, 12, 45}) {
        for (const auto& chi : characters(q)) {
            for (int64_t m = 0; m < q; ++m)
                for (int64_t n = 0; n < q; n += 3)
                    REQUIRE(char_eval(chi, m * n) == char_eval(chi, m) * char_eval(chi, n));
        }
    }
}

TEST_CASE("conductor") {
    for (int64_t q : {6, 9, 12, 40}) {
        auto chi0 = DirichletCharacter::principal(q);
        REQUIRE(conductor(chi0) == 1);
    }
    // the character mod 9 induced from the nontrivial character mod 3
    DirichletCharacter chi3(3, {1});
    auto chi9 = induced_character(chi3, 9);
    REQUIRE(conductor(chi9) == 3);
    REQUIRE(!chi9.is_primitive());
    // any nonprincipal character mod a prime is primitive
    for (const auto& chi : characters(13))
        if (!chi.is_principal()) REQUIRE(conductor(chi) == 13);
}

TEST_CASE("conductor matches enumeration oracle and induction reproduces chi") {
    for (int64_t q : {8, 9, 12, 24, 36, 40, 60}) {
        for (const auto& chi : characters(q)) {
            // oracle: smallest f | q such that chi is constant on classes
            // n = 1 mod f intersected with units mod q
            int64_t oracle = 0;
            for (int64_t f : divisors(q)) {
                bool trivial_on_kernel = true;
                for (int64_t n = 1; n < q && trivial_on_kernel; n += f)
                    if (std::gcd(n, q) == 1 && !(char_eval(chi, n) == CycNumber::one()))
                        trivial_on_kernel = false;
                if (trivial_on_kernel) { oracle = f; break; }
            }
            REQUIRE(conductor(chi) == oracle);
            // induction from the conductor reproduces chi on all units
            auto prim = restrict_to_conductor(chi);
            REQUIRE(prim.is_primitive());
            auto back = induced_character(prim, q);
            for (int64_t n : units_mod(q))
                REQUIRE(char_eval(back, n) == char_eval(chi, n));
        }
    }
}

TEST_CASE("parity") {
    DirichletCharacter quad(5, {2});
    REQUIRE(quad.is_even());
    DirichletCharacter chi4(4, {1});
    REQUIRE(!chi4.is_even());
}

TEST_CASE("orthogonality over the character group") {
    // sum over chi of chi(a) vanishes exactly for units a != 1, q <= 200
    for (int64_t q = 1; q <= 200; ++q) {
        const int64_t lam = std::max<int64_t>(carmichael(q), 1);
        for (int64_t a : units_mod(q)) {
            ExpHist h(lam);
            for (const auto& chi : characters(q)) {
                auto ph = chi.phase(a);
                REQUIRE(ph.has_value());
                h.add(ph->num * (lam / ph->den));
            }
            if (a == 1 % q) {
                auto v = SumValue::from_hist(h);
                REQUIRE(v.exact);
                REQUIRE(*v.exact == CycNumber::from_rational(Rat(euler_phi(q))));
            } else {
                REQUIRE(h.is_zero());
            }
        }
    }
}

TEST_CASE("gauss sum of the quadratic character mod 5 is sqrt(5)") {
    DirichletCharacter quad(5, {2});
    auto tau = gauss_sum(quad);
    REQUIRE(tau.exact);
    // sqrt(5) = 1 + 2*zeta5 + 2*zeta5^4
    auto sqrt5 = CycNumber::one(5) + Rat(2) * CycNumber::root_power(5, 1) +
                 Rat(2) * CycNumber::root_power(5, 4);
    REQUIRE(*tau.exact == sqrt5);
    REQUIRE(std::abs(tau.approx.to_double().real() - 2.2360679774997896) < 1e-14);
    REQUIRE(std::abs(tau.approx.to_double().imag()) < 1e-14);
    REQUIRE(tau.error_bound < std::pow(2.0, -40));
}

TEST_CASE("|tau(chi)|^2 = q for every primitive chi, q <= 60") {
    for (int64_t q = 2; q <= 60; ++q) {
        for (const auto& chi : characters(q)) {
            if (!chi.is_primitive()) continue;
            auto tau = gauss_sum(chi);
            REQUIRE(tau.exact);
            auto norm = *tau.exact * tau.exact->conj();
            REQUIRE(norm == CycNumber::from_rational(Rat(q)));
        }
    }
}

TEST_CASE("tau_star at n0 = 1 equals the gauss sum") {
    for (int64_t q : {2, 3, 5, 8, 12}) {
        for (const auto& chi : characters(q)) {
            auto lhs = tau_star(chi, 1, q);
            auto rhs = gauss_sum(chi);
            REQUIRE(lhs.exact_equals(rhs));
        }
    }
}

TEST_CASE("tau_star vanishes for n0 sharing a factor with q, psi primitive") {
    for (int64_t q = 2; q <= 60; ++q) {
        for (const auto& chi : characters(q)) {
            if (!chi.is_primitive()) continue;
            for (int64_t n0 = 2; n0 <= q; ++n0) {
                if (std::gcd(n0, q) == 1) continue;
                auto v = tau_star(chi, n0, q);
                REQUIRE(v.exact);
                REQUIRE(v.exact->is_zero());
            }
        }
    }
}
