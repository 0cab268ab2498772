#include "doctest.h"

#include "nilcyc/errors.hpp"
#include "nilcyc/families.hpp"
#include "nilcyc/lyapunov.hpp"

#include <random>

using namespace nilcyc;

namespace {

MPoly P(const std::string& s) { return MPoly::parse(s); }

BigFloat rel_err(const BigFloat& a, const BigFloat& b) { return abs(a - b) / abs(b); }

// Scaled perturbed family around (1, 0) with a02 = -a12.
SwitchingSystem scaled_family(Z2CubicParams p, const std::map<std::string, Rational>& u, const Rational& eps) {
    p.a02 = -p.a12;
    return scaled_unfolded_z2(p, u, eps);
}

}  // namespace

TEST_CASE("half_return_map of linear fields") {
    PrecisionScope ps(256);
    auto rot = half_return_map({P("-y"), P("x")}, Half::Upper, 5);
    CHECK(abs(rot.v[1] - 1) < BigFloat(1e-70));
    for (unsigned k = 2; k <= 5; ++k) CHECK(abs(rot.v[k]) < BigFloat(1e-70));

    auto lin = half_return_map({P("1/100*x - y"), P("x + 1/100*y")}, Half::Upper, 4);
    BigFloat expect = exp(big_pi() / 100);
    CHECK(abs(lin.v[1] - expect) < BigFloat(1e-70));
    for (unsigned k = 2; k <= 4; ++k) CHECK(abs(lin.v[k]) < BigFloat(1e-70));

    CHECK_THROWS_AS(half_return_map({P("y"), P("-x")}, Half::Upper, 3), PreconditionError);
    CHECK_THROWS_AS(half_return_map({P("-y + x^2"), P("2*x")}, Half::Upper, 3), PreconditionError);
}

TEST_CASE("linear V1 closed form") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> dn(-20, 20), li(0, 2);
    const Rational lams[3] = {Rational(1, 2), Rational(1), Rational(2)};
    for (int t = 0; t < 6; ++t) {
        Rational d(dn(rng), 200), lu = lams[li(rng)], ll = lams[li(rng)];
        PlanarField up{MPoly(d) * P("x") - MPoly(lu) * P("y"), MPoly(lu) * P("x") + MPoly(d) * P("y")};
        PlanarField lo{MPoly(d) * P("x") - MPoly(ll) * P("y"), MPoly(ll) * P("x") + MPoly(d) * P("y")};
        auto rep = displacement_coeffs({up, lo}, 3, 256);
        PrecisionScope ps(256);
        BigFloat pi = big_pi(), dd = to_big(d);
        BigFloat v1 = exp(pi * dd / to_big(lu)) - exp(-pi * dd / to_big(ll));
        CHECK(abs(rep.V[0] - v1) < BigFloat(1e-20));
        CHECK(abs(rep.V[0] - v1) <= rep.tol[0] + BigFloat(1e-70));
        CHECK(abs(rep.V[1]) < BigFloat(1e-60));
    }
}

TEST_CASE("V2 closed form on the scaled family") {
    for (Rational eps : {Rational(1, 10), Rational(1, 16)}) {
        Z2CubicParams p;
        p.b02 = Rational(1, 2);
        auto rep = displacement_coeffs(scaled_family(p, {}, eps), 4, 256);
        PrecisionScope ps(256);
        BigFloat expect = to_big(Rational(8, 3) * eps * Rational(1, 2));
        CHECK(abs(rep.V[0]) < BigFloat(1e-60));
        CHECK(rel_err(rep.V[1], expect) < BigFloat(1e-12));
    }
}

TEST_CASE("V3 leading term carries 2 a12 (a21 + b12)") {
    Z2CubicParams p;
    p.a12 = 1;
    p.a21 = 1;
    std::vector<Rational> eps{Rational(1, 10), Rational(1, 12), Rational(1, 14), Rational(1, 16), Rational(1, 18),
                              Rational(1, 20)};
    auto ex = epsilon_expansion([&](const Rational& e) { return scaled_family(p, {}, e); }, eps, 3, 5, 256);
    PrecisionScope ps(256);
    BigFloat pi = big_pi();
    // Printed form has (pi/4) a12 (a21 + b12) = pi/4; the computed value is twice that.
    CHECK(abs(ex.coeff[2][1] - pi / 2) < BigFloat(1e-40));
    CHECK(abs(ex.coeff[2][0]) < BigFloat(1e-40));
}

TEST_CASE("epsilon_expansion recovers the V2 polynomial") {
    std::map<std::string, Rational> u{{"q02", Rational(1, 4)}};
    Z2CubicParams p;
    p.b02 = Rational(1, 2);
    std::vector<Rational> eps{Rational(1, 10), Rational(1, 12), Rational(1, 14), Rational(1, 16), Rational(1, 18)};
    auto ex = epsilon_expansion([&](const Rational& e) { return scaled_family(p, u, e); }, eps, 2, 4, 256);
    PrecisionScope ps(256);
    CHECK(abs(ex.coeff[1][1] - to_big(Rational(8, 3) * Rational(1, 2))) < BigFloat(1e-40));
    CHECK(abs(ex.coeff[1][3] - to_big(Rational(8, 3) * Rational(1, 4))) < BigFloat(1e-40));
    CHECK(abs(ex.coeff[1][0]) < BigFloat(1e-40));
    CHECK(abs(ex.coeff[1][2]) < BigFloat(1e-40));
    CHECK(abs(ex.coeff[1][4]) < BigFloat(1e-40));

    auto zero = epsilon_expansion([&](const Rational& e) { return scaled_family(Z2CubicParams{}, {}, e); }, eps, 2, 4, 256);
    for (const auto& c : zero.coeff[1]) CHECK(abs(c) < BigFloat(1e-60));

    CHECK_THROWS_AS(epsilon_expansion([&](const Rational& e) { return scaled_family(p, u, e); }, {Rational(1, 2)}, 2, 4, 256),
                    PreconditionError);
}
