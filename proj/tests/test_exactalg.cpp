#include "doctest.h"

#include "nilcyc/errors.hpp"
#include "nilcyc/mpoly.hpp"
#include "nilcyc/resultant.hpp"
#include "nilcyc/series.hpp"

#include <chrono>
#include <random>

using namespace nilcyc;

namespace {

MPoly P(const char* s) { return MPoly::parse(s); }

// Random polynomial of total degree <= 3 in x, y, a with small rational coefficients.
MPoly random_poly(std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4), deg(0, 3);
    MPoly x = MPoly::variable("x"), y = MPoly::variable("y"), a = MPoly::variable("a");
    MPoly out;
    for (int t = 0; t < 5; ++t) {
        int i = deg(rng), j = deg(rng), k = deg(rng);
        if (i + j + k > 3) continue;
        out += Rational(num(rng), den(rng)) * (pow(x, i) * pow(y, j) * pow(a, k));
    }
    return out;
}

}  // namespace

TEST_CASE("rational parsing and canonical form") {
    CHECK(Rational::parse("3/10") == Rational(3, 10));
    CHECK(Rational::parse("-6/4").str() == "-3/2");
    CHECK(Rational::parse(" 7 ") == Rational(7));
    CHECK(Rational(2, -4).str() == "-1/2");
    CHECK_THROWS_AS(Rational::parse("1/0"), ParseError);
    CHECK(Rational::parse("0.5") == Rational(1, 2));
    CHECK(Rational::parse("-2.125") == Rational(-17, 8));
    CHECK(Rational::parse(".25") == Rational(1, 4));
    CHECK_THROWS_AS(Rational::parse("1.2.3"), ParseError);
    CHECK_THROWS_AS(Rational::parse("."), ParseError);
    CHECK_THROWS_AS(Rational::parse("abc"), ParseError);
}

TEST_CASE("poly_eval") {
    CHECK(P("x^2 + y").eval({{"x", 2}, {"y", 3}}) == Rational(7));
    CHECK(MPoly().eval({{"q", 1}}) == Rational(0));
    MPoly f3 = P("a03 - 2*a21*b02 - 2*a21*b12");
    CHECK(f3.eval({{"a03", -4}, {"a21", 1}, {"b02", 0}, {"b12", 1}}) == Rational(-6));
    try {
        P("x*y").eval({{"x", 1}});
        FAIL("expected an error");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("'y'") != std::string::npos);
    }
}

TEST_CASE("poly_derivative") {
    CHECK(P("x^3").derivative("x") == P("3*x^2"));
    CHECK(P("x*y^2").derivative("y") == P("2*x*y"));
    CHECK_THROWS_AS(P("x").derivative("z"), PreconditionError);
}

TEST_CASE("parser grammar and printing round trip") {
    MPoly p = P("-1/2*x + 1/2*x^3 + b12*x*y^2");
    CHECK(p.terms().size() == 3);
    CHECK(P(p.str().c_str()) == p);
    CHECK(P("2x y") == P("2*x*y"));
    CHECK(P("(x+1)^2") == P("x^2 + 2*x + 1"));
    CHECK(P("x/2") == P("1/2*x"));
    CHECK(P("x - x") .is_zero());
    try {
        P("x^^2");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.column() == 3);
    }
    CHECK_THROWS_AS(P("x +"), ParseError);
    CHECK_THROWS_AS(P("3 ** x"), ParseError);
}

TEST_CASE("substitution and shifting") {
    MPoly p = P("x^2*y + 3");
    MPoly q = p.substitute({{"x", P("x + 1")}});
    CHECK(q == P("x^2*y + 2*x*y + y + 3"));
    CHECK(q.substitute({{"x", P("x - 1")}}) == p);
    CHECK(p.substitute({{"x", MPoly(2)}, {"y", MPoly(Rational(1, 2))}}) == MPoly(5));
}

TEST_CASE("exact division") {
    MPoly a = P("x^2 - y^2"), b = P("x - y");
    CHECK(MPoly::divide_exact(a, b) == P("x + y"));
    CHECK_THROWS(MPoly::divide_exact(P("x^2 + 1"), b));
}

TEST_CASE("ring axioms on random polynomials") {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 50; ++trial) {
        MPoly p = random_poly(rng), q = random_poly(rng), r = random_poly(rng);
        CHECK((p + q) * r == p * r + q * r);
        CHECK(p * q == q * p);
        CHECK((p * q) * r == p * (q * r));
        CHECK((p + q) + r == p + (q + r));
        CHECK(p - p == MPoly(0));
    }
}

TEST_CASE("resultant small oracles") {
    CHECK(resultant(P("x - a"), P("x - b"), "x") == P("a - b"));
    // 4x4 Sylvester determinant of x^2+1 and x^2-1.
    CHECK(resultant(P("x^2 + 1"), P("x^2 - 1"), "x") == MPoly(4));
    CHECK_THROWS_AS(resultant(MPoly(0), P("x"), "x"), PreconditionError);
    CHECK_THROWS_AS(resultant(P("y + 1"), P("x"), "x"), PreconditionError);
}

TEST_CASE("resultant of the degree-six Lyapunov factors") {
    MPoly v6a = P("(7*b21^2 + 40*b21*p02 - 80*p02^2)*(29*b21^2 - 40*b21*p02 + 80*p02^2)");
    MPoly v6b = P("551*b21^2 + 1544*b21*p02 - 3088*p02^2");
    auto t0 = std::chrono::steady_clock::now();
    MPoly r = resultant(v6a, v6b, "p02");
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(r == P("9011459133227925504*b21^8"));
    CHECK(secs < 1.0);
}

TEST_CASE("resultant symmetry and planted common roots") {
    std::mt19937 rng(777);
    std::uniform_int_distribution<int> c(-4, 4);
    MPoly x = MPoly::variable("x"), a = MPoly::variable("a");
    for (int trial = 0; trial < 30; ++trial) {
        auto rnd_univ = [&](int deg) {
            int lead = c(rng);
            MPoly p = pow(x, deg) * Rational(lead == 0 ? 1 : lead);
            for (int k = 0; k < deg; ++k) p += (Rational(c(rng)) + Rational(c(rng)) * a) * pow(x, k);
            return p;
        };
        int df = 1 + trial % 3, dg = 1 + (trial / 3) % 3;
        MPoly f = rnd_univ(df), g = rnd_univ(dg);
        MPoly rfg = resultant(f, g, "x"), rgf = resultant(g, f, "x");
        Rational sgn = ((df * dg) % 2) ? Rational(-1) : Rational(1);
        CHECK(rfg == rgf * sgn);

        // Plant a common factor (x - a): the resultant vanishes identically in a.
        MPoly h = x - a;
        CHECK(resultant(f * h, g * h, "x").is_zero());
        // and at a point: common root x = 2 when a = 2 for (x-2)(..) and (x-a)(..)
        MPoly f2 = f * (x - MPoly(2)), g2 = g * h;
        CHECK(resultant(f2, g2, "x").eval({{"a", 2}}) == Rational(0));
    }
}

TEST_CASE("series compose and invert") {
    using S = Series<Rational>;
    S id = S::identity(6);
    CHECK(series_compose_invert(id).coeffs() == id.coeffs());

    // Lagrange inversion of y + y^2: Catalan numbers with alternating signs.
    S s(6, {0, 1, 1});
    S t = series_compose_invert(s);
    CHECK(t[1] == Rational(1));
    CHECK(t[2] == Rational(-1));
    CHECK(t[3] == Rational(2));
    CHECK(t[4] == Rational(-5));
    CHECK(t[5] == Rational(14));
    CHECK(s.compose(t).coeffs() == id.coeffs());
    CHECK(t.compose(s).coeffs() == id.coeffs());

    S lin(4, {0, Rational(3, 7)});
    CHECK(series_compose_invert(lin)[1] == Rational(7, 3));

    CHECK_THROWS_AS(series_compose_invert(S(4, {0, 0, 1})), PreconditionError);

    std::mt19937 rng(5);
    std::uniform_int_distribution<int> c(-6, 6);
    for (int trial = 0; trial < 10; ++trial) {
        S r(8);
        int lead = c(rng);
        r[1] = Rational(lead == 0 ? 1 : lead, 3);
        for (int k = 2; k <= 8; ++k) r[k] = Rational(c(rng), 5);
        CHECK(r.compose(series_compose_invert(r)).coeffs() == S::identity(8).coeffs());
    }
}
