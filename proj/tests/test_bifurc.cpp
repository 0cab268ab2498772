#include "doctest.h"

#include "nilcyc/bifurc.hpp"
#include "nilcyc/errors.hpp"
#include "nilcyc/families.hpp"

using namespace nilcyc;

namespace {

MPoly P(const std::string& s) { return MPoly::parse(s); }

Z2CubicParams center_ii() {
    Z2CubicParams p;
    p.a21 = -1;
    p.a03 = -1;
    return p;
}

}  // namespace

TEST_CASE("real roots with exact rational recovery") {
    // (x - 1/3)(x + 2/7)(x^2 - 2)
    UPoly p = restrict_to_axis(P("(x - 1/3)*(x + 2/7)*(x^2 - 2)"));
    auto r = real_roots(p, Rational(2));
    REQUIRE(r.size() == 4);
    CHECK(r[1].exact == Rational(-2, 7));
    CHECK(r[2].exact == Rational(1, 3));
    CHECK_FALSE(r[0].exact);
    CHECK_FALSE(r[3].exact);
    PrecisionScope ps(256);
    CHECK(abs(r[3].approx() - sqrt(BigFloat(2))) < BigFloat(1e-55));

    auto inner = real_roots(p, Rational(1, 2));
    CHECK(inner.size() == 2);
    // repeated root counted once
    CHECK(real_roots(restrict_to_axis(P("(x - 1/5)^3*(x + 1)")), Rational(2)).size() == 2);
    CHECK(real_roots(restrict_to_axis(P("x^2 + 1")), Rational(5)).empty());
    CHECK_THROWS_AS(restrict_to_axis(P("x + b")), PreconditionError);
}

TEST_CASE("sliding segment of the condition-VI unfolding") {
    const Rational eps(1, 10);
    for (Rational b : {Rational(1, 100), Rational(-1, 100), Rational(1, 10000), Rational(-1, 10000)}) {
        auto sys = critical_family({{"A02", Rational(-1)}, {"b", b}}, eps);
        // lower g(x, 0) = (b + x)(1 + eps^3 x)(2 + eps^3 x)/2
        auto gl = sys.lower.Q.substitute({{"y", MPoly(0)}});
        Rational e3 = pow(eps, 3);
        CHECK(gl == (MPoly(b) + P("x")) * (MPoly(1) + e3 * P("x")) * (MPoly(2) + e3 * P("x")) / Rational(2));

        auto s = sliding_segment(sys);
        REQUIRE(s.segment);
        Rational lo = b.sign() > 0 ? -b : Rational(0), hi = b.sign() > 0 ? Rational(0) : -b;
        REQUIRE(s.segment->left.exact);
        REQUIRE(s.segment->right.exact);
        CHECK(*s.segment->left.exact == lo);
        CHECK(*s.segment->right.exact == hi);
        CHECK(s.segment->regime == (b.sign() > 0 ? SlidingRegime::Sliding : SlidingRegime::Escaping));
        CHECK(s.contact_points.empty());
    }

    auto s0 = sliding_segment(critical_family({{"A02", Rational(-1)}}, eps));
    CHECK_FALSE(s0.segment);
    REQUIRE(s0.contact_points.size() == 1);
    CHECK(s0.contact_points[0].exact == Rational(0));

    SwitchingSystem lin{{P("-y"), P("x")}, {P("-y"), P("x")}};
    auto sl = sliding_segment(lin);
    CHECK_FALSE(sl.segment);

    CHECK_THROWS_AS(sliding_segment({{P("-y"), P("y")}, {P("-y"), P("x")}}), PreconditionError);
}

TEST_CASE("independence Jacobian") {
    const Rational eps(1, 10);
    auto fam = [&](const std::map<std::string, Rational>& p) { return critical_family(p, eps); };
    auto j = independence_jacobian(fam, {}, {1, 2}, {"delta1", "Q022"}, 256);
    PrecisionScope ps(256);
    BigFloat expect = 16 * big_pi() / 3 * to_big(pow(eps, 3));
    CHECK(j.conclusive);
    CHECK(abs(j.det - expect) <= j.det_err + BigFloat(1e-50));
    CHECK(abs(j.det - expect) < BigFloat(1e-30));
    CHECK(abs(j.J[0][0] - 2 * big_pi()) < BigFloat(1e-30));

    // V2 does not depend on A03 at this point.
    auto d = independence_jacobian(fam, {}, {1, 2}, {"delta1", "A03"}, 256);
    CHECK(abs(d.det) <= d.det_err + BigFloat(1e-60));
    CHECK_FALSE(d.conclusive);

    CHECK_THROWS_AS(independence_jacobian(fam, {}, {1}, {"delta1", "A03"}, 128), PreconditionError);
}

TEST_CASE("series brackets and sign alternations") {
    PrecisionScope ps(256);
    // rho (rho - 1/10)(rho - 1/5)(rho - 3/10) = rho^4 - 3/5 rho^3 + 11/100 rho^2 - 3/500 rho
    std::vector<BigFloat> V{BigFloat(-3) / 500, BigFloat(11) / 100, BigFloat(-3) / 5, BigFloat(1)};
    auto br = series_brackets(V, BigFloat(1) / 2);
    REQUIRE(br.size() == 3);
    CHECK(abs(br[0].lo - BigFloat(1) / 10) < BigFloat(1e-20));
    CHECK(abs(br[2].hi - BigFloat(3) / 10) < BigFloat(1e-20));
    for (std::size_t i = 1; i < br.size(); ++i) CHECK(br[i - 1].hi < br[i].lo);
    // Window cut below the third root: one bracket fewer than the three alternations.
    CHECK(series_brackets(V, BigFloat(1) / 4).size() == 2);
    CHECK(series_brackets(std::vector<BigFloat>(5, BigFloat(0)), BigFloat(1)).empty());
}

TEST_CASE("unfold cycles at a condition-II center") {
    UnfoldOptions o;
    o.order = 5;
    o.bits = 192;
    auto empty = unfold_cycles(center_ii(), CenterId::II, {}, o);
    CHECK(empty.count == 0);

    // V2 > 0 first, then a small V1 < 0: one crossing cycle near rho = |V1/V2|.
    auto one = unfold_cycles(center_ii(), CenterId::II, {{{"q02", Rational(1, 1000)}}, {{"delta1", Rational(-1, 10000000)}}},
                             o);
    CHECK(one.count == 1);
    CHECK(one.stage_counts == std::vector<std::size_t>{0, 1});
    CHECK(one.precision_stable);
    CHECK(one.count <= one.sign_alternations);

    CHECK_THROWS_AS(unfold_cycles(Z2CubicParams{}, CenterId::II, {}, o), PreconditionError);
    CHECK_THROWS_AS(unfold_cycles(center_ii(), CenterId::II, {{{"zz", Rational(1)}}}, o), PreconditionError);
}

TEST_CASE("pseudo-Hopf cycle") {
    const Rational eps(1, 10);
    auto fam = [&](const Rational& b) {
        return critical_family({{"A02", Rational(-1)}, {"delta1", Rational(1, 100)}, {"b", b}}, eps);
    };
    auto none = pseudo_hopf_cycle(fam, Rational(0));
    CHECK_FALSE(none.bracket);
    CHECK_FALSE(none.diagnostics.empty());

    BigFloat prev = 1;
    for (Rational b : {Rational(1, 1000), Rational(1, 10000), Rational(1, 100000)}) {
        auto r = pseudo_hopf_cycle(fam, b);
        REQUIRE(r.bracket);
        CHECK(r.confirmed);
        PrecisionScope ps(128);
        CHECK(r.amplitude < prev);
        // leading order: 2 pi delta1 rho = 2 b
        BigFloat lead = to_big(b) * 100 / big_pi();
        CHECK(abs(r.amplitude - lead) < lead / 20);
        prev = r.amplitude;
    }

    // Opposite signs of b and delta1: no crossing cycle in the window.
    auto opp = pseudo_hopf_cycle(fam, Rational(-1, 1000));
    CHECK_FALSE(opp.bracket);
}
