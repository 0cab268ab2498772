#include "doctest.h"

#include "nilcyc/centers.hpp"
#include "nilcyc/errors.hpp"

#include <fstream>
#include <set>
#include <sstream>

using namespace nilcyc;

namespace {

MPoly P(const std::string& s) { return MPoly::parse(s); }

Z2CubicParams center_ii() {
    Z2CubicParams p;
    p.a21 = -1;
    p.a03 = -1;
    return p;
}

Z2CubicParams center_iv() {
    Z2CubicParams p;
    p.a21 = Rational(-3, 2);
    p.a03 = -3;
    p.b21 = -2;
    p.b12 = -2;
    p.b03 = 5;
    return p;
}

Z2CubicParams center_v() {
    Z2CubicParams p;
    p.a02 = -1;
    p.a21 = 1;
    p.a03 = 1;
    p.b12 = 1;
    return p;
}

Z2CubicParams center_vi() {
    Z2CubicParams p;
    p.a02 = -4;
    p.a21 = -1;
    p.b03 = -1;
    p.a12 = 3;
    p.a03 = 1;
    p.b12 = 1;
    return p;
}

Z2CubicParams cond1() {
    Z2CubicParams p;
    p.a21 = 1;
    p.a12 = 3;
    p.a02 = -3;
    p.a03 = -3;
    p.b12 = -1;
    p.b03 = -1;
    return p;
}

Z2CubicParams cusp_point() {
    Z2CubicParams p;
    p.a02 = 1;
    p.b12 = 1;
    p.a21 = -1;
    p.a12 = -1;
    p.a03 = -4;
    p.b03 = Rational(1, 3);
    return p;
}

// Rational condition-III point: M1 = 0 with b21 = 1/2.
Z2CubicParams cond3_rational() {
    Z2CubicParams p;
    p.a21 = 1;
    p.b21 = Rational(1, 2);
    p.b12 = -1;
    p.b03 = Rational(-1, 3);
    p.a03 = Rational(-10, 3);
    return p;
}

ParamInstance center_iii() {
    ParamInstance inst = ParamInstance::exact(Z2CubicParams{});
    inst.root = QuadraticRoot{"r", Rational(9, 20)};
    inst.values["a21"] = MPoly(1);
    inst.values["a03"] = MPoly(-4);
    inst.values["b12"] = MPoly(-1);
    inst.values["b21"] = P("r");
    inst.values["b03"] = P("-2/3*r");
    return inst;
}

std::string rel_word(Rel r) {
    switch (r) {
        case Rel::Zero: return "eq";
        case Rel::Positive: return "gt";
        case Rel::Negative: return "lt";
        case Rel::NonZero: return "ne";
    }
    return "";
}

}  // namespace

TEST_CASE("stored conditions match the golden transcription") {
    std::ifstream in(std::string(NILCYC_SOURCE_DIR) + "/tests/golden/conditions.txt");
    REQUIRE(in.good());
    std::set<std::string> golden, stored;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string id, kind, rest;
        ls >> id >> kind;
        if (kind == "eq") {
            std::getline(ls, rest);
            golden.insert(id + " eq " + P(rest).compact().str());
        } else {
            std::string rel;
            ls >> rel;
            std::getline(ls, rest);
            golden.insert(id + " " + kind + " " + rel + " " + P(rest).compact().str());
        }
    }
    for (int i = 1; i <= 6; ++i) {
        const auto& c = center_condition(static_cast<CenterId>(i));
        std::string id = to_string(c.id);
        for (const auto& e : c.equalities) stored.insert(id + " eq " + e.compact().str());
        for (std::size_t k = 0; k < c.alternatives.size(); ++k)
            for (const auto& con : c.alternatives[k])
                stored.insert(id + " alt" + std::to_string(k + 1) + " " + rel_word(con.rel) + " " +
                              con.poly.compact().str());
    }
    CHECK(golden.size() == 41);
    CHECK(golden == stored);
}

TEST_CASE("condition membership") {
    CHECK(condition_membership(center_iv(), CenterId::IV).holds);
    CHECK(condition_membership(center_vi(), CenterId::VI).holds);
    CHECK(condition_membership(center_v(), CenterId::V).holds);
    CHECK(condition_membership(center_ii(), CenterId::II).holds);
    CHECK(condition_membership(cond1(), CenterId::I).holds);
    CHECK(condition_membership(cond3_rational(), CenterId::III).holds);
    CHECK(condition_membership(center_iii(), CenterId::III).holds);

    for (int i = 1; i <= 6; ++i) {
        auto m = condition_membership(Z2CubicParams{}, static_cast<CenterId>(i));
        CHECK_FALSE(m.holds);
        CHECK_FALSE(m.violated.empty());
        CHECK_FALSE(condition_membership(cusp_point(), static_cast<CenterId>(i)).holds);
    }

    // a12 > 0 is the only failing constraint for the cusp point under I.
    auto m = condition_membership(cusp_point(), CenterId::I);
    REQUIRE(m.violated.size() == 1);
    CHECK(m.violated[0].find("a12 > 0") != std::string::npos);

    // VI second branch a02 = a12 < 0.
    Z2CubicParams v = center_vi();
    v.a02 = -1;
    v.a12 = -1;
    v.b03 = Rational(1, 3);
    CHECK(condition_membership(v, CenterId::VI).holds);
    v.a02 = -1;
    v.a12 = 1;
    v.b03 = Rational(-1, 3);
    CHECK_FALSE(condition_membership(v, CenterId::VI).holds);

    // IV endpoints are excluded: b12 = -(9 - 4 sqrt 3)/8 b21^2 is irrational, so probe both sides.
    Z2CubicParams iv = center_iv();
    iv.b12 = -1;  // -(9 - 4 sqrt 3)/8 * 4 = -1.0358..., so b12 = -1 lies outside
    iv.a03 = Rational(3, 16) * 4 * (4 * iv.b12 + 4);
    iv.b03 = iv.b21 * (8 * iv.b12 - 4) / 8;
    CHECK_FALSE(condition_membership(iv, CenterId::IV).holds);

    CHECK(parse_center_id("III") == CenterId::III);
    CHECK_THROWS_AS(parse_center_id("VII"), PreconditionError);
}

TEST_CASE("quadratic root arithmetic") {
    QuadraticRoot r{"r", Rational(2)};
    auto [a, b] = split_root(P("r^3 + 3*r^2 + x*r"), r);
    CHECK(a == MPoly(6));
    CHECK(b == P("2 + x"));
    CHECK(sign_with_root(Rational(-1), Rational(1), Rational(2)) == 1);
    CHECK(sign_with_root(Rational(2), Rational(-1), Rational(2)) == 1);
    CHECK(sign_with_root(Rational(1), Rational(-1), Rational(2)) == -1);
    CHECK(sign_with_root(Rational(-2), Rational(1), Rational(4)) == 0);
    CHECK(sign_with_root(Rational(0), Rational(-3), Rational(5)) == -1);

    PrecisionScope ps(256);
    Z2CubicParams ap = center_iii().approximate(200);
    CHECK(abs(to_big(ap.b21) - sqrt(to_big(Rational(9, 20)))) < ldexp(BigFloat(1), -200));
    CHECK_THROWS_AS(center_iii().rational(), PreconditionError);
}

TEST_CASE("Hamiltonian certificates") {
    auto c1 = certify_center(cond1(), CenterId::I);
    CHECK(c1.route == CenterRoute::HamiltonianMatch);
    REQUIRE(c1.H_upper);
    REQUIRE(c1.H_lower);
    CHECK(c1.H_upper->substitute({{"y", MPoly(0)}}) == c1.H_lower->substitute({{"y", MPoly(0)}}));
    auto hu = hamiltonian_of({c1.H_upper->derivative("y"), -c1.H_upper->derivative("x")});
    REQUIRE(hu);
    CHECK(*hu == *c1.H_upper);
    REQUIRE(c1.spotcheck);
    CHECK(c1.spotcheck->vanishes);

    auto c6 = certify_center(center_vi(), CenterId::VI);
    CHECK(c6.route == CenterRoute::HamiltonianMatch);
    CHECK(c6.H_upper->substitute({{"y", MPoly(0)}}) == c6.H_lower->substitute({{"y", MPoly(0)}}));
    CHECK(c6.spotcheck->vanishes);

    CHECK_THROWS_AS(certify_center(cusp_point(), CenterId::I), PreconditionError);
}

TEST_CASE("symmetry certificates") {
    auto c5 = certify_center(center_v(), CenterId::V);
    CHECK(c5.route == CenterRoute::SwitchingSymmetry);
    CHECK(c5.symmetry);
    CHECK(c5.spotcheck->vanishes);
    auto c2 = certify_center(center_ii(), CenterId::II);
    CHECK(c2.route == CenterRoute::SwitchingSymmetry);
    CHECK(c2.spotcheck->vanishes);
}

TEST_CASE("condition III integrating factor") {
    CHECK(condition_iii_identity() == IdentityForm::ModuloRelation);

    auto c = certify_center(center_iii(), CenterId::III);
    CHECK(c.route == CenterRoute::InverseIntegratingFactor);
    REQUIRE(c.inverse_integrating_factor);
    CHECK(c.inverse_integrating_factor->has_var("r"));
    REQUIRE(c.spotcheck);
    CHECK(c.spotcheck->vanishes);
    CHECK(c.spotcheck->perturbation.count("p03"));

    auto cr = certify_center(cond3_rational(), CenterId::III);
    CHECK(verify_inverse_integrating_factor(build_z2_cubic(cond3_rational()).upper, *cr.inverse_integrating_factor));
    CHECK(cr.spotcheck->vanishes);
}

TEST_CASE("condition IV numeric certificate") {
    CHECK(condition_iv_scaling_invariance());
    auto c = certify_center(center_iv(), CenterId::IV);
    CHECK(c.route == CenterRoute::NumericSpotCheckOnly);
    CHECK(c.scaling_invariance);
    REQUIRE(c.spotcheck);
    CHECK(c.spotcheck->vanishes);
    CHECK(c.spotcheck->runs.size() == 2);
    CHECK(c.spotcheck->runs[0].V.size() == 8);
}

TEST_CASE("necessity spot-check with zero perturbation") {
    auto r = necessity_spotcheck(center_ii(), {});
    CHECK(r.vanishes);
    CHECK(r.monodromy.candidate);
    CHECK(r.max_abs < BigFloat(1e-60));

    // The cusp point meets every equality of I but has a12 < 0: the half systems are Hamiltonian with
    // matching H(x, 0), so all V_k vanish. The point is not a center because it is not monodromic.
    auto e = necessity_spotcheck(cusp_point(), {});
    CHECK(e.vanishes);
    CHECK_FALSE(e.monodromy.candidate);

    // IV at zero perturbation does not vanish; the branch perturbation does.
    SpotCheckOptions o;
    o.order = 6;
    auto z = necessity_spotcheck(center_iv(), o);
    CHECK_FALSE(z.vanishes);
    CHECK(z.max_abs > BigFloat(1e-8));
    auto b = necessity_spotcheck(center_iv(), o, branch_perturbation(CenterId::IV, center_iv()));
    CHECK(b.vanishes);

    // A nearby non-center: b02 != 0 gives V2 = (8/3) eps b02.
    Z2CubicParams nc = center_ii();
    nc.b02 = Rational(1, 5);
    auto n = necessity_spotcheck(nc, o);
    CHECK_FALSE(n.vanishes);

    CHECK_THROWS_AS(necessity_spotcheck(center_ii(), SpotCheckOptions{{}, 4, 128, 0}), PreconditionError);
}
