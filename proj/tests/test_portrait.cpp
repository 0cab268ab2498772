#include "doctest.h"

#include "nilcyc/errors.hpp"
#include "nilcyc/families.hpp"
#include "nilcyc/portrait.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace nilcyc;

namespace {

MPoly P(const std::string& s) { return MPoly::parse(s); }

SwitchingSystem center_ii() {
    Z2CubicParams p;
    p.a21 = -1;
    p.a03 = -1;
    return build_z2_cubic(p);
}

std::size_t count(const Trajectory& t, EventKind k) {
    std::size_t n = 0;
    for (const auto& e : t.events) n += e.kind == k;
    return n;
}

}  // namespace

TEST_CASE("rotation closes with two crossings per period") {
    SwitchingSystem rot{{P("-y"), P("x")}, {P("-y"), P("x")}};
    IntegrateOptions o;
    o.t_end = 2 * M_PI;
    auto tr = filippov_integrate(rot, 0.5, 0, o);
    CHECK(count(tr, EventKind::Crossing) == 2);
    CHECK_FALSE(tr.truncated);
    const auto& last = tr.samples.back();
    CHECK(std::hypot(last[1] - 0.5, last[2]) < 1e-8);
    for (const auto& e : tr.events) CHECK(std::abs(std::hypot(e.x, 0) - 0.5) < 1e-9);
    CHECK(return_proximity(rot, 0.5) < 1e-9);
    CHECK_THROWS_AS(filippov_integrate(rot, 0, 0), PreconditionError);
}

TEST_CASE("condition-II orbits around (1,0) close") {
    auto sys = center_ii();
    for (double x0 : {1.2, 1.35, 1.5}) {
        double d = return_proximity(sys, x0);
        CHECK(d >= 0);
        CHECK(d < 1e-6);
    }
    IntegrateOptions coarse;
    coarse.tol = 1e-6;
    IntegrateOptions fine;
    fine.tol = 1e-11;
    CHECK(return_proximity(sys, 1.5, fine) < return_proximity(sys, 1.5, coarse));
}

TEST_CASE("Hamiltonian is conserved on each half arc") {
    Z2CubicParams p;
    p.a21 = 1;
    p.a12 = 3;
    p.a02 = -3;
    p.a03 = -3;
    p.b12 = -1;
    p.b03 = -1;
    auto sys = build_z2_cubic(p);
    auto Hu = hamiltonian_of(sys.upper), Hl = hamiltonian_of(sys.lower);
    REQUIRE(Hu);
    REQUIRE(Hl);
    auto H = [](const MPoly& h, double x, double y) {
        double s = 0;
        MPoly q = h.with_vars(merge_vars(h.vars(), {"x", "y"}));
        for (const auto& [e, c] : q.collect({"x", "y"}))
            s += c.compact().constant_term().to_double() * std::pow(x, e[0]) * std::pow(y, e[1]);
        return s;
    };
    IntegrateOptions o;
    o.tol = 1e-10;
    o.max_crossings = 2;
    auto tr = filippov_integrate(sys, 1.01, 0, o);
    REQUIRE(tr.events.size() == 2);
    // upper arc: start -> first crossing; lower arc: first -> second crossing
    double h0 = H(*Hu, 1.01, 0), h1 = H(*Hu, tr.events[0].x, 0);
    CHECK(std::abs(h1 - h0) < 10 * o.tol);
    double g0 = H(*Hl, tr.events[0].x, 0), g1 = H(*Hl, tr.events[1].x, 0);
    CHECK(std::abs(g1 - g0) < 10 * o.tol);
}

TEST_CASE("sliding entry and exit on the pseudo-Hopf family") {
    auto sys = critical_family({{"A02", Rational(-1)}, {"delta1", Rational(1, 100)}, {"b", Rational(1, 100)}},
                               Rational(1, 10));
    IntegrateOptions o;
    o.t_end = 200;
    auto tr = filippov_integrate(sys, -0.005, 0, o);
    REQUIRE(tr.events.size() >= 2);
    CHECK(tr.events[0].kind == EventKind::SlidingEntry);
    CHECK(tr.events[1].kind == EventKind::SlidingExit);
    // exits where g-(x,0) = (b + x)(...)/2 vanishes
    CHECK(std::abs(tr.events[1].x + 0.01) < 1e-9);
    for (const auto& s : tr.samples)
        if (s[0] <= tr.events[1].t) CHECK(s[2] == 0);

    // from above, landing on the segment
    auto in = filippov_integrate(sys, -0.004, 0.001, o);
    bool entered = false;
    for (const auto& e : in.events) entered |= e.kind == EventKind::SlidingEntry;
    CHECK(entered);
}

TEST_CASE("deterministic SVG") {
    auto sys = center_ii();
    Window w{-2, 2, -1.5, 1.5};
    auto seeds = std::vector<std::pair<double, double>>{{1.5, 0}, {-1.5, 0}, {0.2, 0.6}};
    PortraitOptions opt;
    opt.integrate.t_end = 15;
    std::string a = std::string(NILCYC_BINARY_DIR) + "/portrait_a.svg", b = std::string(NILCYC_BINARY_DIR) + "/portrait_b.svg";
    render_portrait(sys, seeds, w, a, opt);
    render_portrait(sys, seeds, w, b, opt);
    auto slurp = [](const std::string& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    std::string sa = slurp(a);
    CHECK(sa == slurp(b));
    CHECK(sa.find("<polyline") != std::string::npos);
    CHECK(sa.find("<svg") != std::string::npos);

    std::string empty = render_svg({}, w, {{-1, 0}, {1, 0}});
    CHECK(empty.find("<polyline") == std::string::npos);
    std::size_t circles = 0;
    for (std::size_t pos = 0; (pos = empty.find("<circle", pos)) != std::string::npos; ++pos) ++circles;
    CHECK(circles == 2);
    CHECK_THROWS_AS(render_svg({}, Window{1, 1, 0, 1}, {}), PreconditionError);
    CHECK_THROWS(render_portrait(sys, {}, w, "/nonexistent-dir/x.svg"));
    std::remove(a.c_str());
    std::remove(b.c_str());
}
