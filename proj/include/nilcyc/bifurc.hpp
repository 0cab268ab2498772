#pragma once

#include "nilcyc/bigfloat.hpp"
#include "nilcyc/centers.hpp"
#include "nilcyc/lyapunov.hpp"
#include "nilcyc/system.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nilcyc {

// ---- univariate helpers (coefficient of x^i at index i) ----

using UPoly = std::vector<Rational>;

UPoly restrict_to_axis(const MPoly& g);  // g(x, 0); throws if other symbols remain

// A real root: exact when rational, otherwise an isolating interval of width <= 2^-bits.
struct RealRoot {
    Rational lo, hi;
    std::optional<Rational> exact;
    BigFloat approx() const;
};

// Distinct real roots in [-radius, radius], ascending.
std::vector<RealRoot> real_roots(const UPoly& p, const Rational& radius, unsigned bits = 200);

// ---- sliding segment ----

enum class SlidingRegime { Sliding, Escaping };
std::string to_string(SlidingRegime r);

struct SlidingSegment {
    RealRoot left, right;
    SlidingRegime regime;  // Sliding: g+ < 0 < g- inside (both fields point at y = 0)
};

struct SlidingAnalysis {
    std::optional<SlidingSegment> segment;  // the one nearest the origin
    std::vector<RealRoot> upper_roots, lower_roots;
    // Common zeros of g+(x,0) and g-(x,0) with crossing on both sides; b = 0 gives (0, 0).
    std::vector<RealRoot> contact_points;
};

SlidingAnalysis sliding_segment(const SwitchingSystem& sys, const Rational& radius = Rational(1, 2),
                                unsigned bits = 200);

// ---- independence Jacobian ----

using ParamFamily = std::function<SwitchingSystem(const std::map<std::string, Rational>&)>;

struct JacobianResult {
    std::vector<std::vector<BigFloat>> J;    // J[i][j] = dV_{Vs[i]} / d params[j]
    std::vector<std::vector<BigFloat>> err;  // Richardson error per entry
    BigFloat det, det_err;
    bool conclusive = false;  // det_err < |det|
    Rational step;
    unsigned precision_bits = 0;
};

// Central differences at steps h and h/2, one Richardson level. Default h = 2^-(bits/4).
JacobianResult independence_jacobian(const ParamFamily& family, const std::map<std::string, Rational>& point,
                                     const std::vector<unsigned>& Vs, const std::vector<std::string>& params,
                                     unsigned bits, std::optional<Rational> step = std::nullopt);

// ---- cycle brackets ----

struct Bracket {
    BigFloat lo, hi;
};

enum class CycleMethod { SeriesEvaluation, DirectReturnMap };
std::string to_string(CycleMethod m);

struct CycleCertificate {
    std::vector<Bracket> brackets;
    std::size_t count = 0;
    CycleMethod method = CycleMethod::SeriesEvaluation;
    unsigned order = 0;  // series order for SeriesEvaluation
    unsigned precision_bits = 0;
    std::vector<BigFloat> V;
    std::size_t sign_alternations = 0;  // in the nonzero entries of V
    std::vector<std::size_t> stage_counts;
    bool precision_stable = false;
};

// Sign-change brackets of sum_k V_k rho^k on (0, rho_max], found on a geometric grid
// and refined by bisection. Works at the current precision.
std::vector<Bracket> series_brackets(const std::vector<BigFloat>& V, const BigFloat& rho_max, unsigned grid = 400);

// One stage adds its entries to the running perturbation. Keys are unfolding keys or family parameters.
using ScheduleStage = std::vector<std::pair<std::string, Rational>>;

struct UnfoldOptions {
    Rational eps{1, 10};
    unsigned order = 8;
    unsigned bits = 256;
    Rational rho_max{1, 2};
    bool check_precision = true;  // redo the last stage at twice the precision
};

CycleCertificate unfold_cycles(const Z2CubicParams& center, CenterId id, const std::vector<ScheduleStage>& schedule,
                               const UnfoldOptions& opt = {});

// ---- pseudo-Hopf ----

using BFamily = std::function<SwitchingSystem(const Rational& b)>;

struct PseudoHopfResult {
    std::optional<Bracket> bracket;
    BigFloat amplitude;  // bracket midpoint
    bool confirmed = false;  // endpoint signs reproduced at twice the precision
    std::string diagnostics;
};

struct PseudoHopfOptions {
    unsigned bits = 128;
    Rational rho_min_factor{4};  // search starts at rho_min_factor |b|
    Rational rho_max{1, 10};
    unsigned grid = 60;
    unsigned bisections = 60;
};

PseudoHopfResult pseudo_hopf_cycle(const BFamily& family, const Rational& b, const PseudoHopfOptions& opt = {});

}  // namespace nilcyc
