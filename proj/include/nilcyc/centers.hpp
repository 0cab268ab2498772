#pragma once

#include "nilcyc/families.hpp"
#include "nilcyc/lyapunov.hpp"
#include "nilcyc/nilclass.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nilcyc {

enum class CenterId { I = 1, II, III, IV, V, VI };
std::string to_string(CenterId id);
CenterId parse_center_id(const std::string& s);  // "I".."VI"; throws PreconditionError

enum class Rel { Zero, Positive, Negative, NonZero };

struct Constraint {
    MPoly poly;
    Rel rel;
    std::string str() const;
};

// equalities hold, and at least one alternative (a conjunction) holds.
struct CenterCondition {
    CenterId id;
    std::vector<MPoly> equalities;
    std::vector<std::vector<Constraint>> alternatives;
};

const CenterCondition& center_condition(CenterId id);

// A positive square root r of a rational, used as a symbol inside parameter values.
struct QuadraticRoot {
    std::string symbol;
    Rational square;
};

// Family parameters whose values may involve one quadratic irrational.
struct ParamInstance {
    std::map<std::string, MPoly> values;
    std::optional<QuadraticRoot> root;

    static ParamInstance exact(const Z2CubicParams& p);
    bool is_rational() const;
    Z2CubicParams rational() const;  // throws PreconditionError when a value still carries the root
    // Rational parameters within 2^-bits of the true values.
    Z2CubicParams approximate(unsigned bits) const;
};

// p = alpha + beta r after reducing powers of r with r^2 = square.
std::pair<MPoly, MPoly> split_root(const MPoly& p, const QuadraticRoot& root);
// Exact sign of alpha + beta sqrt(square).
int sign_with_root(const Rational& alpha, const Rational& beta, const Rational& square);

struct Membership {
    bool holds = false;
    std::vector<std::string> violated;
};

Membership condition_membership(const Z2CubicParams& p, CenterId id);
Membership condition_membership(const ParamInstance& p, CenterId id);

enum class CenterRoute { HamiltonianMatch, SwitchingSymmetry, InverseIntegratingFactor, NumericSpotCheckOnly };
std::string to_string(CenterRoute r);

struct SpotCheckReport {
    std::vector<Rational> eps;
    std::vector<LyapunovReport> runs;
    Unfolding perturbation;
    BigFloat max_abs;
    BigFloat threshold;
    bool vanishes = false;
    MonodromyVerdict monodromy;
};

struct SpotCheckOptions {
    std::vector<Rational> eps{Rational(1, 10), Rational(1, 16)};
    unsigned order = 8;
    unsigned bits = 256;
    // max_k |V_k| must stay below this; 0 means 2^(-bits/2).
    double threshold = 0;
};

// Lyapunov constants of the scaled family at the given eps with the given perturbation
// (zero by default). The monodromy verdict is reported, not enforced.
SpotCheckReport necessity_spotcheck(const Z2CubicParams& p, const SpotCheckOptions& opt, const Unfolding& perturbation = {});

// Perturbation along which the center survives the -eps^2 y unfolding.
// Zero for I, II, V, VI; the branch values for III and IV.
Unfolding branch_perturbation(CenterId id, const Z2CubicParams& p);

struct CenterCertificate {
    CenterId id;
    CenterRoute route;
    std::optional<MPoly> H_upper, H_lower;     // HamiltonianMatch, shifted coordinates
    std::optional<MPoly> inverse_integrating_factor;
    bool symmetry = false;
    bool scaling_invariance = false;           // IV: exact symbolic check
    std::optional<SpotCheckReport> spotcheck;  // always present for IV
    std::string detail;
};

CenterCertificate certify_center(const ParamInstance& p, CenterId id, const SpotCheckOptions& opt = {});
CenterCertificate certify_center(const Z2CubicParams& p, CenterId id, const SpotCheckOptions& opt = {});

// The printed inverse integrating factor for condition III, in a21, a03, b21, x, y.
MPoly condition_iii_factor();

enum class IdentityForm { Identically, ModuloRelation, Fails };
std::string to_string(IdentityForm f);
// Checks the condition-III identity symbolically after b03 = -(2/3) a21 b21, b12 = -a21.
IdentityForm condition_iii_identity();

// Exact check that (a03, b21) -> (a03 r^4, b21 r) with y = rY, t = rT maps the
// condition-IV family onto itself (symbolic r).
bool condition_iv_scaling_invariance();

}  // namespace nilcyc
