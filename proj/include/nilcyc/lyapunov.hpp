#pragma once

#include "nilcyc/bigfloat.hpp"
#include "nilcyc/nilclass.hpp"
#include "nilcyc/polar_flow.hpp"
#include "nilcyc/system.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace nilcyc {

struct HalfMap {
    std::vector<BigFloat> v;    // v[k] is the coefficient of rho^k, v[0] = 0
    std::vector<BigFloat> err;  // error estimate per coefficient
    unsigned steps = 0;
};

// Upper half: theta from 0 to pi with v1(0) = 1; lower half: pi to 2 pi.
// The field must have linear part (delta x - lambda y, lambda x + delta y), lambda > 0,
// and no constant term. Works at the current precision.
HalfMap half_return_map(const PlanarField& field, Half half, unsigned K);
HalfMap half_return_map(const PlanarField& field, Half half, unsigned K, unsigned bits);

// (delta, lambda) of the linear part; throws PreconditionError if it has another shape.
std::pair<Rational, Rational> linear_focus_part(const PlanarField& field);

struct LyapunovReport {
    unsigned order = 0;
    std::vector<BigFloat> V;    // V[k-1] is V_k
    std::vector<BigFloat> tol;  // tolerance estimate per entry
    std::optional<Rational> eps;
    unsigned precision_bits = 0;
    HalfMap upper, lower;
};

// V_k = coefficients of Upsilon+(rho) - (Upsilon-)^{-1}(rho).
LyapunovReport displacement_coeffs(const SwitchingSystem& sys, unsigned K, unsigned bits);

// Series d(rho) evaluated at rho (current precision).
BigFloat eval_displacement(const std::vector<BigFloat>& V, const BigFloat& rho);

// One orbit of the full return map from (rho, 0): Upsilon-(Upsilon+(rho)) - rho.
// Constant terms are allowed. Works at the current precision.
BigFloat return_map_displacement(const SwitchingSystem& sys, const BigFloat& rho);

struct EpsilonExpansion {
    // coeff[k-1][j]: coefficient of eps^j in V_k
    std::vector<std::vector<BigFloat>> coeff;
    unsigned degree_bound = 0;
    std::vector<BigFloat> residual;
    unsigned precision_bits = 0;
};

using SystemBuilder = std::function<SwitchingSystem(const Rational& eps)>;

// Fits V_k(eps) = sum_j c_j eps^j on the samples (least squares when there are more than J+1).
EpsilonExpansion epsilon_expansion(const SystemBuilder& build, const std::vector<Rational>& eps_samples, unsigned K,
                                   unsigned J, unsigned bits);

}  // namespace nilcyc
