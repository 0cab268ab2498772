#pragma once

#include "nilcyc/bigfloat.hpp"
#include "nilcyc/system.hpp"

#include <vector>

namespace nilcyc {

// Concrete planar field with coefficients rounded to the working precision.
// P[d][j] is the coefficient of x^(d-j) y^j.
struct NumericField {
    std::vector<std::vector<BigFloat>> P, Q;
    unsigned degree() const { return static_cast<unsigned>(P.size()) - 1; }
    bool has_constant() const;
};

NumericField to_numeric(const PlanarField& f);

struct PolarFlowResult {
    std::vector<BigFloat> u;    // rho-series coefficients (or the single radius) at theta1
    std::vector<BigFloat> err;  // accumulated truncation and rounding estimate per coefficient
    unsigned steps = 0;
};

// Integrates dr/dtheta = r (xP + yQ)/(xQ - yP) from theta0 to theta1 with an
// adaptive Taylor method in theta.
//
// Series mode (u0.size() > 1): r = sum_k u_k(theta) rho^k, u0[0] must be 0 and the
// field must have no constant term. Scalar mode (u0.size() == 1): a single orbit
// from radius u0[0], constant terms allowed.
// Throws NumericError when the angular velocity vanishes or the step budget runs out.
PolarFlowResult polar_flow(const NumericField& f, const BigFloat& theta0, const BigFloat& theta1,
                           const std::vector<BigFloat>& u0);

}  // namespace nilcyc
