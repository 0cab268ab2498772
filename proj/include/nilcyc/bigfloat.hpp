#pragma once

#include "nilcyc/rational.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <string>
#include <vector>

namespace nilcyc {

using BigFloat = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                               boost::multiprecision::et_off>;

// 256 unless NILCYC_PRECISION_BITS is set to a positive integer.
unsigned default_precision_bits();

// Sets the working precision for newly created BigFloat values and restores
// the previous one on exit. The MPFR backend keeps this setting process-wide,
// so high-precision work is single-threaded.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned bits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_digits10_;
};

unsigned current_precision_bits();

BigFloat to_big(const Rational& r);
BigFloat big_pi();
// Round-to-nearest rational approximation is not needed; this converts exactly.
Rational to_rational(const BigFloat& x);

// Scientific decimal with enough digits for the working precision.
std::string to_decimal(const BigFloat& x);
std::string to_decimal(const BigFloat& x, int digits);

// Gaussian elimination with partial pivoting; throws NumericError on a zero pivot.
std::vector<BigFloat> solve_linear(std::vector<std::vector<BigFloat>> A, std::vector<BigFloat> b);
BigFloat determinant(std::vector<std::vector<BigFloat>> A);

}  // namespace nilcyc
