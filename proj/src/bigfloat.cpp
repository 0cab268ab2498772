#include "nilcyc/bigfloat.hpp"

#include "nilcyc/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <ios>

namespace nilcyc {

namespace {
unsigned bits_to_digits10(unsigned bits) { return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1; }
}  // namespace

unsigned default_precision_bits() {
    if (const char* env = std::getenv("NILCYC_PRECISION_BITS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 32 && v <= 1 << 20) return static_cast<unsigned>(v);
    }
    return 256;
}

PrecisionScope::PrecisionScope(unsigned bits) : saved_digits10_(BigFloat::default_precision()) {
    BigFloat::default_precision(bits_to_digits10(bits));
}

PrecisionScope::~PrecisionScope() { BigFloat::default_precision(saved_digits10_); }

unsigned current_precision_bits() {
    BigFloat probe;
    return static_cast<unsigned>(mpfr_get_prec(probe.backend().data()));
}

BigFloat to_big(const Rational& r) {
    BigFloat x;
    mpfr_set_q(x.backend().data(), r.get().get_mpq_t(), MPFR_RNDN);
    return x;
}

BigFloat big_pi() {
    BigFloat x;
    mpfr_const_pi(x.backend().data(), MPFR_RNDN);
    return x;
}

Rational to_rational(const BigFloat& x) {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), x.backend().data());
    return Rational(q);
}

std::string to_decimal(const BigFloat& x, int digits) {
    return x.str(digits, std::ios_base::scientific);
}

std::string to_decimal(const BigFloat& x) {
    long prec = mpfr_get_prec(x.backend().data());
    int digits = static_cast<int>(std::ceil(prec * 0.30102999566398120)) + 1;
    return to_decimal(x, digits);
}

namespace {

// Row-reduces A in place, applying the same operations to b when given. Returns the pivot sign.
int eliminate(std::vector<std::vector<BigFloat>>& A, std::vector<BigFloat>* b, bool allow_singular) {
    const std::size_t n = A.size();
    int sign = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (abs(A[r][c]) > abs(A[piv][c])) piv = r;
        if (A[piv][c] == 0) {
            if (allow_singular) return 0;
            throw NumericError("linear solve: matrix is singular at working precision");
        }
        if (piv != c) {
            std::swap(A[piv], A[c]);
            if (b) std::swap((*b)[piv], (*b)[c]);
            sign = -sign;
        }
        for (std::size_t r = c + 1; r < n; ++r) {
            BigFloat f = A[r][c] / A[c][c];
            if (f == 0) continue;
            for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
            if (b) (*b)[r] -= f * (*b)[c];
        }
    }
    return sign;
}

}  // namespace

std::vector<BigFloat> solve_linear(std::vector<std::vector<BigFloat>> A, std::vector<BigFloat> b) {
    const std::size_t n = A.size();
    if (b.size() != n) throw PreconditionError("solve_linear: dimension mismatch");
    for (const auto& row : A)
        if (row.size() != n) throw PreconditionError("solve_linear: matrix must be square");
    eliminate(A, &b, false);
    std::vector<BigFloat> x(n);
    for (std::size_t i = n; i-- > 0;) {
        BigFloat s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= A[i][k] * x[k];
        x[i] = s / A[i][i];
    }
    return x;
}

BigFloat determinant(std::vector<std::vector<BigFloat>> A) {
    for (const auto& row : A)
        if (row.size() != A.size()) throw PreconditionError("determinant: matrix must be square");
    int sign = eliminate(A, nullptr, true);
    if (sign == 0) return BigFloat(0);
    BigFloat d = sign;
    for (std::size_t i = 0; i < A.size(); ++i) d *= A[i][i];
    return d;
}

}  // namespace nilcyc
