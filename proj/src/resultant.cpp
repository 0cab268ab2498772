#include "nilcyc/resultant.hpp"

#include "nilcyc/errors.hpp"

#include <utility>

namespace nilcyc {

MPoly bareiss_determinant(std::vector<std::vector<MPoly>> m) {
    const std::size_t n = m.size();
    if (n == 0) return MPoly(1);
    bool negate = false;
    MPoly prev(1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            std::size_t r = k + 1;
            while (r < n && m[r][k].is_zero()) ++r;
            if (r == n) return MPoly(0);
            std::swap(m[k], m[r]);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                MPoly num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                m[i][j] = MPoly::divide_exact(num, prev);
            }
            m[i][k] = MPoly(0);
        }
        prev = m[k][k];
    }
    MPoly det = m[n - 1][n - 1];
    return (negate ? -det : det).compact();
}

std::vector<std::vector<MPoly>> sylvester_matrix(const MPoly& f, const MPoly& g, const std::string& var) {
    auto fc = f.coeffs_in(var), gc = g.coeffs_in(var);
    const std::size_t df = fc.size() - 1, dg = gc.size() - 1;
    const std::size_t n = df + dg;
    std::vector<std::vector<MPoly>> s(n, std::vector<MPoly>(n, MPoly(0)));
    // Rows hold coefficients from the leading one down.
    for (std::size_t r = 0; r < dg; ++r)
        for (std::size_t k = 0; k <= df; ++k) s[r][r + k] = fc[df - k];
    for (std::size_t r = 0; r < df; ++r)
        for (std::size_t k = 0; k <= dg; ++k) s[dg + r][r + k] = gc[dg - k];
    return s;
}

MPoly resultant(const MPoly& f, const MPoly& g, const std::string& var) {
    if (f.is_zero() || g.is_zero()) throw PreconditionError("resultant: zero polynomial");
    if (f.degree(var) == 0 || g.degree(var) == 0)
        throw PreconditionError("resultant: both polynomials need positive degree in '" + var + "'");
    return bareiss_determinant(sylvester_matrix(f, g, var));
}

}  // namespace nilcyc
