#pragma once

#include "nilcyc/rational.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace nilcyc {

// Sparse multivariate polynomial over Q. Variables are kept sorted by name;
// binary operations first unify the two variable lists.
class MPoly {
public:
    using Exponents = std::vector<unsigned>;
    using TermMap = std::map<Exponents, Rational>;

    MPoly() = default;
    MPoly(const Rational& c);
    MPoly(long c) : MPoly(Rational(c)) {}

    static MPoly variable(const std::string& name);
    // Grammar: signed terms, p/q literals, identifiers, ^ powers, optional *.
    static MPoly parse(std::string_view text);

    const std::vector<std::string>& vars() const { return vars_; }
    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_term() const;
    bool has_var(const std::string& v) const;
    // Variables that occur with a positive exponent in some term.
    std::vector<std::string> used_vars() const;

    unsigned degree(const std::string& v) const;
    unsigned total_degree() const;
    // Total degree restricted to the listed variables.
    unsigned degree_in(const std::vector<std::string>& vs) const;

    // Coefficients of v^0, v^1, ..., v^deg as polynomials in the other variables.
    std::vector<MPoly> coeffs_in(const std::string& v) const;
    // Group terms by their exponents in vs; values are polynomials in the rest.
    std::map<Exponents, MPoly> collect(const std::vector<std::string>& vs) const;
    // Part of total degree d in the variables vs.
    MPoly homogeneous_part(const std::vector<std::string>& vs, unsigned d) const;

    Rational eval(const std::map<std::string, Rational>& at) const;
    MPoly substitute(const std::map<std::string, MPoly>& repl) const;
    MPoly derivative(const std::string& v) const;
    // Antiderivative in v with zero constant of integration.
    MPoly integral(const std::string& v) const;

    MPoly with_vars(const std::vector<std::string>& vs) const;  // vs must contain used_vars()
    MPoly compact() const { return with_vars(used_vars()); }

    MPoly operator-() const;
    MPoly& operator+=(const MPoly& o);
    MPoly& operator-=(const MPoly& o);
    MPoly& operator*=(const MPoly& o);
    MPoly& operator*=(const Rational& c);
    MPoly& operator/=(const Rational& c);

    friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
    friend MPoly operator*(const MPoly& a, const MPoly& b);
    friend MPoly operator*(MPoly a, const Rational& c) { return a *= c; }
    friend MPoly operator*(const Rational& c, MPoly a) { return a *= c; }
    friend MPoly operator/(MPoly a, const Rational& c) { return a /= c; }

    friend bool operator==(const MPoly& a, const MPoly& b);
    friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

    std::string str() const;

    // Exact quotient a/b; throws std::domain_error when b does not divide a.
    static MPoly divide_exact(const MPoly& a, const MPoly& b);

private:
    std::vector<std::string> vars_;
    TermMap terms_;

    void add_term(const Exponents& e, const Rational& c);
    std::size_t index_of(const std::string& v) const;  // npos when absent
};

MPoly pow(const MPoly& p, unsigned e);

std::vector<std::string> merge_vars(const std::vector<std::string>& a, const std::vector<std::string>& b);

std::ostream& operator<<(std::ostream& os, const MPoly& p);

}  // namespace nilcyc
