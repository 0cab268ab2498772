#include "nilcyc/rational.hpp"

#include "nilcyc/errors.hpp"

#include <cctype>
#include <ostream>

namespace nilcyc {

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", column " +
                                        std::to_string(column) + ": " + msg
                                  : "column " + std::to_string(column) + ": " + msg),
      bare_(msg),
      line_(line),
      column_(column) {}

Rational::Rational(long n, long d) : q_(n, d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    q_.canonicalize();
}

Rational::Rational(const mpq_class& q) : q_(q) {
    if (q_.get_den() == 0) throw std::domain_error("Rational: zero denominator");
    q_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    q_ /= o.q_;
    return *this;
}

static bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

Rational Rational::parse(std::string_view text) {
    std::size_t b = 0, e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    std::string_view s = text.substr(b, e - b);
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        s.remove_prefix(1);
    }
    // Terminating decimal, e.g. -2.125, read exactly.
    if (auto dot = s.find('.'); dot != std::string_view::npos && s.find('/') == std::string_view::npos) {
        std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
            throw ParseError("malformed decimal '" + std::string(text) + "'", 0, static_cast<int>(b) + 1);
        mpz_class n(std::string(ip) + std::string(fp), 10), d;
        mpz_ui_pow_ui(d.get_mpz_t(), 10, fp.size());
        if (neg) n = -n;
        return Rational(mpq_class(n, d));
    }
    auto slash = s.find('/');
    std::string_view ns = s.substr(0, slash);
    std::string_view ds = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
    if (!all_digits(ns)) throw ParseError("malformed rational '" + std::string(text) + "'", 0, static_cast<int>(b) + 1);
    if (!all_digits(ds))
        throw ParseError("malformed rational '" + std::string(text) + "'", 0,
                         static_cast<int>(b + (neg ? 1 : 0) + ns.size()) + 2);
    mpz_class n(std::string(ns), 10), d(std::string(ds), 10);
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'", 0, static_cast<int>(b) + 1);
    if (neg) n = -n;
    return Rational(mpq_class(n, d));
}

Rational pow(const Rational& base, unsigned e) {
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), base.get().get_num_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), base.get().get_den_mpz_t(), e);
    return Rational(mpq_class(n, d));
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace nilcyc
