#include "nilcyc/mpoly.hpp"

#include "nilcyc/errors.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <set>
#include <stdexcept>

namespace nilcyc {

namespace {
constexpr std::size_t npos = static_cast<std::size_t>(-1);
}

std::vector<std::string> merge_vars(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::string> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

MPoly::MPoly(const Rational& c) {
    if (!c.is_zero()) terms_.emplace(Exponents{}, c);
}

MPoly MPoly::variable(const std::string& name) {
    MPoly p;
    p.vars_ = {name};
    p.terms_.emplace(Exponents{1}, Rational(1));
    return p;
}

std::size_t MPoly::index_of(const std::string& v) const {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
    if (it == vars_.end() || *it != v) return npos;
    return static_cast<std::size_t>(it - vars_.begin());
}

bool MPoly::has_var(const std::string& v) const { return index_of(v) != npos; }

bool MPoly::is_constant() const {
    for (const auto& [e, c] : terms_)
        for (unsigned k : e)
            if (k) return false;
    return true;
}

Rational MPoly::constant_term() const {
    Exponents zero(vars_.size(), 0);
    auto it = terms_.find(zero);
    return it == terms_.end() ? Rational(0) : it->second;
}

std::vector<std::string> MPoly::used_vars() const {
    std::vector<bool> used(vars_.size(), false);
    for (const auto& [e, c] : terms_)
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i]) used[i] = true;
    std::vector<std::string> out;
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (used[i]) out.push_back(vars_[i]);
    return out;
}

unsigned MPoly::degree(const std::string& v) const {
    std::size_t i = index_of(v);
    if (i == npos) return 0;
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[i]);
    return d;
}

unsigned MPoly::total_degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) {
        unsigned s = 0;
        for (unsigned k : e) s += k;
        d = std::max(d, s);
    }
    return d;
}

unsigned MPoly::degree_in(const std::vector<std::string>& vs) const {
    std::vector<std::size_t> idx;
    for (const auto& v : vs)
        if (auto i = index_of(v); i != npos) idx.push_back(i);
    unsigned d = 0;
    for (const auto& [e, c] : terms_) {
        unsigned s = 0;
        for (auto i : idx) s += e[i];
        d = std::max(d, s);
    }
    return d;
}

void MPoly::add_term(const Exponents& e, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

MPoly MPoly::with_vars(const std::vector<std::string>& vs) const {
    if (vs == vars_) return *this;
    std::vector<std::size_t> where(vars_.size(), npos);
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = std::lower_bound(vs.begin(), vs.end(), vars_[i]);
        if (it != vs.end() && *it == vars_[i]) where[i] = static_cast<std::size_t>(it - vs.begin());
    }
    MPoly out;
    out.vars_ = vs;
    for (const auto& [e, c] : terms_) {
        Exponents ne(vs.size(), 0);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (!e[i]) continue;
            if (where[i] == npos) throw std::logic_error("MPoly::with_vars: dropping used variable " + vars_[i]);
            ne[where[i]] = e[i];
        }
        out.terms_.emplace(std::move(ne), c);
    }
    return out;
}

std::vector<MPoly> MPoly::coeffs_in(const std::string& v) const {
    std::size_t i = index_of(v);
    if (i == npos) return {*this};
    std::vector<MPoly> out(degree(v) + 1);
    for (auto& o : out) o.vars_ = vars_;
    for (const auto& [e, c] : terms_) {
        Exponents ne = e;
        ne[i] = 0;
        out[e[i]].add_term(ne, c);
    }
    for (auto& o : out) o = o.compact();
    return out;
}

std::map<MPoly::Exponents, MPoly> MPoly::collect(const std::vector<std::string>& vs) const {
    std::vector<std::size_t> idx;
    for (const auto& v : vs) idx.push_back(index_of(v));
    std::map<Exponents, MPoly> out;
    for (const auto& [e, c] : terms_) {
        Exponents key(vs.size(), 0), rest = e;
        for (std::size_t j = 0; j < vs.size(); ++j) {
            if (idx[j] == npos) continue;
            key[j] = e[idx[j]];
            rest[idx[j]] = 0;
        }
        auto& slot = out[key];
        if (slot.vars_.empty()) slot.vars_ = vars_;
        slot.add_term(rest, c);
    }
    for (auto& [k, p] : out) p = p.compact();
    return out;
}

MPoly MPoly::homogeneous_part(const std::vector<std::string>& vs, unsigned d) const {
    std::vector<std::size_t> idx;
    for (const auto& v : vs)
        if (auto i = index_of(v); i != npos) idx.push_back(i);
    MPoly out;
    out.vars_ = vars_;
    for (const auto& [e, c] : terms_) {
        unsigned s = 0;
        for (auto i : idx) s += e[i];
        if (s == d) out.terms_.emplace(e, c);
    }
    return out;
}

Rational MPoly::eval(const std::map<std::string, Rational>& at) const {
    std::vector<const Rational*> vals(vars_.size(), nullptr);
    std::vector<bool> used(vars_.size(), false);
    for (const auto& [e, c] : terms_)
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i]) used[i] = true;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (!used[i]) continue;
        auto it = at.find(vars_[i]);
        if (it == at.end()) throw PreconditionError("poly_eval: no value for variable '" + vars_[i] + "'");
        vals[i] = &it->second;
    }
    Rational sum;
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i]) t *= pow(*vals[i], e[i]);
        sum += t;
    }
    return sum;
}

MPoly MPoly::substitute(const std::map<std::string, MPoly>& repl) const {
    // Powers of each replacement are cached; untouched variables stay symbolic.
    std::vector<const MPoly*> rp(vars_.size(), nullptr);
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (auto it = repl.find(vars_[i]); it != repl.end()) rp[i] = &it->second;
    std::vector<std::vector<MPoly>> powers(vars_.size());
    auto power_of = [&](std::size_t i, unsigned k) -> const MPoly& {
        auto& cache = powers[i];
        if (cache.empty()) cache.push_back(MPoly(1));
        while (cache.size() <= k) cache.push_back(cache.back() * *rp[i]);
        return cache[k];
    };
    MPoly out;
    for (const auto& [e, c] : terms_) {
        Exponents kept(vars_.size(), 0);
        MPoly t(c);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (!e[i]) continue;
            if (rp[i]) t = t * power_of(i, e[i]);
            else kept[i] = e[i];
        }
        MPoly mono;
        mono.vars_ = vars_;
        mono.terms_.emplace(kept, Rational(1));
        out += t * mono;
    }
    return out.compact();
}

MPoly MPoly::derivative(const std::string& v) const {
    std::size_t i = index_of(v);
    if (i == npos) throw PreconditionError("poly_derivative: '" + v + "' is not a variable of the polynomial");
    MPoly out;
    out.vars_ = vars_;
    for (const auto& [e, c] : terms_) {
        if (!e[i]) continue;
        Exponents ne = e;
        ne[i] -= 1;
        out.add_term(ne, c * Rational(static_cast<long>(e[i])));
    }
    return out;
}

MPoly MPoly::integral(const std::string& v) const {
    MPoly base = has_var(v) ? *this : with_vars(merge_vars(vars_, {v}));
    std::size_t i = base.index_of(v);
    MPoly out;
    out.vars_ = base.vars_;
    for (const auto& [e, c] : base.terms_) {
        Exponents ne = e;
        ne[i] += 1;
        out.add_term(ne, c / Rational(static_cast<long>(ne[i])));
    }
    return out;
}

MPoly MPoly::operator-() const {
    MPoly out = *this;
    for (auto& [e, c] : out.terms_) c = -c;
    return out;
}

MPoly& MPoly::operator+=(const MPoly& o) {
    if (o.vars_ != vars_) {
        auto vs = merge_vars(vars_, o.vars_);
        *this = with_vars(vs);
        MPoly other = o.with_vars(vs);
        for (const auto& [e, c] : other.terms_) add_term(e, c);
        return *this;
    }
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) { return *this += -o; }

MPoly operator*(const MPoly& a, const MPoly& b) {
    if (a.is_zero() || b.is_zero()) {
        MPoly z;
        z.vars_ = merge_vars(a.vars_, b.vars_);
        return z;
    }
    auto vs = merge_vars(a.vars_, b.vars_);
    MPoly A = a.with_vars(vs), B = b.with_vars(vs);
    MPoly out;
    out.vars_ = vs;
    MPoly::Exponents e(vs.size());
    for (const auto& [ea, ca] : A.terms_)
        for (const auto& [eb, cb] : B.terms_) {
            for (std::size_t i = 0; i < vs.size(); ++i) e[i] = ea[i] + eb[i];
            out.add_term(e, ca * cb);
        }
    return out;
}

MPoly& MPoly::operator*=(const MPoly& o) { return *this = *this * o; }

MPoly& MPoly::operator*=(const Rational& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, v] : terms_) v *= c;
    return *this;
}

MPoly& MPoly::operator/=(const Rational& c) {
    if (c.is_zero()) throw std::domain_error("MPoly: division by zero");
    for (auto& [e, v] : terms_) v /= c;
    return *this;
}

bool operator==(const MPoly& a, const MPoly& b) {
    if (a.vars_ == b.vars_) return a.terms_ == b.terms_;
    auto vs = merge_vars(a.vars_, b.vars_);
    return a.with_vars(vs).terms_ == b.with_vars(vs).terms_;
}

MPoly pow(const MPoly& p, unsigned e) {
    MPoly result(1), base = p;
    while (e) {
        if (e & 1u) result *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return result;
}

MPoly MPoly::divide_exact(const MPoly& a, const MPoly& b) {
    if (b.is_zero()) throw std::domain_error("MPoly::divide_exact: division by zero");
    auto vs = merge_vars(a.vars_, b.vars_);
    MPoly rem = a.with_vars(vs), den = b.with_vars(vs);
    const auto& [lead_e, lead_c] = *den.terms_.rbegin();
    MPoly q;
    q.vars_ = vs;
    while (!rem.is_zero()) {
        const auto& [re, rc] = *rem.terms_.rbegin();
        Exponents qe(vs.size());
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (re[i] < lead_e[i]) throw std::domain_error("MPoly::divide_exact: not divisible");
            qe[i] = re[i] - lead_e[i];
        }
        MPoly t;
        t.vars_ = vs;
        t.terms_.emplace(qe, rc / lead_c);
        q += t;
        rem -= t * den;
    }
    return q;
}

std::string MPoly::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        Rational mag = abs(c);
        if (first) {
            if (c.sign() < 0) out += "-";
        } else {
            out += c.sign() < 0 ? " - " : " + ";
        }
        first = false;
        std::string mono;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (!e[i]) continue;
            if (!mono.empty()) mono += "*";
            mono += vars_[i];
            if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        }
        if (mono.empty()) out += mag.str();
        else if (mag == Rational(1)) out += mono;
        else out += mag.str() + "*" + mono;
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const MPoly& p) { return os << p.str(); }

// ---- parser -------------------------------------------------------------

namespace {

class PolyParser {
public:
    explicit PolyParser(std::string_view s) : s_(s) {}

    MPoly run() {
        skip();
        if (pos_ >= s_.size()) fail("empty polynomial");
        MPoly p = expr();
        skip();
        if (pos_ < s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
        return p;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, 0, static_cast<int>(pos_) + 1); }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    bool at_factor_start() {
        skip();
        if (pos_ >= s_.size()) return false;
        char c = s_[pos_];
        return std::isdigit(static_cast<unsigned char>(c)) || std::isalpha(static_cast<unsigned char>(c)) ||
               c == '_' || c == '(';
    }

    MPoly expr() {
        MPoly acc;
        bool first = true;
        for (;;) {
            skip();
            bool neg = false;
            if (peek('+') || peek('-')) {
                neg = s_[pos_] == '-';
                ++pos_;
            } else if (!first) {
                break;
            }
            MPoly t = term();
            acc += neg ? -t : t;
            first = false;
        }
        return acc;
    }

    MPoly term() {
        if (!at_factor_start()) fail(pos_ < s_.size() ? std::string("unexpected '") + s_[pos_] + "'" : "unexpected end of input");
        MPoly acc = factor();
        for (;;) {
            if (peek('*')) {
                ++pos_;
                if (!at_factor_start()) fail("expected a factor after '*'");
                acc *= factor();
            } else if (peek('/')) {
                ++pos_;
                skip();
                Rational d = integer_literal();
                if (d.is_zero()) fail("division by zero");
                acc /= d;
            } else if (at_factor_start()) {
                acc *= factor();
            } else {
                break;
            }
        }
        return acc;
    }

    Rational integer_literal() {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an integer");
        return Rational(mpz_class(std::string(s_.substr(start, pos_ - start))));
    }

    MPoly factor() {
        skip();
        MPoly base;
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            base = expr();
            if (!peek(')')) fail("expected ')'");
            ++pos_;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            base = MPoly(integer_literal());
        } else {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            base = MPoly::variable(std::string(s_.substr(start, pos_ - start)));
        }
        if (peek('^')) {
            ++pos_;
            skip();
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                fail("expected a non-negative integer exponent");
            Rational e = integer_literal();
            if (!e.get().get_num().fits_uint_p() || e.get().get_num() > 1000) fail("exponent too large");
            base = pow(base, static_cast<unsigned>(e.get().get_num().get_ui()));
        }
        return base;
    }
};

}  // namespace

MPoly MPoly::parse(std::string_view text) { return PolyParser(text).run(); }

}  // namespace nilcyc
