#include "nilcyc/sysfile.hpp"

#include "nilcyc/errors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace nilcyc {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

struct LineScanner {
    const std::string& s;
    int line;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, static_cast<int>(pos) + 1); }
    void skip() {
        while (pos < s.size() && is_space(s[pos])) ++pos;
    }
    bool done() {
        skip();
        return pos >= s.size() || s[pos] == '#';
    }
    std::string ident(const char* what) {
        skip();
        if (pos >= s.size() || !ident_start(s[pos])) fail(std::string("expected ") + what);
        std::size_t b = pos;
        while (pos < s.size() && ident_char(s[pos])) ++pos;
        return s.substr(b, pos - b);
    }
    void expect(char c) {
        skip();
        if (pos >= s.size() || s[pos] != c) fail(std::string("expected '") + c + "'");
        ++pos;
    }
};

}  // namespace

std::vector<ConfigSection> parse_config(const std::string& text) {
    std::vector<ConfigSection> out;
    std::set<std::string> tables;
    std::set<std::string> keys;  // keys seen in the current section
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        LineScanner sc{raw, lineno};
        if (sc.done()) continue;
        if (raw[sc.pos] == '[') {
            ++sc.pos;
            bool array = sc.pos < raw.size() && raw[sc.pos] == '[';
            if (array) ++sc.pos;
            ConfigSection sec;
            sec.line = lineno;
            sec.array = array;
            sec.name = sc.ident("a section name");
            sc.expect(']');
            if (array) sc.expect(']');
            if (!sc.done()) sc.fail("unexpected text after section header");
            if (!array && !tables.insert(sec.name).second) throw ParseError("duplicate section [" + sec.name + "]", lineno, 1);
            keys.clear();
            out.push_back(std::move(sec));
            continue;
        }
        ConfigEntry e;
        e.line = lineno;
        sc.skip();
        e.key_column = static_cast<int>(sc.pos) + 1;
        e.key = sc.ident("a key or a [section]");
        sc.expect('=');
        sc.skip();
        if (sc.pos >= raw.size() || raw[sc.pos] == '#') sc.fail("missing value");
        if (raw[sc.pos] == '"') {
            std::size_t close = raw.find('"', sc.pos + 1);
            if (close == std::string::npos) sc.fail("unterminated string");
            e.value_column = static_cast<int>(sc.pos) + 2;
            e.value = raw.substr(sc.pos + 1, close - sc.pos - 1);
            sc.pos = close + 1;
        } else {
            e.value_column = static_cast<int>(sc.pos) + 1;
            std::size_t b = sc.pos;
            while (sc.pos < raw.size() && !is_space(raw[sc.pos]) && raw[sc.pos] != '#') ++sc.pos;
            e.value = raw.substr(b, sc.pos - b);
        }
        if (!sc.done()) sc.fail("unexpected text after value");
        if (out.empty()) throw ParseError("key '" + e.key + "' outside any section", lineno, e.key_column);
        if (!keys.insert(e.key).second) throw ParseError("duplicate key '" + e.key + "'", lineno, e.key_column);
        out.back().entries.push_back(std::move(e));
    }
    return out;
}

MPoly parse_entry_poly(const ConfigEntry& e) {
    // a bare decimal such as -2.5 is a whole value, not polynomial text
    if (e.value.find('.') != std::string::npos) return MPoly(parse_entry_rational(e));
    try {
        return MPoly::parse(e.value);
    } catch (const ParseError& pe) {
        throw ParseError(pe.bare_message(), e.line, e.value_column + pe.column() - 1);
    }
}

Rational parse_entry_rational(const ConfigEntry& e) {
    try {
        return Rational::parse(e.value);
    } catch (const ParseError& pe) {
        throw ParseError(pe.bare_message(), e.line, e.value_column + pe.column() - 1);
    }
}

namespace {

void check_vars(const MPoly& p, const std::set<std::string>& allowed, const ConfigEntry& e) {
    for (const auto& v : p.used_vars())
        if (!allowed.count(v)) throw ParseError("unknown parameter name '" + v + "'", e.line, e.value_column);
}

const ConfigSection* find(const std::vector<ConfigSection>& secs, const std::string& name) {
    for (const auto& s : secs)
        if (s.name == name) return &s;
    return nullptr;
}

PlanarField read_field(const ConfigSection& sec, const std::set<std::string>& allowed) {
    std::optional<MPoly> P, Q;
    for (const auto& e : sec.entries) {
        if (e.key != "P" && e.key != "Q")
            throw ParseError("unknown key '" + e.key + "' in [" + sec.name + "] (expected P, Q)", e.line, e.key_column);
        MPoly p = parse_entry_poly(e);
        check_vars(p, allowed, e);
        (e.key == "P" ? P : Q) = p;
    }
    if (!P || !Q) throw ParseError("[" + sec.name + "] needs both P and Q", sec.line, 1);
    return {*P, *Q};
}

}  // namespace

SystemSpec parse_system_text(const std::string& text) {
    auto secs = parse_config(text);
    static const std::set<std::string> known{"root", "z2cubic", "upper", "lower", "params", "unfolding"};
    for (const auto& s : secs) {
        if (!known.count(s.name)) throw ParseError("unknown section [" + s.name + "]", s.line, 1);
        if (s.array) throw ParseError("[[" + s.name + "]] is not an array section", s.line, 1);
    }
    const ConfigSection *z2 = find(secs, "z2cubic"), *root = find(secs, "root"), *up = find(secs, "upper"),
                        *lo = find(secs, "lower"), *par = find(secs, "params"), *unf = find(secs, "unfolding");
    if (z2 && (up || lo || par))
        throw ParseError("[z2cubic] cannot be combined with [upper]/[lower]/[params]", (up ? up : lo ? lo : par)->line, 1);
    if (!z2 && !up) throw ParseError("expected a [z2cubic] or an [upper] section", 1, 1);
    if (root && !z2) throw ParseError("[root] only applies to [z2cubic]", root->line, 1);
    if (unf && !z2) throw ParseError("[unfolding] only applies to [z2cubic]", unf->line, 1);

    SystemSpec spec;
    const auto& names = Z2CubicParams::names();
    if (z2) {
        ParamInstance inst;
        for (const auto& n : names) inst.values[n] = MPoly(0);
        std::set<std::string> allowed;
        if (root) {
            std::optional<std::string> sym;
            std::optional<Rational> sq;
            for (const auto& e : root->entries) {
                if (e.key == "symbol") {
                    if (e.value.empty() || !ident_start(e.value[0]) ||
                        !std::all_of(e.value.begin(), e.value.end(), ident_char))
                        throw ParseError("root symbol must be an identifier", e.line, e.value_column);
                    if (e.value == "x" || e.value == "y" ||
                        std::find(names.begin(), names.end(), e.value) != names.end())
                        throw ParseError("root symbol '" + e.value + "' clashes with a variable", e.line, e.value_column);
                    sym = e.value;
                } else if (e.key == "square") {
                    sq = parse_entry_rational(e);
                    if (sq->sign() <= 0) throw ParseError("square must be positive", e.line, e.value_column);
                } else {
                    throw ParseError("unknown key '" + e.key + "' in [root] (expected symbol, square)", e.line,
                                     e.key_column);
                }
            }
            if (!sym || !sq) throw ParseError("[root] needs symbol and square", root->line, 1);
            inst.root = QuadraticRoot{*sym, *sq};
            allowed.insert(*sym);
        }
        for (const auto& e : z2->entries) {
            if (std::find(names.begin(), names.end(), e.key) == names.end())
                throw ParseError("unknown parameter name '" + e.key + "'", e.line, e.key_column);
            MPoly v = parse_entry_poly(e);
            check_vars(v, allowed, e);
            inst.values[e.key] = v.compact();
        }
        spec.z2cubic = inst;
        if (unf) {
            const auto& uk = unfolding_keys();
            for (const auto& e : unf->entries) {
                if (std::find(uk.begin(), uk.end(), e.key) == uk.end())
                    throw ParseError("unknown parameter name '" + e.key + "'", e.line, e.key_column);
                spec.unfolding[e.key] = parse_entry_rational(e);
            }
        }
    } else {
        std::set<std::string> allowed{"x", "y"};
        if (par)
            for (const auto& e : par->entries) {
                if (e.key == "x" || e.key == "y")
                    throw ParseError("'" + e.key + "' is a state variable", e.line, e.key_column);
                spec.params[e.key] = parse_entry_rational(e);
                allowed.insert(e.key);
            }
        PlanarField u = read_field(*up, allowed);
        PlanarField l = lo ? read_field(*lo, allowed) : u;
        spec.fields = SwitchingSystem{u, l};
    }
    return spec;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PreconditionError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SystemSpec parse_system_file(const std::string& path) { return parse_system_text(read_text_file(path)); }

SwitchingSystem SystemSpec::system(unsigned bits) const {
    if (z2cubic) return build_z2_cubic(z2cubic->approximate(bits));
    std::map<std::string, MPoly> repl;
    for (const auto& [k, v] : params) repl[k] = MPoly(v);
    return fields->substitute(repl);
}

bool operator==(const SystemSpec& a, const SystemSpec& b) {
    if (a.z2cubic.has_value() != b.z2cubic.has_value() || a.fields != b.fields || a.params != b.params ||
        a.unfolding != b.unfolding)
        return false;
    if (!a.z2cubic) return true;
    const auto &x = *a.z2cubic, &y = *b.z2cubic;
    if (x.root.has_value() != y.root.has_value()) return false;
    if (x.root && (x.root->symbol != y.root->symbol || x.root->square != y.root->square)) return false;
    for (const auto& n : Z2CubicParams::names()) {
        auto get = [&](const ParamInstance& p) {
            auto it = p.values.find(n);
            return it == p.values.end() ? MPoly(0) : it->second;
        };
        if (get(x) != get(y)) return false;
    }
    return true;
}

namespace {
void kv(std::ostringstream& os, const std::string& k, const std::string& v) { os << k << " = \"" << v << "\"\n"; }
}  // namespace

std::string serialize_system(const SystemSpec& s) {
    std::ostringstream os;
    if (s.z2cubic) {
        if (s.z2cubic->root) {
            os << "[root]\n";
            kv(os, "symbol", s.z2cubic->root->symbol);
            kv(os, "square", s.z2cubic->root->square.str());
            os << "\n";
        }
        os << "[z2cubic]\n";
        for (const auto& n : Z2CubicParams::names()) {
            auto it = s.z2cubic->values.find(n);
            kv(os, n, it == s.z2cubic->values.end() ? "0" : it->second.str());
        }
        if (!s.unfolding.empty()) {
            os << "\n[unfolding]\n";
            for (const auto& [k, v] : s.unfolding) kv(os, k, v.str());
        }
    } else if (s.fields) {
        if (!s.params.empty()) {
            os << "[params]\n";
            for (const auto& [k, v] : s.params) kv(os, k, v.str());
            os << "\n";
        }
        os << "[upper]\n";
        kv(os, "P", s.fields->upper.P.str());
        kv(os, "Q", s.fields->upper.Q.str());
        os << "\n[lower]\n";
        kv(os, "P", s.fields->lower.P.str());
        kv(os, "Q", s.fields->lower.Q.str());
    }
    return os.str();
}

std::vector<std::vector<std::pair<std::string, Rational>>> parse_schedule_text(const std::string& text) {
    std::vector<std::vector<std::pair<std::string, Rational>>> out;
    for (const auto& s : parse_config(text)) {
        if (s.name != "stage" || !s.array) throw ParseError("expected [[stage]] sections", s.line, 1);
        std::vector<std::pair<std::string, Rational>> st;
        for (const auto& e : s.entries) st.emplace_back(e.key, parse_entry_rational(e));
        out.push_back(std::move(st));
    }
    return out;
}

std::vector<std::vector<std::pair<std::string, Rational>>> parse_schedule_file(const std::string& path) {
    return parse_schedule_text(read_text_file(path));
}

}  // namespace nilcyc
