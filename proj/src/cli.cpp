#include "nilcyc/cli.hpp"

#include "nilcyc/bifurc.hpp"
#include "nilcyc/centers.hpp"
#include "nilcyc/errors.hpp"
#include "nilcyc/lyapunov.hpp"
#include "nilcyc/nilclass.hpp"
#include "nilcyc/resultant.hpp"
#include "nilcyc/sysfile.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace nilcyc {

using nlohmann::ordered_json;

RunConfig default_run_config() {
    RunConfig c;
    c.bits = default_precision_bits();
    return c;
}

namespace {

const std::set<std::string>& commands() {
    static const std::set<std::string> c{"classify", "lyapunov", "center-verify", "resultant-demo", "unfold", "portrait"};
    return c;
}

bool needs_system(const std::string& cmd) { return cmd != "resultant-demo"; }

}  // namespace

void validate(const RunConfig& c) {
    if (!commands().count(c.command)) throw PreconditionError("unknown command '" + c.command + "'");
    if (needs_system(c.command) && c.system_path.empty()) throw PreconditionError(c.command + " needs --system");
    if (c.order && *c.order == 0) throw PreconditionError("--order must be positive");
    if (c.bits < 32) throw PreconditionError("precision must be at least 32 bits");
    for (std::size_t i = 0; i < c.eps.size(); ++i) {
        if (c.eps[i].sign() <= 0) throw PreconditionError("--eps values must be positive");
        for (std::size_t j = 0; j < i; ++j)
            if (c.eps[i] == c.eps[j]) throw PreconditionError("--eps values must be distinct");
    }
    if (c.tol && !(*c.tol > 0)) throw PreconditionError("--tol must be positive");
    if (c.rho_max && c.rho_max->sign() <= 0) throw PreconditionError("--rho-max must be positive");
    if (c.window && !(c.window->x1 > c.window->x0 && c.window->y1 > c.window->y0))
        throw PreconditionError("--window needs x0 < x1 and y0 < y1");
    if ((c.command == "center-verify" || c.command == "unfold") && c.condition.empty())
        throw PreconditionError(c.command + " needs --condition");
    if (c.command == "unfold" && c.eps.size() > 1) throw PreconditionError("unfold takes a single --eps");
    if (c.command == "portrait" && c.output.empty()) throw PreconditionError("portrait needs --output for the SVG");
    if (c.command == "resultant-demo" && c.target != "v6")
        throw PreconditionError("resultant-demo knows only 'v6'");
}

namespace {

template <class T>
std::vector<T> split_list(const std::string& text, T (*conv)(const std::string&, int)) {
    std::vector<T> out;
    std::size_t b = 0;
    for (;;) {
        std::size_t e = text.find(',', b);
        std::string item = text.substr(b, e == std::string::npos ? std::string::npos : e - b);
        out.push_back(conv(item, static_cast<int>(b)));
        if (e == std::string::npos) break;
        b = e + 1;
    }
    return out;
}

Rational rational_item(const std::string& s, int offset) {
    try {
        return Rational::parse(s);
    } catch (const ParseError& pe) {
        throw ParseError(pe.bare_message(), 0, offset + pe.column());
    }
}

double double_item(const std::string& s, int offset) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ParseError("malformed number '" + s + "'", 0, offset + 1);
    }
    while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
    if (used != s.size() || !std::isfinite(v)) throw ParseError("malformed number '" + s + "'", 0, offset + 1);
    return v;
}

}  // namespace

std::vector<Rational> parse_rational_list(const std::string& text) { return split_list<Rational>(text, rational_item); }
std::vector<double> parse_double_list(const std::string& text) { return split_list<double>(text, double_item); }

std::vector<std::pair<double, double>> parse_seeds(const std::string& text) {
    std::vector<std::pair<double, double>> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!(ls >> a)) continue;
        if (!(ls >> b) || (ls >> extra)) throw ParseError("a seed is 'x y' or 'x, y'", lineno, 1);
        try {
            out.emplace_back(double_item(a, 0), double_item(b, 0));
        } catch (const ParseError& pe) {
            throw ParseError(pe.bare_message(), lineno, 1);
        }
    }
    return out;
}

int exit_code(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return 2;
    if (dynamic_cast<const PreconditionError*>(&e)) return 3;
    if (dynamic_cast<const NumericError*>(&e)) return 4;
    return 1;
}

namespace {

ordered_json opt_rational(const std::optional<Rational>& r) { return r ? ordered_json(r->str()) : ordered_json(); }
ordered_json opt_unsigned(const std::optional<unsigned>& u) { return u ? ordered_json(*u) : ordered_json(); }

ordered_json decimals(const std::vector<BigFloat>& v) {
    ordered_json a = ordered_json::array();
    for (const auto& x : v) a.push_back(to_decimal(x));
    return a;
}

BigFloat threshold_for(unsigned bits) {
    PrecisionScope ps(bits);
    return ldexp(BigFloat(1), -static_cast<int>(bits / 2));
}

ordered_json spot_json(const SpotCheckReport& s) {
    ordered_json j;
    ordered_json eps = ordered_json::array();
    for (const auto& e : s.eps) eps.push_back(e.str());
    j["eps"] = eps;
    ordered_json runs = ordered_json::array();
    for (const auto& r : s.runs) runs.push_back({{"eps", opt_rational(r.eps)}, {"V", decimals(r.V)}});
    j["runs"] = runs;
    ordered_json pert = ordered_json::object();
    for (const auto& [k, v] : s.perturbation) pert[k] = v.str();
    j["perturbation"] = pert;
    j["max_abs"] = to_decimal(s.max_abs, 20);
    j["threshold"] = to_decimal(s.threshold, 6);
    j["vanishes"] = s.vanishes;
    j["monodromic_candidate"] = s.monodromy.candidate;
    j["monodromy_reason"] = s.monodromy.reason;
    return j;
}

int cmd_classify(const RunConfig& c, const SystemSpec& spec, ordered_json& rep) {
    if (spec.z2cubic && spec.z2cubic->root)
        throw PreconditionError("classify needs rational parameters; this system carries a square root");
    SwitchingSystem sys = shift_to_origin(spec.system(c.bits), c.point.first, c.point.second);
    unsigned N = c.order.value_or(12);
    ordered_json res = ordered_json::array();
    for (Half h : {Half::Upper, Half::Lower}) {
        const PlanarField& f = h == Half::Upper ? sys.upper : sys.lower;
        if (!f.is_concrete()) throw PreconditionError("field still has free parameters");
        auto J = jacobian_at(f, Rational(0), Rational(0));
        bool singular = f.P.constant_term().is_zero() && f.Q.constant_term().is_zero();
        if (!singular || !J[0][0].is_zero() || !J[0][1].is_zero() || J[1][0] != Rational(1) || !J[1][1].is_zero())
            throw PreconditionError("the point is not a nilpotent singular point with linear part (0, x)");
        auto [Psi, Phi] = psi_phi(f);
        NilpotentClass cl = classify(fg_data(Psi, Phi, N));
        res.push_back({{"point", {c.point.first.str(), c.point.second.str()}},
                       {"half", h == Half::Upper ? "upper" : "lower"},
                       {"m", opt_unsigned(cl.witness.m)},
                       {"n", opt_unsigned(cl.witness.n)},
                       {"f_m", opt_rational(cl.witness.f_m)},
                       {"g_n", opt_rational(cl.witness.g_n)},
                       {"delta", opt_rational(cl.witness.delta)},
                       {"kind", to_string(cl.kind)},
                       {"multiplicity", opt_unsigned(cl.multiplicity)}});
    }
    rep["order"] = N;
    rep["results"] = res;
    return 0;
}

int cmd_lyapunov(const RunConfig& c, const SystemSpec& spec, ordered_json& rep) {
    unsigned K = c.order.value_or(8);
    std::vector<std::pair<std::optional<Rational>, SwitchingSystem>> jobs;
    if (spec.is_family()) {
        std::vector<Rational> eps = c.eps.empty() ? std::vector<Rational>{Rational(1, 10)} : c.eps;
        Z2CubicParams p = spec.z2cubic->approximate(c.bits);
        for (const auto& e : eps) jobs.emplace_back(e, scaled_unfolded_z2(p, spec.unfolding, e));
    } else {
        if (!c.eps.empty()) throw PreconditionError("--eps applies to [z2cubic] systems only");
        jobs.emplace_back(std::nullopt, spec.system(c.bits));
    }
    BigFloat thr = threshold_for(c.bits);
    PrecisionScope ps(c.bits);
    ordered_json runs = ordered_json::array();
    bool all_below = true;
    for (const auto& [e, sys] : jobs) {
        LyapunovReport r = displacement_coeffs(sys, K, c.bits);
        BigFloat mx = 0;
        for (const auto& v : r.V)
            if (abs(v) > mx) mx = abs(v);
        bool below = mx < thr;
        all_below &= below;
        ordered_json tol = ordered_json::array();
        for (const auto& t : r.tol) tol.push_back(to_decimal(t, 6));
        runs.push_back({{"eps", opt_rational(e)},
                        {"V", decimals(r.V)},
                        {"tol", tol},
                        {"max_abs", to_decimal(mx, 20)},
                        {"below_threshold", below}});
    }
    rep["order"] = K;
    rep["precision_bits"] = c.bits;
    rep["threshold"] = to_decimal(thr, 6);
    rep["runs"] = runs;
    rep["all_below_threshold"] = all_below;
    return 0;
}

int cmd_center(const RunConfig& c, const SystemSpec& spec, ordered_json& rep) {
    if (!spec.is_family()) throw PreconditionError("center-verify needs a [z2cubic] system");
    CenterId id = parse_center_id(c.condition);
    SpotCheckOptions opt;
    if (!c.eps.empty()) opt.eps = c.eps;
    if (c.order) opt.order = *c.order;
    opt.bits = c.bits;
    rep["condition"] = to_string(id);
    Membership m = condition_membership(*spec.z2cubic, id);
    rep["membership"] = m.holds;
    if (!m.holds) {
        rep["violated"] = m.violated;
        rep["certificate"] = false;
        rep["passed"] = false;
        return 3;
    }
    CenterCertificate cert;
    try {
        cert = certify_center(*spec.z2cubic, id, opt);
    } catch (const std::logic_error& e) {
        if (dynamic_cast<const PreconditionError*>(&e)) throw;
        rep["certificate"] = false;
        rep["failure"] = e.what();
        rep["passed"] = false;
        return 1;
    }
    rep["route"] = to_string(cert.route);
    rep["certificate"] = true;
    if (cert.H_upper) rep["H_upper"] = cert.H_upper->str();
    if (cert.H_lower) rep["H_lower"] = cert.H_lower->str();
    if (cert.inverse_integrating_factor) rep["inverse_integrating_factor"] = cert.inverse_integrating_factor->str();
    rep["symmetry"] = cert.symmetry;
    if (id == CenterId::IV) rep["scaling_invariance"] = cert.scaling_invariance;
    rep["detail"] = cert.detail;
    rep["spotcheck"] = spot_json(*cert.spotcheck);
    bool ok = cert.spotcheck->vanishes;
    rep["passed"] = ok;
    return ok ? 0 : 4;
}

int cmd_resultant(const RunConfig&, ordered_json& rep) {
    MPoly f = MPoly::parse("(7*b21^2 + 40*b21*p02 - 80*p02^2)*(29*b21^2 - 40*b21*p02 + 80*p02^2)");
    MPoly g = MPoly::parse("551*b21^2 + 1544*b21*p02 - 3088*p02^2");
    rep["target"] = "v6";
    rep["f"] = f.str();
    rep["g"] = g.str();
    rep["variable"] = "p02";
    rep["resultant"] = resultant(f, g, "p02").str();
    return 0;
}

int cmd_unfold(const RunConfig& c, const SystemSpec& spec, ordered_json& rep) {
    if (!spec.is_family()) throw PreconditionError("unfold needs a [z2cubic] system");
    if (!spec.unfolding.empty()) throw PreconditionError("unfold starts from the center; put increments in --schedule");
    CenterId id = parse_center_id(c.condition);
    std::vector<ScheduleStage> sched;
    if (!c.schedule_path.empty()) sched = parse_schedule_file(c.schedule_path);
    UnfoldOptions o;
    if (!c.eps.empty()) o.eps = c.eps.front();
    if (c.order) o.order = *c.order;
    o.bits = c.bits;
    if (c.rho_max) o.rho_max = *c.rho_max;
    CycleCertificate cc = unfold_cycles(spec.z2cubic->approximate(c.bits), id, sched, o);
    PrecisionScope ps(c.bits);
    ordered_json br = ordered_json::array();
    for (const auto& b : cc.brackets) br.push_back({to_decimal(b.lo, 30), to_decimal(b.hi, 30)});
    rep["condition"] = to_string(id);
    rep["eps"] = o.eps.str();
    rep["method"] = to_string(cc.method);
    rep["order"] = cc.order;
    rep["precision_bits"] = cc.precision_bits;
    rep["count"] = cc.count;
    rep["brackets"] = br;
    rep["V"] = decimals(cc.V);
    rep["sign_alternations"] = cc.sign_alternations;
    rep["stage_counts"] = cc.stage_counts;
    rep["precision_stable"] = cc.precision_stable;
    return 0;
}

int cmd_portrait(const RunConfig& c, const SystemSpec& spec, ordered_json& rep) {
    SwitchingSystem sys = spec.system(c.bits);
    Window w = c.window.value_or(Window{-2, 2, -1.5, 1.5});
    auto seeds = c.seeds_path.empty() ? standard_seeds(w, 5, 4) : parse_seeds(read_text_file(c.seeds_path));
    PortraitOptions opt;
    if (c.tol) opt.integrate.tol = *c.tol;
    auto orbits = render_portrait(sys, seeds, w, c.output, opt);
    ordered_json arr = ordered_json::array();
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const auto& tr = orbits[i].forward;
        std::size_t crossings = 0, sliding = 0;
        for (const auto& e : tr.events) (e.kind == EventKind::Crossing ? crossings : sliding)++;
        ordered_json o{{"seed", {seeds[i].first, seeds[i].second}},
                       {"crossings", crossings},
                       {"sliding_events", sliding},
                       {"singular", orbits[i].singular},
                       {"truncated", tr.truncated}};
        if (seeds[i].second == 0 && seeds[i].first != 0) {
            IntegrateOptions io;
            io.tol = opt.integrate.tol;
            o["return_proximity"] = return_proximity(sys, seeds[i].first, io);
        }
        arr.push_back(o);
    }
    rep["svg"] = c.output;
    rep["window"] = {w.x0, w.x1, w.y0, w.y1};
    rep["tol"] = opt.integrate.tol;
    rep["orbits"] = arr;
    return 0;
}

}  // namespace

int run(const RunConfig& c, std::ostream& out) {
    validate(c);
    ordered_json rep;
    rep["command"] = c.command;
    int status = 0;
    if (c.command == "resultant-demo") {
        status = cmd_resultant(c, rep);
    } else {
        SystemSpec spec = parse_system_file(c.system_path);
        rep["system"] = c.system_path;
        if (c.command == "classify") status = cmd_classify(c, spec, rep);
        else if (c.command == "lyapunov") status = cmd_lyapunov(c, spec, rep);
        else if (c.command == "center-verify") status = cmd_center(c, spec, rep);
        else if (c.command == "unfold") status = cmd_unfold(c, spec, rep);
        else status = cmd_portrait(c, spec, rep);
    }
    std::string text = rep.dump(2) + "\n";
    if (c.output.empty() || c.command == "portrait") {
        out << text;
    } else {
        std::ofstream f(c.output, std::ios::binary);
        if (!f || !(f << text)) throw std::runtime_error("cannot write '" + c.output + "'");
    }
    return status;
}

}  // namespace nilcyc
