#include "nilcyc/portrait.hpp"

#include "nilcyc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace nilcyc {

DoubleField::DoubleField(const PlanarField& f) {
    if (!f.is_concrete()) throw PreconditionError("portrait: field still has parameter symbols");
    auto load = [](const MPoly& p, std::vector<Term>& out) {
        MPoly q = p.with_vars(merge_vars(p.vars(), {"x", "y"}));
        for (const auto& [e, c] : q.collect({"x", "y"})) {
            MPoly cc = c.compact();
            if (cc.is_zero()) continue;
            out.push_back({cc.constant_term().to_double(), e[0], e[1]});
        }
    };
    load(f.P, p_);
    load(f.Q, q_);
}

std::array<double, 2> DoubleField::operator()(double x, double y) const {
    auto ev = [&](const std::vector<Term>& ts) {
        double s = 0;
        for (const auto& t : ts) s += t.c * std::pow(x, static_cast<int>(t.i)) * std::pow(y, static_cast<int>(t.j));
        return s;
    };
    return {ev(p_), ev(q_)};
}

std::string to_string(EventKind k) {
    switch (k) {
        case EventKind::Crossing: return "crossing";
        case EventKind::SlidingEntry: return "sliding-entry";
        case EventKind::SlidingExit: return "sliding-exit";
    }
    return "";
}

namespace {

using State = std::array<double, 2>;
using Rhs = std::function<State(const State&)>;

struct StepResult {
    State y5;
    double err;
};

// One Dormand-Prince 5(4) step.
StepResult dopri_step(const Rhs& f, const State& y, double h) {
    // autonomous: the c_i nodes are not needed
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
    auto comb = [&](std::initializer_list<std::pair<double, const State*>> l) {
        State r = y;
        for (auto& [c, k] : l) {
            r[0] += h * c * (*k)[0];
            r[1] += h * c * (*k)[1];
        }
        return r;
    };
    State k1 = f(y);
    State k2 = f(comb({{a21, &k1}}));
    State k3 = f(comb({{a31, &k1}, {a32, &k2}}));
    State k4 = f(comb({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    State k5 = f(comb({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    State k6 = f(comb({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    State y5 = comb({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    State k7 = f(y5);
    double err = 0;
    for (int i = 0; i < 2; ++i) {
        double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        err = std::max(err, std::abs(e));
    }
    return {y5, err};
}

enum class Mode { Upper, Lower, Sliding };

class Integrator {
public:
    Integrator(const SwitchingSystem& sys, const IntegrateOptions& opt) : up_(sys.upper), lo_(sys.lower), opt_(opt) {}

    Trajectory run(double x0, double y0) {
        Trajectory tr;
        double t = 0;
        State s{x0, y0};
        Mode mode;
        if (y0 > 0)
            mode = Mode::Upper;
        else if (y0 < 0)
            mode = Mode::Lower;
        else
            mode = mode_on_line(x0, tr, t);
        tr.samples.push_back({t, s[0], s[1]});
        double h = 1e-3;
        std::size_t crossings = 0;
        for (std::size_t step = 0; step < opt_.max_steps; ++step) {
            if (t >= opt_.t_end) return tr;
            if (std::abs(s[0]) > opt_.box || std::abs(s[1]) > opt_.box) {
                tr.truncated = true;
                tr.note = "left the box";
                return tr;
            }
            Rhs f = rhs(mode);
            State v = f(s);
            if (std::hypot(v[0], v[1]) < opt_.singular_tol) {
                tr.truncated = true;
                tr.note = mode == Mode::Sliding ? "pseudo-equilibrium on the sliding segment" : "singular point";
                return tr;
            }
            h = std::min(h, opt_.t_end - t);
            StepResult r = dopri_step(f, s, h);
            double scale = opt_.tol * (1 + std::max(std::hypot(s[0], s[1]), std::hypot(r.y5[0], r.y5[1])));
            if (r.err > scale) {
                h *= std::max(0.2, 0.9 * std::pow(scale / r.err, 0.2));
                if (h < 1e-14) {
                    tr.truncated = true;
                    tr.note = "step size underflow";
                    return tr;
                }
                continue;
            }
            double grow = r.err > 0 ? std::min(5.0, 0.9 * std::pow(scale / r.err, 0.2)) : 5.0;

            // event search inside the accepted step
            double ev_h = -1;
            if (mode == Mode::Upper && r.y5[1] < 0) ev_h = locate(f, s, h, [](const State& q) { return q[1]; });
            if (mode == Mode::Lower && r.y5[1] > 0) ev_h = locate(f, s, h, [](const State& q) { return q[1]; });
            int exit_side = 0;
            if (mode == Mode::Sliding) {
                double gu0 = up_(s[0], 0)[1], gl0 = lo_(s[0], 0)[1];
                double gu1 = up_(r.y5[0], 0)[1], gl1 = lo_(r.y5[0], 0)[1];
                if ((gu0 < 0) != (gu1 < 0)) {
                    ev_h = locate(f, s, h, [&](const State& q) { return up_(q[0], 0)[1]; });
                    exit_side = 1;
                } else if ((gl0 > 0) != (gl1 > 0)) {
                    ev_h = locate(f, s, h, [&](const State& q) { return lo_(q[0], 0)[1]; });
                    exit_side = -1;
                }
            }
            if (ev_h >= 0) {
                s = dopri_step(f, s, ev_h).y5;
                t += ev_h;
                s[1] = 0;
                tr.samples.push_back({t, s[0], s[1]});
                if (mode == Mode::Sliding) {
                    tr.events.push_back({t, s[0], EventKind::SlidingExit});
                    mode = exit_side > 0 ? Mode::Upper : Mode::Lower;
                } else {
                    Mode from = mode;
                    mode = arrive(from, s[0], tr, t);
                    if (mode != Mode::Sliding && ++crossings == opt_.max_crossings && opt_.max_crossings) return tr;
                }
                h = std::max(ev_h, 1e-6);
                continue;
            }
            s = r.y5;
            if (mode == Mode::Sliding) s[1] = 0;
            t += h;
            tr.samples.push_back({t, s[0], s[1]});
            h *= grow;
        }
        tr.truncated = true;
        tr.note = "step budget exhausted";
        return tr;
    }

private:
    DoubleField up_, lo_;
    IntegrateOptions opt_;

    Rhs rhs(Mode m) const {
        if (m == Mode::Upper) return [this](const State& q) { return up_(q[0], q[1]); };
        if (m == Mode::Lower) return [this](const State& q) { return lo_(q[0], q[1]); };
        return [this](const State& q) {
            auto fu = up_(q[0], 0), fl = lo_(q[0], 0);
            double den = fl[1] - fu[1];
            if (den == 0) return State{0, 0};
            return State{(fl[1] * fu[0] - fu[1] * fl[0]) / den, 0};
        };
    }

    // Step length in (0, h] where g changes sign, by Illinois regula falsi on the step size.
    double locate(const Rhs& f, const State& s, double h, const std::function<double(const State&)>& g) const {
        double a = 0, b = h, ga = g(s), gb = g(dopri_step(f, s, h).y5);
        int side = 0;
        for (int it = 0; it < 100 && b - a > 1e-15 * std::max(1.0, h); ++it) {
            double c = (ga - gb) != 0 ? b - gb * (b - a) / (gb - ga) : 0.5 * (a + b);
            if (!(c > a && c < b)) c = 0.5 * (a + b);
            double gc = g(dopri_step(f, s, c).y5);
            if (gc == 0) return c;
            if ((gc > 0) == (gb > 0)) {
                b = c;
                gb = gc;
                if (side == -1) ga /= 2;
                side = -1;
            } else {
                a = c;
                ga = gc;
                if (side == 1) gb /= 2;
                side = 1;
            }
        }
        return b;
    }

    Mode mode_on_line(double x, Trajectory& tr, double t) const {
        double gu = up_(x, 0)[1], gl = lo_(x, 0)[1];
        if (gu < 0 && gl > 0) {
            tr.events.push_back({t, x, EventKind::SlidingEntry});
            return Mode::Sliding;
        }
        if (gu >= 0 && gl >= 0) return Mode::Upper;
        if (gu <= 0 && gl <= 0) return Mode::Lower;
        tr.note = "started on an escaping segment; left into the upper half";
        return Mode::Upper;
    }

    Mode arrive(Mode from, double x, Trajectory& tr, double t) const {
        double gu = up_(x, 0)[1], gl = lo_(x, 0)[1];
        if (from == Mode::Upper) {
            if (gl > 0 && gu < 0) {
                tr.events.push_back({t, x, EventKind::SlidingEntry});
                return Mode::Sliding;
            }
            tr.events.push_back({t, x, EventKind::Crossing});
            return Mode::Lower;
        }
        if (gu < 0 && gl > 0) {
            tr.events.push_back({t, x, EventKind::SlidingEntry});
            return Mode::Sliding;
        }
        tr.events.push_back({t, x, EventKind::Crossing});
        return Mode::Upper;
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    if (s == "-0.00") s = "0.00";
    return s;
}

}  // namespace

Trajectory filippov_integrate(const SwitchingSystem& sys, double x0, double y0, const IntegrateOptions& opt) {
    if (!(opt.tol > 0)) throw PreconditionError("filippov_integrate: tol must be positive");
    Integrator in(sys, opt);
    DoubleField fu(sys.upper), fl(sys.lower);
    auto v = y0 >= 0 ? fu(x0, y0) : fl(x0, y0);
    if (std::hypot(v[0], v[1]) < opt.singular_tol) throw PreconditionError("filippov_integrate: start is a singular point");
    return in.run(x0, y0);
}

double return_proximity(const SwitchingSystem& sys, double x0, const IntegrateOptions& opt) {
    IntegrateOptions o = opt;
    o.max_crossings = 2;
    Trajectory tr = filippov_integrate(sys, x0, 0, o);
    std::size_t n = 0;
    for (const auto& e : tr.events)
        if (e.kind == EventKind::Crossing && ++n == 2) return std::abs(e.x - x0);
    return -1;
}

std::vector<std::pair<double, double>> standard_seeds(const Window& w, unsigned nx, unsigned ny) {
    std::vector<std::pair<double, double>> out;
    for (unsigned i = 0; i < nx; ++i)
        for (unsigned j = 0; j < ny; ++j)
            out.push_back({w.x0 + (w.x1 - w.x0) * (i + 0.5) / nx, w.y0 + (w.y1 - w.y0) * (j + 0.5) / ny});
    return out;
}

std::string render_svg(const std::vector<Trajectory>& orbits, const Window& w,
                       const std::vector<std::pair<double, double>>& markers, unsigned width, unsigned height) {
    if (!(w.x1 > w.x0) || !(w.y1 > w.y0)) throw PreconditionError("render_svg: empty window");
    auto X = [&](double x) { return (x - w.x0) / (w.x1 - w.x0) * width; };
    auto Y = [&](double y) { return (w.y1 - y) / (w.y1 - w.y0) * height; };
    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    if (w.y0 < 0 && w.y1 > 0)
        o << "<line x1=\"0\" y1=\"" << fmt(Y(0)) << "\" x2=\"" << width << "\" y2=\"" << fmt(Y(0))
          << "\" stroke=\"#c03030\" stroke-width=\"1.5\"/>\n";
    for (const auto& tr : orbits) {
        std::string pts;
        double lx = 1e300, ly = 1e300;
        bool inside_prev = false;
        auto flush = [&] {
            if (pts.find(' ') != std::string::npos)
                o << "<polyline fill=\"none\" stroke=\"#203060\" stroke-width=\"0.8\" points=\"" << pts << "\"/>\n";
            pts.clear();
            lx = ly = 1e300;
        };
        for (const auto& s : tr.samples) {
            double px = X(s[1]), py = Y(s[2]);
            const double W = width, H = height;
            bool inside = px >= -W && px <= 2 * W && py >= -H && py <= 2 * H;
            if (!inside) {
                if (inside_prev) flush();
                inside_prev = false;
                continue;
            }
            inside_prev = true;
            if (std::hypot(px - lx, py - ly) < 0.5) continue;
            if (!pts.empty()) pts += ' ';
            pts += fmt(px) + "," + fmt(py);
            lx = px;
            ly = py;
        }
        flush();
    }
    for (const auto& [mx, my] : markers)
        o << "<circle cx=\"" << fmt(X(mx)) << "\" cy=\"" << fmt(Y(my)) << "\" r=\"3\" fill=\"black\"/>\n";
    o << "</svg>\n";
    return o.str();
}

std::vector<SeedOrbits> render_portrait(const SwitchingSystem& sys, const std::vector<std::pair<double, double>>& seeds,
                                        const Window& w, const std::string& out_path, const PortraitOptions& opt) {
    std::vector<SeedOrbits> res;
    std::vector<Trajectory> orbits;
    SwitchingSystem rev{{-sys.upper.P, -sys.upper.Q}, {-sys.lower.P, -sys.lower.Q}};
    DoubleField fu(sys.upper), fl(sys.lower);
    for (const auto& [x, y] : seeds) {
        auto v = y >= 0 ? fu(x, y) : fl(x, y);
        SeedOrbits so;
        so.seed = {x, y};
        so.singular = std::hypot(v[0], v[1]) < opt.integrate.singular_tol;
        if (!so.singular) {
            so.forward = filippov_integrate(sys, x, y, opt.integrate);
            orbits.push_back(so.forward);
            if (opt.backward) {
                so.backward = filippov_integrate(rev, x, y, opt.integrate);
                orbits.push_back(so.backward);
            }
        }
        res.push_back(std::move(so));
    }
    std::string svg = render_svg(orbits, w, opt.markers);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + out_path + "' for writing");
    out << svg;
    if (!out) throw std::runtime_error("write to '" + out_path + "' failed");
    return res;
}

}  // namespace nilcyc
