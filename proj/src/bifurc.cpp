#include "nilcyc/bifurc.hpp"

#include "nilcyc/errors.hpp"
#include "nilcyc/families.hpp"

#include <algorithm>
#include <cmath>

namespace nilcyc {

namespace {

// ---- univariate arithmetic over Q ----

void trim(UPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

Rational eval(const UPoly& p, const Rational& x) {
    Rational acc(0);
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

int sign_at(const UPoly& p, const Rational& x) { return eval(p, x).sign(); }

UPoly deriv(const UPoly& p) {
    UPoly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rational(static_cast<long>(i)));
    trim(d);
    return d;
}

// Remainder of a by b (b nonzero).
UPoly rem(UPoly a, const UPoly& b) {
    trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        Rational f = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
        a.pop_back();
        trim(a);
    }
    return a;
}

UPoly quo(UPoly a, const UPoly& b) {
    trim(a);
    if (a.size() < b.size()) return {};
    UPoly q(a.size() - b.size() + 1, Rational(0));
    while (a.size() >= b.size() && !a.empty()) {
        Rational f = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        q[shift] = f;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
        a.pop_back();
        trim(a);
    }
    trim(q);
    return q;
}

UPoly gcd(UPoly a, UPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        UPoly r = rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Rational lc = a.back();
        for (auto& c : a) c /= lc;
    }
    return a;
}

std::vector<UPoly> sturm(const UPoly& p) {
    std::vector<UPoly> s{p, deriv(p)};
    while (!s.back().empty() && s.back().size() > 1) {
        UPoly r = rem(s[s.size() - 2], s.back());
        for (auto& c : r) c = -c;
        if (r.empty()) break;
        s.push_back(r);
    }
    return s;
}

int variations(const std::vector<UPoly>& s, const Rational& x) {
    int v = 0, last = 0;
    for (const auto& q : s) {
        int sg = sign_at(q, x);
        if (sg == 0) continue;
        if (last != 0 && sg != last) ++v;
        last = sg;
    }
    return v;
}

// Distinct roots in (a, b] of a square-free p.
int count_roots(const std::vector<UPoly>& s, const Rational& a, const Rational& b) {
    return variations(s, a) - variations(s, b);
}

Rational floor_q(const Rational& x) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), x.num().get_mpz_t(), x.den().get_mpz_t());
    return Rational(mpq_class(q));
}

// Simplest rational (smallest denominator) in [lo, hi].
Rational simplest_between(const Rational& lo, const Rational& hi) {
    if (lo.sign() <= 0 && hi.sign() >= 0) return Rational(0);
    if (hi.sign() < 0) return -simplest_between(-hi, -lo);
    Rational fl = floor_q(lo);
    if (fl == lo) return fl;
    if (fl + Rational(1) <= hi) return fl + Rational(1);
    return fl + Rational(1) / simplest_between(Rational(1) / (hi - fl), Rational(1) / (lo - fl));
}

void isolate(const UPoly& p, const std::vector<UPoly>& s, Rational a, Rational b, unsigned bits,
             std::vector<RealRoot>& out) {
    int n = count_roots(s, a, b);
    if (n == 0) return;
    const Rational width = Rational(1) / pow(Rational(2), bits);
    if (n > 1) {
        if (b - a < width * width) throw NumericError("root isolation failed: roots closer than 2^-" +
                                                      std::to_string(2 * bits));
        Rational m = (a + b) / Rational(2);
        isolate(p, s, a, m, bits, out);
        isolate(p, s, m, b, bits, out);
        return;
    }
    // one root in (a, b]
    if (sign_at(p, b) == 0) {
        out.push_back({b, b, b});
        return;
    }
    while (b - a > width) {
        Rational m = (a + b) / Rational(2);
        int sm = sign_at(p, m);
        if (sm == 0) {
            out.push_back({m, m, m});
            return;
        }
        if (count_roots(s, a, m) == 1)
            b = m;
        else
            a = m;
    }
    RealRoot r{a, b, std::nullopt};
    Rational c = simplest_between(a, b);
    if (sign_at(p, c) == 0) r.exact = c;
    out.push_back(r);
}

bool same_root(const RealRoot& a, const RealRoot& b) {
    if (a.exact && b.exact) return *a.exact == *b.exact;
    return !(a.hi < b.lo || b.hi < a.lo);
}

Rational left_of(const RealRoot& r) { return r.exact ? *r.exact : r.lo; }
Rational right_of(const RealRoot& r) { return r.exact ? *r.exact : r.hi; }

}  // namespace

UPoly restrict_to_axis(const MPoly& g) {
    MPoly h = g.substitute({{"y", MPoly(0)}}).compact();
    for (const auto& v : h.used_vars())
        if (v != "x") throw PreconditionError("g(x, 0) still depends on '" + v + "'");
    UPoly out;
    if (h.is_zero()) return out;
    for (const auto& c : h.coeffs_in("x")) out.push_back(c.compact().is_zero() ? Rational(0) : c.compact().constant_term());
    trim(out);
    return out;
}

BigFloat RealRoot::approx() const {
    if (exact) return to_big(*exact);
    return (to_big(lo) + to_big(hi)) / 2;
}

std::vector<RealRoot> real_roots(const UPoly& p0, const Rational& radius, unsigned bits) {
    UPoly p = p0;
    trim(p);
    if (p.empty()) throw PreconditionError("real_roots: zero polynomial");
    if (radius.sign() <= 0) throw PreconditionError("real_roots: radius must be positive");
    std::vector<RealRoot> out;
    if (p.size() == 1) return out;
    UPoly sf = quo(p, gcd(p, deriv(p)));
    auto s = sturm(sf);
    if (sign_at(sf, -radius) == 0) out.push_back({-radius, -radius, -radius});
    isolate(sf, s, -radius, radius, bits, out);
    std::sort(out.begin(), out.end(), [](const RealRoot& a, const RealRoot& b) { return a.lo < b.lo; });
    return out;
}

std::string to_string(SlidingRegime r) { return r == SlidingRegime::Sliding ? "sliding" : "escaping"; }

SlidingAnalysis sliding_segment(const SwitchingSystem& sys, const Rational& radius, unsigned bits) {
    UPoly gu = restrict_to_axis(sys.upper.Q), gl = restrict_to_axis(sys.lower.Q);
    if (gu.empty() || gl.empty()) throw PreconditionError("sliding_segment: g(x, 0) vanishes identically");
    SlidingAnalysis res;
    res.upper_roots = real_roots(gu, radius, bits);
    res.lower_roots = real_roots(gl, radius, bits);

    std::vector<RealRoot> all = res.upper_roots;
    for (const auto& r : res.lower_roots) {
        bool dup = false;
        for (const auto& q : all) dup |= same_root(q, r);
        if (!dup) all.push_back(r);
    }
    std::sort(all.begin(), all.end(), [](const RealRoot& a, const RealRoot& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < all.size(); ++i)
        if (!(right_of(all[i - 1]) < left_of(all[i])))
            throw NumericError("sliding_segment: roots of g+ and g- not separated at 2^-" + std::to_string(bits));

    std::optional<Rational> best_dist;
    for (std::size_t i = 1; i < all.size(); ++i) {
        Rational m = (right_of(all[i - 1]) + left_of(all[i])) / Rational(2);
        int su = sign_at(gu, m), sl = sign_at(gl, m);
        if (su * sl >= 0) continue;
        Rational a = left_of(all[i - 1]), b = right_of(all[i]);
        Rational dist = (a.sign() <= 0 && b.sign() >= 0) ? Rational(0) : std::min(abs(a), abs(b));
        if (!best_dist || dist < *best_dist) {
            best_dist = dist;
            res.segment = SlidingSegment{all[i - 1], all[i], su < 0 ? SlidingRegime::Sliding : SlidingRegime::Escaping};
        }
    }

    UPoly common = gcd(gu, gl);
    if (common.size() > 1) {
        for (const auto& r : real_roots(common, radius, bits)) {
            bool endpoint = res.segment && (same_root(r, res.segment->left) || same_root(r, res.segment->right));
            if (!endpoint) res.contact_points.push_back(r);
        }
    }
    return res;
}

JacobianResult independence_jacobian(const ParamFamily& family, const std::map<std::string, Rational>& point,
                                     const std::vector<unsigned>& Vs, const std::vector<std::string>& params,
                                     unsigned bits, std::optional<Rational> step) {
    const std::size_t n = params.size();
    if (n == 0 || Vs.size() != n) throw PreconditionError("independence_jacobian: need as many V indices as parameters");
    unsigned K = 0;
    for (unsigned v : Vs) {
        if (v < 1) throw PreconditionError("independence_jacobian: V indices start at 1");
        K = std::max(K, v);
    }
    Rational h = step ? *step : Rational(1) / pow(Rational(2), bits / 4);
    if (h.sign() <= 0) throw PreconditionError("independence_jacobian: step must be positive");

    JacobianResult res;
    res.step = h;
    res.precision_bits = bits;
    PrecisionScope scope(bits);
    res.J.assign(n, std::vector<BigFloat>(n, BigFloat(0)));
    res.err.assign(n, std::vector<BigFloat>(n, BigFloat(0)));

    for (std::size_t j = 0; j < n; ++j) {
        auto column = [&](const Rational& hh, std::vector<BigFloat>& noise) {
            auto at = [&](const Rational& delta) {
                auto p = point;
                p[params[j]] += delta;
                return displacement_coeffs(family(p), K, bits);
            };
            LyapunovReport plus = at(hh), minus = at(-hh);
            std::vector<BigFloat> d(n);
            BigFloat inv = 1 / (2 * to_big(hh));
            for (std::size_t i = 0; i < n; ++i) {
                d[i] = (plus.V[Vs[i] - 1] - minus.V[Vs[i] - 1]) * inv;
                noise[i] = std::max(noise[i], BigFloat((plus.tol[Vs[i] - 1] + minus.tol[Vs[i] - 1]) * inv));
            }
            return d;
        };
        std::vector<BigFloat> noise(n, BigFloat(0));
        auto d1 = column(h, noise);
        auto d2 = column(h / Rational(2), noise);
        for (std::size_t i = 0; i < n; ++i) {
            res.J[i][j] = (4 * d2[i] - d1[i]) / 3;
            res.err[i][j] = abs(res.J[i][j] - d2[i]) + 2 * noise[i];
        }
    }
    res.det = determinant(res.J);
    res.det_err = 0;
    if (n == 1) {
        res.det_err = res.err[0][0];
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                std::vector<std::vector<BigFloat>> minor;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == i) continue;
                    std::vector<BigFloat> row;
                    for (std::size_t c = 0; c < n; ++c)
                        if (c != j) row.push_back(res.J[r][c]);
                    minor.push_back(row);
                }
                res.det_err += abs(determinant(minor)) * res.err[i][j];
            }
    }
    res.conclusive = res.det_err < abs(res.det);
    return res;
}

std::string to_string(CycleMethod m) {
    return m == CycleMethod::SeriesEvaluation ? "series-evaluation" : "direct-return-map";
}

std::vector<Bracket> series_brackets(const std::vector<BigFloat>& V, const BigFloat& rho_max, unsigned grid) {
    std::vector<Bracket> out;
    if (grid < 2) throw PreconditionError("series_brackets: grid too small");
    if (std::all_of(V.begin(), V.end(), [](const BigFloat& v) { return v == 0; })) return out;
    // Geometric grid over 60 binary orders below rho_max.
    const BigFloat lo = ldexp(rho_max, -60);
    const BigFloat ratio = pow(rho_max / lo, BigFloat(1) / (grid - 1));
    BigFloat prev_rho = lo, prev = eval_displacement(V, lo);
    for (unsigned i = 1; i < grid; ++i) {
        BigFloat rho = i + 1 == grid ? rho_max : BigFloat(prev_rho * ratio);
        BigFloat val = eval_displacement(V, rho);
        if (val == 0) {
            // land exactly on a root: bracket it with the neighbours
            BigFloat nxt = rho * ratio;
            if (nxt > rho_max) nxt = rho_max;
            out.push_back({prev_rho, nxt});
            prev_rho = nxt;
            prev = eval_displacement(V, nxt);
            ++i;
            continue;
        }
        if (prev != 0 && (prev < 0) != (val < 0)) {
            BigFloat a = prev_rho, b = rho, fa = prev;
            for (int it = 0; it < 80; ++it) {
                BigFloat m = (a + b) / 2, fm = eval_displacement(V, m);
                if (fm == 0) {
                    a = b = m;
                    break;
                }
                if ((fm < 0) == (fa < 0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            out.push_back({a, b});
        }
        prev_rho = rho;
        prev = val;
    }
    return out;
}

namespace {

std::size_t alternations(const std::vector<BigFloat>& V) {
    std::size_t n = 0;
    int last = 0;
    for (const auto& v : V) {
        int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
        if (s == 0) continue;
        if (last != 0 && s != last) ++n;
        last = s;
    }
    return n;
}

// V with entries at noise level set to zero.
std::vector<BigFloat> cleaned(const LyapunovReport& r) {
    std::vector<BigFloat> V = r.V;
    BigFloat floor = ldexp(BigFloat(1), -static_cast<int>(r.precision_bits) / 2);
    for (std::size_t k = 0; k < V.size(); ++k)
        if (abs(V[k]) <= std::max(r.tol[k], floor)) V[k] = 0;
    return V;
}

bool is_family_param(const std::string& k) {
    for (const auto& n : Z2CubicParams::names())
        if (n == k) return true;
    return false;
}

}  // namespace

CycleCertificate unfold_cycles(const Z2CubicParams& center, CenterId id, const std::vector<ScheduleStage>& schedule,
                               const UnfoldOptions& opt) {
    Membership m = condition_membership(center, id);
    if (!m.holds) throw PreconditionError("unfold_cycles: parameters do not satisfy condition " + to_string(id));
    if (opt.order < 2) throw PreconditionError("unfold_cycles: order must be at least 2");

    auto params = center.as_symbols();
    Unfolding u;
    const auto& keys = unfolding_keys();
    CycleCertificate cert;
    cert.order = opt.order;
    cert.precision_bits = opt.bits;

    auto run = [&](unsigned bits) { return displacement_coeffs(scaled_unfolded_z2(params, u, opt.eps), opt.order, bits); };

    LyapunovReport last;
    bool have = false;
    for (const auto& stage : schedule) {
        for (const auto& [k, v] : stage) {
            if (is_family_param(k))
                params[k] += MPoly(v);
            else if (std::find(keys.begin(), keys.end(), k) != keys.end())
                u[k] = u.count(k) ? u[k] + MPoly(v) : MPoly(v);
            else
                throw PreconditionError("unfold_cycles: unknown schedule key '" + k + "'");
        }
        last = run(opt.bits);
        have = true;
        PrecisionScope ps(opt.bits);
        cert.stage_counts.push_back(series_brackets(cleaned(last), to_big(opt.rho_max)).size());
    }
    if (!have) last = run(opt.bits);

    PrecisionScope ps(opt.bits);
    cert.V = cleaned(last);
    cert.sign_alternations = alternations(cert.V);
    BigFloat rmax = to_big(opt.rho_max);
    cert.brackets = series_brackets(cert.V, rmax);
    cert.count = cert.brackets.size();

    // Dropping the last retained order must not change the count.
    std::vector<BigFloat> shorter(cert.V.begin(), cert.V.end() - 1);
    if (series_brackets(shorter, rmax).size() != cert.count)
        throw NumericError("unfold_cycles: bracket count changes between orders " + std::to_string(opt.order - 1) +
                           " and " + std::to_string(opt.order) + "; raise the order or lower rho_max");

    if (opt.check_precision) {
        LyapunovReport hi = run(2 * opt.bits);
        PrecisionScope ps2(2 * opt.bits);
        std::vector<BigFloat> Vh = cleaned(hi);
        bool ok = series_brackets(Vh, to_big(opt.rho_max)).size() == cert.count;
        for (const auto& br : cert.brackets) {
            BigFloat a = eval_displacement(Vh, br.lo), b = eval_displacement(Vh, br.hi);
            ok = ok && ((a < 0 && b > 0) || (a > 0 && b < 0));
        }
        cert.precision_stable = ok;
    }
    return cert;
}

PseudoHopfResult pseudo_hopf_cycle(const BFamily& family, const Rational& b, const PseudoHopfOptions& opt) {
    PseudoHopfResult res;
    if (b.is_zero()) {
        res.diagnostics = "b = 0: the sliding segment is the single point (0,0); no extra crossing cycle";
        return res;
    }
    SwitchingSystem sys = family(b);
    PrecisionScope scope(opt.bits);
    BigFloat lo = to_big(opt.rho_min_factor * abs(b)), hi = to_big(opt.rho_max);
    if (!(lo < hi)) {
        res.diagnostics = "empty search window";
        return res;
    }
    auto d = [&](const BigFloat& r) { return return_map_displacement(sys, r); };
    const BigFloat ratio = pow(hi / lo, BigFloat(1) / (opt.grid - 1));
    std::optional<BigFloat> prev_r, prev_v;
    BigFloat r = lo;
    for (unsigned i = 0; i < opt.grid; ++i, r *= ratio) {
        if (i + 1 == opt.grid) r = hi;
        BigFloat v;
        try {
            v = d(r);
        } catch (const NumericError& e) {
            res.diagnostics += "rho=" + to_decimal(r, 6) + ": " + e.what() + "; ";
            prev_r.reset();
            continue;
        }
        if (prev_v && *prev_v != 0 && v != 0 && ((*prev_v < 0) != (v < 0))) {
            BigFloat a = *prev_r, c = r, fa = *prev_v;
            for (unsigned it = 0; it < opt.bisections; ++it) {
                BigFloat m = (a + c) / 2, fm = d(m);
                if (fm == 0) break;
                if ((fm < 0) == (fa < 0)) {
                    a = m;
                    fa = fm;
                } else {
                    c = m;
                }
            }
            res.bracket = Bracket{a, c};
            res.amplitude = (a + c) / 2;
            break;
        }
        prev_r = r;
        prev_v = v;
    }
    if (!res.bracket) {
        res.diagnostics += "no sign change of the return-map displacement on [" + to_decimal(lo, 6) + ", " +
                           to_decimal(hi, 6) + "]";
        return res;
    }
    {
        PrecisionScope twice(2 * opt.bits);
        BigFloat a(res.bracket->lo), c(res.bracket->hi);
        BigFloat fa = return_map_displacement(sys, a), fc = return_map_displacement(sys, c);
        res.confirmed = (fa < 0 && fc > 0) || (fa > 0 && fc < 0);
    }
    return res;
}

}  // namespace nilcyc
