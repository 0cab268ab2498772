#pragma once

#include "nilcyc/system.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace nilcyc {

// Polynomial field evaluated in double precision.
class DoubleField {
public:
    explicit DoubleField(const PlanarField& f);  // throws if f still has parameter symbols
    std::array<double, 2> operator()(double x, double y) const;

private:
    struct Term {
        double c;
        unsigned i, j;
    };
    std::vector<Term> p_, q_;
};

enum class EventKind { Crossing, SlidingEntry, SlidingExit };
std::string to_string(EventKind k);

struct Event {
    double t, x;
    EventKind kind;
};

struct Trajectory {
    std::vector<std::array<double, 3>> samples;  // (t, x, y)
    std::vector<Event> events;
    bool truncated = false;  // stopped at a singular or pseudo-singular point, or left the box
    std::string note;
};

struct IntegrateOptions {
    double tol = 1e-10;
    double t_end = 100;
    std::size_t max_crossings = 0;  // stop after this many crossing events; 0 = no limit
    double singular_tol = 1e-12;    // |F| below this counts as reaching a singular point
    double box = 1e6;
    std::size_t max_steps = 2000000;
};

// Dormand-Prince 5(4) on the active half field with Filippov rules on y = 0.
Trajectory filippov_integrate(const SwitchingSystem& sys, double x0, double y0, const IntegrateOptions& opt = {});

// |x - x0| at the second crossing of y = 0 by an orbit started at (x0, 0); negative if it never returns.
double return_proximity(const SwitchingSystem& sys, double x0, const IntegrateOptions& opt = {});

struct Window {
    double x0, x1, y0, y1;
};

std::vector<std::pair<double, double>> standard_seeds(const Window& w, unsigned nx, unsigned ny);

// Deterministic SVG: manifold line, trajectories, markers.
std::string render_svg(const std::vector<Trajectory>& orbits, const Window& w,
                       const std::vector<std::pair<double, double>>& markers, unsigned width = 600, unsigned height = 450);

struct PortraitOptions {
    IntegrateOptions integrate{1e-9, 40, 0, 1e-12, 1e3, 400000};
    bool backward = true;  // also integrate each seed in reverse time
    std::vector<std::pair<double, double>> markers{{-1, 0}, {1, 0}};
};

struct SeedOrbits {
    std::pair<double, double> seed;
    bool singular = false;  // seed sits on a singular point; nothing integrated or drawn
    Trajectory forward, backward;
};

// Integrates every seed and writes the SVG; one record per seed, in order.
std::vector<SeedOrbits> render_portrait(const SwitchingSystem& sys, const std::vector<std::pair<double, double>>& seeds,
                                        const Window& w, const std::string& out_path, const PortraitOptions& opt = {});

}  // namespace nilcyc
