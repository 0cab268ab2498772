#include "nilcyc/cli.hpp"
#include "nilcyc/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace nilcyc;

int main(int argc, char** argv) {
    CLI::App app{"nilcyc: nilpotent switching systems, Lyapunov constants, centers and cycles"};
    app.require_subcommand(1);

    RunConfig cfg = default_run_config();
    std::string eps, point, window;
    std::optional<std::string> rho;
    std::optional<unsigned> order;
    std::optional<double> tol;

    auto common = [&](CLI::App* sub, bool system) {
        if (system) sub->add_option("--system", cfg.system_path, "system file")->required();
        sub->add_option("--bits", cfg.bits, "working precision (default NILCYC_PRECISION_BITS or 256)");
        sub->add_option("-o,--output", cfg.output, "report path (stdout when omitted)");
    };

    auto* classify = app.add_subcommand("classify", "classify the nilpotent point of each half");
    common(classify, true);
    classify->add_option("--point", point, "x,y (default 1,0)");
    classify->add_option("--order", order, "series order (default 12)");

    auto* lyap = app.add_subcommand("lyapunov", "generalized Lyapunov constants");
    common(lyap, true);
    lyap->add_option("--order", order, "number of constants (default 8)");
    lyap->add_option("--eps", eps, "comma-separated eps samples (default 1/10)");

    auto* center = app.add_subcommand("center-verify", "certify a bi-center condition");
    common(center, true);
    center->add_option("--condition", cfg.condition, "I..VI")->required();
    center->add_option("--order", order, "spot-check order (default 8)");
    center->add_option("--eps", eps, "spot-check eps samples (default 1/10,1/16)");

    auto* res = app.add_subcommand("resultant-demo", "exact resultant of the degree-six factors");
    res->add_option("target", cfg.target, "v6")->required();
    res->add_option("-o,--output", cfg.output, "report path (stdout when omitted)");

    auto* unfold = app.add_subcommand("unfold", "crossing limit cycles from a perturbation schedule");
    common(unfold, true);
    unfold->add_option("--condition", cfg.condition, "I..VI")->required();
    unfold->add_option("--schedule", cfg.schedule_path, "[[stage]] file");
    unfold->add_option("--order", order, "series order (default 8)");
    unfold->add_option("--eps", eps, "scaling eps (default 1/10)");
    unfold->add_option("--rho-max", rho, "bracket search window (default 1/2)");

    auto* portrait = app.add_subcommand("portrait", "SVG phase portrait");
    common(portrait, true);
    portrait->add_option("--window", window, "x0,x1,y0,y1");
    portrait->add_option("--seeds", cfg.seeds_path, "file with one 'x y' per line");
    portrait->add_option("--tol", tol, "integrator tolerance (default 1e-9)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        cfg.command = app.get_subcommands().front()->get_name();
        cfg.order = order;
        cfg.tol = tol;
        if (!eps.empty()) cfg.eps = parse_rational_list(eps);
        if (rho) cfg.rho_max = Rational::parse(*rho);
        if (!point.empty()) {
            auto p = parse_rational_list(point);
            if (p.size() != 2) throw ParseError("--point needs x,y", 0, 1);
            cfg.point = {p[0], p[1]};
        }
        if (!window.empty()) {
            auto w = parse_double_list(window);
            if (w.size() != 4) throw ParseError("--window needs x0,x1,y0,y1", 0, 1);
            cfg.window = Window{w[0], w[1], w[2], w[3]};
        }
        return run(cfg, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "nilcyc: " << e.what() << "\n";
        return exit_code(e);
    }
}
