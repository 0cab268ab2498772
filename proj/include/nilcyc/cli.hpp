#pragma once

#include "nilcyc/portrait.hpp"
#include "nilcyc/rational.hpp"

#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nilcyc {

struct RunConfig {
    std::string command;  // classify | lyapunov | center-verify | resultant-demo | unfold | portrait
    std::string system_path;
    std::optional<unsigned> order;
    unsigned bits = 256;
    std::vector<Rational> eps;
    std::string output;  // JSON goes to stdout when empty; required for portrait (SVG)
    std::string condition;
    std::string schedule_path;
    std::pair<Rational, Rational> point{Rational(1), Rational(0)};
    std::optional<Window> window;
    std::string seeds_path;
    std::optional<double> tol;
    std::optional<Rational> rho_max;
    std::string target;  // resultant-demo
};

// RunConfig with bits taken from NILCYC_PRECISION_BITS when set.
RunConfig default_run_config();

// Throws PreconditionError.
void validate(const RunConfig& cfg);

// "1/10,1/16" and friends; ParseError with the column inside the flag value.
std::vector<Rational> parse_rational_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);
std::vector<std::pair<double, double>> parse_seeds(const std::string& text);

// Runs one command; the JSON report (or SVG) goes to cfg.output, or to out when that is empty.
// Returns 0 on success, 1 when a certificate fails, 4 when a spot-check does not vanish.
// Library errors propagate; exit_code maps them.
int run(const RunConfig& cfg, std::ostream& out);

// 2 parse, 3 precondition, 4 numeric, 1 anything else.
int exit_code(const std::exception& e);

}  // namespace nilcyc
