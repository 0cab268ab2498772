#pragma once

#include "nilcyc/centers.hpp"
#include "nilcyc/families.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nilcyc {

// Small TOML subset: [table], [[array-of-tables]], key = "string" | bare number, # comments.
struct ConfigEntry {
    std::string key, value;
    int line = 0, key_column = 0, value_column = 0;  // value_column points inside the quotes
};

struct ConfigSection {
    std::string name;
    bool array = false;
    int line = 0;
    std::vector<ConfigEntry> entries;
};

std::vector<ConfigSection> parse_config(const std::string& text);

// MPoly::parse with error positions translated to the entry's place in the file.
MPoly parse_entry_poly(const ConfigEntry& e);
Rational parse_entry_rational(const ConfigEntry& e);

// Either the Z2 cubic family ([z2cubic], optional [root]) or raw half fields ([upper], [lower], [params]).
struct SystemSpec {
    std::optional<ParamInstance> z2cubic;
    std::optional<SwitchingSystem> fields;     // as written, may use [params] symbols
    std::map<std::string, Rational> params;
    std::map<std::string, Rational> unfolding;  // keys from unfolding_keys()

    bool is_family() const { return z2cubic.has_value(); }
    // Concrete system: the family (rational, or rounded to 2^-bits when a root is present),
    // or the raw fields with [params] substituted.
    SwitchingSystem system(unsigned bits = 256) const;

    friend bool operator==(const SystemSpec& a, const SystemSpec& b);
};

SystemSpec parse_system_text(const std::string& text);
SystemSpec parse_system_file(const std::string& path);  // PreconditionError when the file cannot be read
std::string serialize_system(const SystemSpec& s);

// [[stage]] tables, each an ordered list of increments.
std::vector<std::vector<std::pair<std::string, Rational>>> parse_schedule_text(const std::string& text);
std::vector<std::vector<std::pair<std::string, Rational>>> parse_schedule_file(const std::string& path);

std::string read_text_file(const std::string& path);

}  // namespace nilcyc
