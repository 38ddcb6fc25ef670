#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "finfree/io.hpp"

namespace finfree {

class UnknownScenario : public std::invalid_argument {
public:
    explicit UnknownScenario(const std::string& name) : std::invalid_argument("unknown scenario '" + name + "'") {}
};

using ConfigValues = std::map<std::string, std::string>;

// Flat "key = value" text; '#' starts a comment; blank lines are skipped. ParseError on a line
// without '=' or a repeated key.
ConfigValues parse_config_text(const std::string& text);
ConfigValues read_config_file(const std::string& path);

struct ScenarioConfig {
    std::string scenario;
    ConfigValues values;  // every key of the scenario, defaults already merged in
    std::string out_dir;  // CSV artifacts are written here; empty disables them

    const std::string& get(const std::string& key) const;
    long get_int(const std::string& key) const;
    double get_double(const std::string& key) const;
    Rational get_rational(const std::string& key) const;
    std::vector<long> get_int_list(const std::string& key) const;
    std::vector<Rational> get_rational_list(const std::string& key) const;
};

const std::vector<std::string>& scenario_names();
// Defaults, including every threshold the scenario gates on. UnknownScenario for a bad name.
const ConfigValues& default_config(const std::string& scenario);
// Merges overrides into the defaults. ParseError for a key the scenario does not define, or for
// degrees that are not positive and strictly increasing.
ScenarioConfig make_config(const std::string& scenario, const ConfigValues& overrides = {},
                           const std::string& out_dir = "");

struct Gate {
    std::string name;
    bool pass = false;
    Json detail;  // measured values and thresholds
};

struct Verdict {
    std::string scenario;
    bool pass = false;  // every gate passed (and at least one gate exists unless the scenario has none)
    Json config;
    Json metrics;
    std::vector<Gate> gates;
    std::vector<std::string> artifacts;  // file names relative to out_dir
    double runtime_seconds = 0;          // wall time; not part of the JSON document
};

// Runs one scenario. Failures of a numeric routine inside a gate are reported as a failed gate
// with the error message, never thrown.
Verdict run_scenario(const ScenarioConfig& config);

// Deterministic document: fixed key order, floats rounded to 12 significant digits, no runtime.
Json to_json(const Verdict& v);

} // namespace finfree
