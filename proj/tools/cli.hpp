#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "leakynet/coupling.hpp"
#include "leakynet/experiments.hpp"

namespace leakynet::cli {

inline constexpr std::string_view experiments[] = {"simulate", "extinction", "occupancy",      "ladder",
                                                   "coupling", "aux-occupancy", "cn",          "oracle"};

/// Validation failure; the message names the offending key or flag.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string experiment = "extinction";
    int n = 2;
    LeakKind leak = LeakKind::reset;
    double base = std::numbers::e;
    std::optional<std::uint64_t> seed;
    std::uint64_t replicas = 1;
    std::string init;  // empty: s0 for occupancy, ladder and aux-occupancy, ladder otherwise
    std::optional<double> horizon;
    std::uint64_t jump_budget = default_jump_budget;
    bool allow_censoring = false;
    RateConvention convention = RateConvention::marginal_preserving;
    int cap = 20;
    double t = 1.0;
    double burn_in = 1.0;
    double run_time = 10.0;
    bool auxiliary = false;
    std::string format = "json";
    unsigned workers = 1;
    std::string out;
    std::string log;

    ModelSpec spec() const { return ModelSpec{n, leak, base}; }
    std::string effective_init() const;

    /// Throws ConfigError naming the first invalid key.
    void validate() const;
};

/// Reads a JSON config file. Unknown keys, wrong types and invalid values
/// are rejected with a ConfigError naming the key.
RunConfig load_config(const std::string& path);
RunConfig config_from_json_text(std::string_view text);

/// Canonical JSON text of every field that affects results (workers and the
/// output paths only affect scheduling and destination, so they are left
/// out). Embedded in every output.
std::string config_echo(const RunConfig& config);

struct CheckResult {
    bool pass = false;
    std::string detail;
};

/// Evaluates one expectation entry against a JSON output.
CheckResult check_expectation(std::string_view output_json, const std::string& expectations_path,
                              const std::string& criterion);

/// Runs the command line. Returns 0 on success, 1 on a validation or run
/// error (single-line diagnostic on err), 2 when --check finds a mismatch.
int parse_and_run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int parse_and_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace leakynet::cli
