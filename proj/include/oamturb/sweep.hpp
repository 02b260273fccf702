#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "oamturb/linalg.hpp"

// Concurrence-curve sweeps and the parameter report behind the command line.
namespace oamturb::sweep {

enum class Scenario { Correlated, Uncorrelated, SpsCorrelated, SpsUncorrelated };

std::string_view to_string(Scenario scenario) noexcept;
// Throws ConfigError for an unknown name.
Scenario parse_scenario(std::string_view name);

struct WRange {
    double min = 0.0;
    double max = 2.0;
    int count = 41;
};

struct SweepConfig {
    int q = 1;
    Scenario scenario = Scenario::Correlated;
    std::vector<double> K_values{0.1, 1.0, 10.0, 100.0, 1e4};  // ignored for sps scenarios
    WRange W_range;
    std::string output_path;  // empty writes to stdout
};

// Throws ConfigError naming the offending field.
void validate(const SweepConfig& config);

// Applies one key=value setting. Keys: q, scenario, K, W, out.
// K is a comma-separated list and W is min:max:count.
void apply_setting(SweepConfig& config, std::string_view key, std::string_view value);

// Flat key=value text; blank lines and lines starting with '#' are skipped.
SweepConfig parse_config_text(std::string_view text, SweepConfig base = {});

struct SweepRow {
    Scenario scenario;
    int q;
    std::optional<double> K;  // empty for sps scenarios, written as "inf"
    double W;
    double t;
    double concurrence;
    bool clamped;
};

// One grid point of the numeric pipeline: t from the weak-scintillation
// substitution, the evolved thin-crystal kernel, projection onto the
// +-q qubit and its concurrence.
SweepRow pipeline_point(Medium medium, int q, double K, double W);

// Closed-form single-phase-screen row.
SweepRow sps_point(Medium medium, int q, double W);

// Grid points run in parallel; rows come back sorted by (K, W).
std::vector<SweepRow> run_sweep(const SweepConfig& config);

inline constexpr std::string_view kCsvHeader = "scenario,q,K,W,t,concurrence,clamped";

std::string format_row(const SweepRow& row);
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// True when the two scintillation estimates differ by more than 1% of the
// larger one.
bool rytov_mismatch(double direct, double from_wk);

// Physical inputs for the report, as (field, text) pairs exactly as the user
// gave them. Fields: cn2, lambda, waist, z and optionally L, no. Values are
// parsed here so errors name the field.
std::string report_params(const std::vector<std::pair<std::string, std::string>>& inputs);

}  // namespace oamturb::sweep
