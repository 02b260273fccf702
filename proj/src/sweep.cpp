#include "oamturb/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include "oamturb/entangle.hpp"
#include "oamturb/errors.hpp"
#include "oamturb/evolve.hpp"
#include "oamturb/parallel.hpp"
#include "oamturb/params.hpp"
#include "oamturb/project.hpp"

namespace oamturb::sweep {

namespace {

// Results do not depend on the pump waist; one is as good as any.
constexpr double kPumpWaist = 1.0;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view field, std::string_view text) {
    text = trim(text);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
        throw ConfigError(std::string(field) + ": cannot parse '" + std::string(text) + "' as a number");
    }
    return value;
}

int parse_int(std::string_view field, std::string_view text) {
    text = trim(text);
    int value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
        throw ConfigError(std::string(field) + ": cannot parse '" + std::string(text) + "' as an integer");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.11e", value);
    return buf;
}

bool is_sps(Scenario s) { return s == Scenario::SpsCorrelated || s == Scenario::SpsUncorrelated; }

Medium medium_of(Scenario s) {
    return s == Scenario::Correlated || s == Scenario::SpsCorrelated ? Medium::Correlated
                                                                      : Medium::Uncorrelated;
}

Scenario scenario_of(Medium medium, bool sps) {
    if (medium == Medium::Correlated) return sps ? Scenario::SpsCorrelated : Scenario::Correlated;
    return sps ? Scenario::SpsUncorrelated : Scenario::Uncorrelated;
}

}  // namespace

std::string_view to_string(Scenario scenario) noexcept {
    switch (scenario) {
        case Scenario::Correlated: return "correlated";
        case Scenario::Uncorrelated: return "uncorrelated";
        case Scenario::SpsCorrelated: return "sps-correlated";
        case Scenario::SpsUncorrelated: return "sps-uncorrelated";
    }
    return "unknown";
}

Scenario parse_scenario(std::string_view name) {
    name = trim(name);
    for (auto s : {Scenario::Correlated, Scenario::Uncorrelated, Scenario::SpsCorrelated,
                   Scenario::SpsUncorrelated}) {
        if (name == to_string(s)) return s;
    }
    throw ConfigError("scenario: unknown value '" + std::string(name) + "'");
}

void validate(const SweepConfig& config) {
    if (config.q < 1 || config.q > 3) throw ConfigError("q: must be 1, 2 or 3");
    if (!(config.W_range.min >= 0.0) || !std::isfinite(config.W_range.max) ||
        config.W_range.max < config.W_range.min) {
        throw ConfigError("W: need 0 <= min <= max");
    }
    if (config.W_range.count < 2) throw ConfigError("W: count must be at least 2");
    if (!is_sps(config.scenario)) {
        if (config.K_values.empty()) throw ConfigError("K: at least one value required");
        for (double K : config.K_values) {
            if (!(K > 0.0) || !std::isfinite(K)) throw ConfigError("K: values must be positive and finite");
        }
    }
}

void apply_setting(SweepConfig& config, std::string_view key, std::string_view value) {
    key = trim(key);
    value = trim(value);
    if (key == "q") {
        config.q = parse_int("q", value);
    } else if (key == "scenario") {
        config.scenario = parse_scenario(value);
    } else if (key == "K") {
        config.K_values.clear();
        for (auto part : split(value, ',')) config.K_values.push_back(parse_double("K", part));
    } else if (key == "W") {
        const auto parts = split(value, ':');
        if (parts.size() != 3) throw ConfigError("W: expected min:max:count");
        config.W_range = {parse_double("W", parts[0]), parse_double("W", parts[1]),
                          parse_int("W", parts[2])};
    } else if (key == "out") {
        config.output_path = std::string(value);
    } else {
        throw ConfigError("unknown configuration key '" + std::string(key) + "'");
    }
}

SweepConfig parse_config_text(std::string_view text, SweepConfig base) {
    int line_number = 0;
    for (auto line : split(text, '\n')) {
        ++line_number;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_number) + ": expected key=value");
        }
        apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
    }
    return base;
}

SweepRow pipeline_point(Medium medium, int q, double K, double W) {
    const double t = W == 0.0 ? 0.0 : params::weak_scint_t(W, K);
    const auto kernel = evolve::evolve_spdc(medium, K, t, kPumpWaist);
    const auto state = project::project_qubit(kernel, q, t);
    const auto c = entangle::concurrence(state);
    return {scenario_of(medium, false), q, K, W, t, c.value, c.clamped};
}

SweepRow sps_point(Medium medium, int q, double W) {
    const double value = entangle::sps_concurrence(q, entangle::chi(W, medium));
    return {scenario_of(medium, true), q, std::nullopt, W, 0.0, value, value == 0.0};
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
    validate(config);
    const auto& range = config.W_range;
    std::vector<double> Ws(range.count);
    for (int i = 0; i < range.count; ++i) {
        Ws[i] = range.min + (range.max - range.min) * i / (range.count - 1);
    }
    std::vector<double> Ks = config.K_values;
    std::sort(Ks.begin(), Ks.end());
    Ks.erase(std::unique(Ks.begin(), Ks.end()), Ks.end());
    const Medium medium = medium_of(config.scenario);

    if (is_sps(config.scenario)) {
        std::vector<SweepRow> rows;
        for (double W : Ws) rows.push_back(sps_point(medium, config.q, W));
        return rows;
    }
    std::vector<SweepRow> rows(Ks.size() * Ws.size());
    parallel_for(rows.size(), [&](std::size_t i) {
        rows[i] = pipeline_point(medium, config.q, Ks[i / Ws.size()], Ws[i % Ws.size()]);
    });
    return rows;
}

std::string format_row(const SweepRow& row) {
    std::string line(to_string(row.scenario));
    line += ',' + std::to_string(row.q);
    line += ',' + (row.K ? format_double(*row.K) : std::string("inf"));
    line += ',' + format_double(row.W);
    line += ',' + format_double(row.t);
    line += ',' + format_double(row.concurrence);
    line += row.clamped ? ",1" : ",0";
    return line;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << kCsvHeader << '\n';
    for (const auto& row : rows) out << format_row(row) << '\n';
}

bool rytov_mismatch(double direct, double from_wk) {
    const double scale = std::max(std::abs(direct), std::abs(from_wk));
    return scale > 0.0 && std::abs(direct - from_wk) > 0.01 * scale;
}

std::string report_params(const std::vector<std::pair<std::string, std::string>>& inputs) {
    std::map<std::string, double> values;
    for (const auto& [field, text] : inputs) {
        if (field != "cn2" && field != "lambda" && field != "waist" && field != "z" && field != "L" &&
            field != "no") {
            throw ConfigError("unknown parameter field '" + field + "'");
        }
        values[field] = parse_double(field, text);
    }
    for (const char* field : {"cn2", "lambda", "waist", "z"}) {
        if (!values.count(field)) throw ConfigError(std::string(field) + ": required");
    }
    const auto optional_value = [&](const char* field) -> std::optional<double> {
        const auto it = values.find(field);
        return it == values.end() ? std::nullopt : std::optional<double>(it->second);
    };
    const params::TurbulenceScales scales(values["cn2"], values["lambda"], values["waist"], values["z"],
                                          optional_value("L"), optional_value("no"));

    std::ostringstream out;
    for (const auto& [field, text] : inputs) out << "input " << field << " = " << text << '\n';
    const auto line = [&](const char* name, double value, const char* unit) {
        out << name << " = " << format_double(value) << (unit[0] ? " " : "") << unit << '\n';
    };
    line("k", scales.wavenumber(), "1/m");
    line("r0", scales.fried_parameter(), "m");
    line("W", scales.W(), "");
    line("K", scales.K(), "");
    line("t", scales.t(), "");
    const double direct = scales.rytov();
    const double from_wk = scales.rytov_wk();
    line("rytov_direct", direct, "");
    line("rytov_WK", from_wk, "");
    const double scale = std::max(std::abs(direct), std::abs(from_wk));
    const double mismatch = scale > 0.0 ? std::abs(direct - from_wk) / scale : 0.0;
    out << "rytov_consistency = " << (rytov_mismatch(direct, from_wk) ? "MISMATCH" : "ok") << " (relative difference "
        << format_double(mismatch) << ")\n";
    if (const auto beta = scales.beta()) {
        line("beta", *beta, "");
    } else {
        out << "beta = n/a (needs L and no)\n";
    }
    line("zeta", scales.zeta(), "1/m");
    return out.str();
}

}  // namespace oamturb::sweep
