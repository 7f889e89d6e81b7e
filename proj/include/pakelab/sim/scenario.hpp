#pragma once

#include "pakelab/sim/config.hpp"
#include "pakelab/sim/trace.hpp"

namespace pakelab::sim {

struct TrialCounts {
    uint64_t reverse = 0;
    uint64_t standard = 0;
    uint64_t confirmed = 0;
    uint64_t refuted = 0;
    uint64_t incomplete = 0;
};

/// Aggregated, deterministic result of one scenario run. Every counter is
/// recomputable from the trace; audit_summary checks exactly that.
struct RunReport {
    std::string run_id;
    uint64_t seed = 0;
    nlohmann::json config_echo;
    uint32_t population = 0;
    uint64_t simulated_duration = 0;
    std::vector<std::string> compromised;  // identity names, client order
    TrialCounts trials;
    uint64_t server_accepts = 0;
    uint64_t server_rejects = 0;
    uint64_t server_lockout_refusals = 0;
    uint64_t lockouts_engaged = 0;
    uint64_t client_accepts = 0;
    uint64_t client_failures = 0;
    uint64_t retries = 0;
    uint64_t sessions_started = 0;
    uint64_t sessions_dropped = 0;
    std::vector<uint64_t> per_client_trials;

    double compromise_rate() const {
        return population == 0 ? 0.0
                               : static_cast<double>(compromised.size()) / population;
    }

    nlohmann::json to_json() const;
    static RunReport from_json(const nlohmann::json& j);
    static std::string csv_header();
    std::string csv_row() const;
};

/// Executes the scenario's event loop to the horizon. Trace events stream
/// into `sink` when given; the report is a deterministic function of the
/// config (seed included).
RunReport run_scenario(const ScenarioConfig& config, TraceSink* sink = nullptr);

std::pair<RunReport, Trace> run_scenario_with_trace(const ScenarioConfig& config);

struct FieldStats {
    double mean = 0;
    double stddev = 0;
    double ci95_lo = 0;
    double ci95_hi = 0;
};

struct AggregateReport {
    size_t runs = 0;
    FieldStats compromise_rate;
    FieldStats compromised_count;
    FieldStats reverse_trials;
    FieldStats standard_trials;
    FieldStats confirmed_trials;
    FieldStats server_failures;
    FieldStats client_failures;

    nlohmann::json to_json() const;
};

/// Multi-seed statistics. All reports must come from the same config modulo
/// seed; mixing configs is a usage error.
AggregateReport aggregate(const std::vector<RunReport>& reports);

}  // namespace pakelab::sim
