#pragma once

#include <json.hpp>

#include "pakelab/adversary/budget.hpp"
#include "pakelab/adversary/guesser.hpp"
#include "pakelab/sim/honest_server.hpp"

namespace pakelab::sim {

enum class AttackMode : uint8_t { none, reverse, standard };

AttackMode attack_mode_from_string(std::string_view name);
std::string_view to_string(AttackMode m);

struct MitigationConfig {
    bool cert_mode = false;
    bool envelope_secret = false;
};

/// Password source: a ranked file, an inline list, or inline weighted pairs.
struct DictionarySpec {
    std::optional<std::string> file;
    std::vector<std::string> list;
    std::vector<std::pair<std::string, double>> weighted;

    bool empty() const { return !file && list.empty() && weighted.empty(); }
    adversary::Dictionary load() const;
    nlohmann::json to_json() const;
    static DictionarySpec from_json(const nlohmann::json& j);
};

struct PopulationConfig {
    uint32_t clients = 1;
    DictionarySpec passwords;
    /// Zipf exponent for rank-distributed draws from a ranked source.
    double zipf_exponent = 1.0;
    /// "zipf": i.i.d. rank-distributed draws; "roundrobin": client i takes
    /// entry i mod n, the explicit-assignment mode.
    std::string assignment = "zipf";
};

struct AdversaryConfig {
    AttackMode attack = AttackMode::none;
    adversary::Strategy strategy = adversary::Strategy::dictionary;
    DictionarySpec dictionary;
    adversary::BudgetSpec budget;
    /// After a confirmed reverse trial, truly verify the password with one
    /// visible login against the honest server.
    bool verify_online = false;
};

struct ClientBehavior {
    uint32_t max_retries = 2;
    double retry_probability = 0.9;
    uint64_t login_interval = 20;
};

struct ScenarioConfig {
    proto::ProtocolId protocol = proto::ProtocolId::eke;
    MitigationConfig mitigations;
    GroupParams group = GroupParams::modp2048();
    PopulationConfig population;
    bool shared_password = false;
    double interception = 0.0;
    AdversaryConfig adversary;
    ClientBehavior client_behavior;
    DefenseConfig defenses;
    uint64_t seed = 0;
    uint64_t horizon = 1000;
    bool simulate_unknown_accounts = true;

    static ScenarioConfig from_json(const nlohmann::json& j);
    static ScenarioConfig load_file(const std::string& path);
    nlohmann::json to_json() const;
    /// Everything except the seed; equal echoes mean comparable runs.
    nlohmann::json echo() const;
    std::string run_id() const;
    void validate() const;
};

}  // namespace pakelab::sim
