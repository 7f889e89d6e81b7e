#include "pakelab/sim/config.hpp"

#include <fstream>

#include "pakelab/errors.hpp"

namespace pakelab::sim {

AttackMode attack_mode_from_string(std::string_view name) {
    if (name == "none") return AttackMode::none;
    if (name == "reverse") return AttackMode::reverse;
    if (name == "standard") return AttackMode::standard;
    throw ConfigError("unknown attack mode: " + std::string(name));
}

std::string_view to_string(AttackMode m) {
    switch (m) {
        case AttackMode::none: return "none";
        case AttackMode::reverse: return "reverse";
        case AttackMode::standard: return "standard";
    }
    return "unknown";
}

adversary::Dictionary DictionarySpec::load() const {
    if (file) return adversary::Dictionary::from_file(*file);
    if (!weighted.empty()) return adversary::Dictionary::from_weighted(weighted);
    return adversary::Dictionary::from_list(list);
}

nlohmann::json DictionarySpec::to_json() const {
    if (file) return *file;
    if (!weighted.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [pw, w] : weighted) arr.push_back({pw, w});
        return arr;
    }
    return list;
}

DictionarySpec DictionarySpec::from_json(const nlohmann::json& j) {
    DictionarySpec spec;
    if (j.is_string()) {
        spec.file = j.get<std::string>();
    } else if (j.is_array()) {
        for (const auto& entry : j) {
            if (entry.is_string()) {
                spec.list.push_back(entry.get<std::string>());
            } else if (entry.is_array() && entry.size() == 2) {
                spec.weighted.emplace_back(entry[0].get<std::string>(),
                                           entry[1].get<double>());
            } else {
                throw ConfigError("dictionary entries must be strings or [password, weight]");
            }
        }
        if (!spec.list.empty() && !spec.weighted.empty())
            throw ConfigError("dictionary mixes weighted and unweighted entries");
    } else {
        throw ConfigError("dictionary must be a file path or an array");
    }
    return spec;
}

namespace {

GroupParams group_from_json(const nlohmann::json& j) {
    if (j.is_string()) return GroupParams::preset(j.get<std::string>());
    if (j.is_object())
        return GroupParams::from_decimal(j.at("p").get<std::string>(),
                                         j.at("g").get<std::string>());
    throw ConfigError("group must be a preset name or {p, g} decimal strings");
}

nlohmann::json group_to_json(const GroupParams& group) {
    if (group == GroupParams::toy23()) return "toy23";
    if (group == GroupParams::modp2048()) return "modp2048";
    return {{"p", group.p_decimal()}, {"g", group.g_decimal()}};
}

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    return j.at(key).get<T>();
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& j) {
    ScenarioConfig c;
    try {
        c.protocol = proto::protocol_from_string(j.at("protocol").get<std::string>());
        c.mitigations.cert_mode = c.protocol == proto::ProtocolId::srp6a_cert;
        if (j.contains("mitigations")) {
            const auto& m = j.at("mitigations");
            c.mitigations.cert_mode = get_or(m, "cert_mode", c.mitigations.cert_mode);
            c.mitigations.envelope_secret = get_or(m, "envelope_secret", false);
        }
        if (j.contains("group")) c.group = group_from_json(j.at("group"));

        const auto& pop = j.at("population");
        c.population.clients = pop.at("clients").get<uint32_t>();
        c.population.passwords = DictionarySpec::from_json(pop.at("passwords"));
        c.population.zipf_exponent = get_or(pop, "zipf_exponent", 1.0);
        c.population.assignment = get_or<std::string>(pop, "assignment", "zipf");

        c.shared_password = get_or(j, "shared_password", false);
        c.interception = get_or(j, "interception", 0.0);

        if (j.contains("adversary")) {
            const auto& a = j.at("adversary");
            c.adversary.attack = attack_mode_from_string(get_or<std::string>(a, "attack", "none"));
            c.adversary.strategy = adversary::strategy_from_string(
                get_or<std::string>(a, "strategy", "dictionary"));
            if (a.contains("dictionary"))
                c.adversary.dictionary = DictionarySpec::from_json(a.at("dictionary"));
            if (a.contains("budget")) {
                const auto& b = a.at("budget");
                adversary::BudgetSpec spec;
                spec.fixed_limit.reset();
                if (b.contains("limit")) spec.fixed_limit = b.at("limit").get<uint32_t>();
                if (b.contains("limit_range")) {
                    auto range = b.at("limit_range");
                    spec.limit_range = {range.at(0).get<uint32_t>(), range.at(1).get<uint32_t>()};
                }
                spec.reset_period = get_or<uint64_t>(b, "reset_period", 0);
                spec.key_mode = adversary::client_key_mode_from_string(
                    get_or<std::string>(b, "key", "identity"));
                c.adversary.budget = spec;
            }
            c.adversary.verify_online = get_or(a, "verify_online", false);
        }

        if (j.contains("client_behavior")) {
            const auto& b = j.at("client_behavior");
            c.client_behavior.max_retries = get_or<uint32_t>(b, "max_retries", 2);
            c.client_behavior.retry_probability = get_or(b, "retry_probability", 0.9);
            c.client_behavior.login_interval = get_or<uint64_t>(b, "login_interval", 20);
        }
        if (j.contains("server_defenses")) {
            const auto& d = j.at("server_defenses");
            if (d.contains("lockout_threshold") && !d.at("lockout_threshold").is_null())
                c.defenses.lockout_threshold = d.at("lockout_threshold").get<uint32_t>();
            c.defenses.lockout_duration = get_or<uint64_t>(d, "lockout_duration", 100);
        }
        c.seed = get_or<uint64_t>(j, "seed", 0);
        c.horizon = j.at("horizon").get<uint64_t>();
        c.simulate_unknown_accounts = get_or(j, "simulate_unknown_accounts", true);
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("bad scenario config: ") + ex.what());
    }
    c.validate();
    return c;
}

ScenarioConfig ScenarioConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        // Re-parse with exceptions to get the byte offset, then report a line.
        try {
            [[maybe_unused]] auto reparse = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& ex) {
            size_t line = 1;
            for (size_t i = 0; i < ex.byte && i < text.size(); i++)
                if (text[i] == '\n') line++;
            throw ConfigError(path + ":" + std::to_string(line) + ": " + ex.what());
        }
    }
    try {
        return from_json(j);
    } catch (const ConfigError& ex) {
        throw ConfigError(path + ": " + ex.what());
    }
}

nlohmann::json ScenarioConfig::to_json() const {
    nlohmann::json j;
    j["protocol"] = std::string(proto::to_string(protocol));
    j["mitigations"] = {{"cert_mode", mitigations.cert_mode},
                        {"envelope_secret", mitigations.envelope_secret}};
    j["group"] = group_to_json(group);
    j["population"] = {{"clients", population.clients},
                       {"passwords", population.passwords.to_json()},
                       {"zipf_exponent", population.zipf_exponent},
                       {"assignment", population.assignment}};
    j["shared_password"] = shared_password;
    j["interception"] = interception;
    nlohmann::json budget;
    if (adversary.budget.fixed_limit) budget["limit"] = *adversary.budget.fixed_limit;
    if (adversary.budget.limit_range)
        budget["limit_range"] = {adversary.budget.limit_range->first,
                                 adversary.budget.limit_range->second};
    budget["reset_period"] = adversary.budget.reset_period;
    budget["key"] = std::string(adversary::to_string(adversary.budget.key_mode));
    j["adversary"] = {{"attack", std::string(to_string(adversary.attack))},
                      {"strategy", std::string(adversary::to_string(adversary.strategy))},
                      {"dictionary", adversary.dictionary.to_json()},
                      {"budget", budget},
                      {"verify_online", adversary.verify_online}};
    j["client_behavior"] = {{"max_retries", client_behavior.max_retries},
                            {"retry_probability", client_behavior.retry_probability},
                            {"login_interval", client_behavior.login_interval}};
    nlohmann::json defenses_json;
    if (defenses.lockout_threshold)
        defenses_json["lockout_threshold"] = *defenses.lockout_threshold;
    else
        defenses_json["lockout_threshold"] = nullptr;
    defenses_json["lockout_duration"] = defenses.lockout_duration;
    j["server_defenses"] = defenses_json;
    j["seed"] = seed;
    j["horizon"] = horizon;
    j["simulate_unknown_accounts"] = simulate_unknown_accounts;
    return j;
}

nlohmann::json ScenarioConfig::echo() const {
    nlohmann::json j = to_json();
    j.erase("seed");
    return j;
}

std::string ScenarioConfig::run_id() const {
    Bytes canon = to_bytes(echo().dump());
    Bytes seed_bytes = u64be(seed);
    Digest d = kdf("run-id", {std::span<const uint8_t>(canon),
                              std::span<const uint8_t>(seed_bytes)});
    return to_hex(std::span(d.bytes.data(), 16));
}

void ScenarioConfig::validate() const {
    auto fail = [](const std::string& what) { throw ConfigError(what); };
    if (population.clients == 0) fail("population.clients must be positive");
    if (population.passwords.empty()) fail("population.passwords must be given");
    if (population.assignment != "zipf" && population.assignment != "roundrobin")
        fail("population.assignment must be 'zipf' or 'roundrobin'");
    if (population.zipf_exponent < 0) fail("population.zipf_exponent must be >= 0");
    if (interception < 0.0 || interception > 1.0) fail("interception must be in [0, 1]");
    if (client_behavior.retry_probability < 0.0 || client_behavior.retry_probability > 1.0)
        fail("client_behavior.retry_probability must be in [0, 1]");
    if (client_behavior.login_interval == 0) fail("client_behavior.login_interval must be >= 1");
    if (horizon == 0) fail("horizon must be >= 1");

    if (mitigations.cert_mode != (protocol == proto::ProtocolId::srp6a_cert))
        fail("cert_mode is implied by protocol srp6a-cert and only by it");
    if (mitigations.envelope_secret && protocol != proto::ProtocolId::opaque_lite)
        fail("envelope_secret requires protocol opaque-lite");

    if (adversary.attack == AttackMode::reverse) {
        if (interception <= 0.0) fail("a reverse adversary needs interception > 0");
    } else {
        if (interception > 0.0) fail("interception > 0 requires adversary.attack = reverse");
    }
    if (adversary.attack != AttackMode::none && adversary.dictionary.empty())
        fail("an active adversary needs a guess dictionary");
    // Constructing the policy revalidates the budget shape.
    adversary::BudgetPolicy(adversary.budget, 0);

    if (shared_password && population.assignment == "roundrobin" &&
        population.passwords.empty())
        fail("shared_password needs a password source");
}

}  // namespace pakelab::sim
