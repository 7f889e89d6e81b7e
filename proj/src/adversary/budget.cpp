#include "pakelab/adversary/budget.hpp"

#include "pakelab/errors.hpp"
#include "pakelab/kdf.hpp"

namespace pakelab::adversary {

ClientKeyMode client_key_mode_from_string(std::string_view name) {
    if (name == "identity") return ClientKeyMode::identity;
    if (name == "endpoint") return ClientKeyMode::endpoint;
    if (name == "identity+endpoint") return ClientKeyMode::identity_endpoint;
    throw ConfigError("unknown budget key mode: " + std::string(name));
}

std::string_view to_string(ClientKeyMode m) {
    switch (m) {
        case ClientKeyMode::identity: return "identity";
        case ClientKeyMode::endpoint: return "endpoint";
        case ClientKeyMode::identity_endpoint: return "identity+endpoint";
    }
    return "unknown";
}

BudgetPolicy::BudgetPolicy(BudgetSpec spec, uint64_t seed) : spec_(spec), seed_(seed) {
    if (spec_.fixed_limit.has_value() == spec_.limit_range.has_value())
        throw ConfigError("budget needs exactly one of limit / limit_range");
    if (spec_.fixed_limit && *spec_.fixed_limit == 0)
        throw ConfigError("budget limit must be positive");
    if (spec_.limit_range &&
        (spec_.limit_range->first == 0 || spec_.limit_range->first > spec_.limit_range->second))
        throw ConfigError("budget limit_range must satisfy 1 <= lo <= hi");
}

std::string BudgetPolicy::client_key(const proto::Identity& identity,
                                     const std::string& endpoint) const {
    switch (spec_.key_mode) {
        case ClientKeyMode::identity: return identity.name;
        case ClientKeyMode::endpoint: return endpoint;
        case ClientKeyMode::identity_endpoint: return identity.name + "|" + endpoint;
    }
    throw UsageError("unreachable key mode");
}

uint32_t BudgetPolicy::limit_for(const std::string& key) const {
    if (spec_.fixed_limit) return *spec_.fixed_limit;
    auto [lo, hi] = *spec_.limit_range;
    Bytes seed = u64be(seed_);
    Bytes key_bytes = to_bytes(key);
    Digest d = kdf("budget-limit", {std::span<const uint8_t>(seed),
                                    std::span<const uint8_t>(key_bytes)});
    uint64_t v = 0;
    for (int i = 0; i < 8; i++) v = v << 8 | d.bytes[i];
    return lo + static_cast<uint32_t>(v % (hi - lo + 1));
}

uint64_t BudgetPolicy::period_index(uint64_t now) const {
    return spec_.reset_period == 0 ? 0 : now / spec_.reset_period;
}

bool BudgetPolicy::allow_trial(const std::string& key, uint64_t now) const {
    return trials_used(key, now) < limit_for(key);
}

void BudgetPolicy::note_trial(const std::string& key, uint64_t now) {
    Counter& c = counters_[key];
    uint64_t period = period_index(now);
    if (c.period != period) {
        c.period = period;
        c.used = 0;
    }
    c.used++;
}

uint64_t BudgetPolicy::trials_used(const std::string& key, uint64_t now) const {
    auto it = counters_.find(key);
    if (it == counters_.end()) return 0;
    return it->second.period == period_index(now) ? it->second.used : 0;
}

}  // namespace pakelab::adversary
