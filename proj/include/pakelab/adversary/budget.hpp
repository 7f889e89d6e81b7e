#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "pakelab/proto/types.hpp"

namespace pakelab::adversary {

enum class ClientKeyMode : uint8_t { identity, endpoint, identity_endpoint };

ClientKeyMode client_key_mode_from_string(std::string_view name);
std::string_view to_string(ClientKeyMode m);

struct BudgetSpec {
    /// Exactly one of fixed_limit / limit_range is set.
    std::optional<uint32_t> fixed_limit = 10;
    std::optional<std::pair<uint32_t, uint32_t>> limit_range;
    /// 0 means the budget never resets.
    uint64_t reset_period = 0;
    ClientKeyMode key_mode = ClientKeyMode::identity;
};

/// Self-imposed throttle: at most `limit` trials per client key within one
/// reset period. Randomized limits are drawn deterministically per key from
/// the policy seed, so reruns see identical limits.
class BudgetPolicy {
public:
    BudgetPolicy(BudgetSpec spec, uint64_t seed);

    std::string client_key(const proto::Identity& identity, const std::string& endpoint) const;
    uint32_t limit_for(const std::string& key) const;
    bool allow_trial(const std::string& key, uint64_t now) const;
    void note_trial(const std::string& key, uint64_t now);
    uint64_t trials_used(const std::string& key, uint64_t now) const;

private:
    uint64_t period_index(uint64_t now) const;

    BudgetSpec spec_;
    uint64_t seed_;
    struct Counter {
        uint64_t period = 0;
        uint64_t used = 0;
    };
    std::map<std::string, Counter> counters_;
};

}  // namespace pakelab::adversary
