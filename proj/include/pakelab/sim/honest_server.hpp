#pragma once

#include "pakelab/adversary/trial.hpp"
#include "pakelab/proto/session.hpp"

namespace pakelab::sim {

struct DefenseConfig {
    /// Consecutive failures per account before a lockout; nullopt disables.
    std::optional<uint32_t> lockout_threshold;
    uint64_t lockout_duration = 100;
};

/// The legitimate server: account store plus the defenses and telemetry a
/// real deployment would run. Everything the server can possibly observe
/// flows through here; reverse-guessing traffic never does.
class HonestServer {
public:
    HonestServer(proto::AccountStore store, DefenseConfig defenses)
        : store_(std::move(store)), defenses_(defenses) {}

    const proto::AccountStore& store() const { return store_; }
    proto::AccountStore& store() { return store_; }

    proto::ServerSession open_session(Rng rng) const {
        return proto::ServerSession(store_, std::move(rng));
    }

    bool locked(const proto::Identity& identity, uint64_t now) const;
    /// Book a terminal authentication outcome. Returns the lock-until time
    /// when this failure tripped the lockout threshold.
    std::optional<uint64_t> note_outcome(const proto::Identity& identity, bool accepted,
                                         uint64_t now);
    /// A connection refused because the account was locked.
    void note_lockout_refusal() { telemetry_.lockout_refusals++; }

    struct Telemetry {
        uint64_t accepts = 0;
        uint64_t rejects = 0;
        uint64_t lockout_refusals = 0;
        uint64_t auth_events() const { return accepts + rejects; }
    };
    const Telemetry& telemetry() const { return telemetry_; }

private:
    struct AccountDefense {
        uint32_t consecutive_failures = 0;
        uint64_t locked_until = 0;
    };

    proto::AccountStore store_;
    DefenseConfig defenses_;
    Telemetry telemetry_;
    std::map<std::string, AccountDefense> defense_;
};

}  // namespace pakelab::sim

namespace pakelab::adversary {

struct StandardTrialRun {
    TrialResult result;
    std::optional<proto::Outcome> client_outcome;
    std::optional<proto::Outcome> server_outcome;
    std::vector<proto::TranscriptEntry> transcript;
};

/// The classical online attack: one full client handshake against the
/// honest server using the guess. Lands in the server's telemetry; a locked
/// account yields Incomplete(locked-out) without testing the guess.
StandardTrialRun standard_trial(sim::HonestServer& server, const proto::Identity& identity,
                                const proto::Password& guess, uint64_t now, Rng rng);

}  // namespace pakelab::adversary
