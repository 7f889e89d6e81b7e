#include "pakelab/sim/honest_server.hpp"

#include "pakelab/errors.hpp"

namespace pakelab::sim {

bool HonestServer::locked(const proto::Identity& identity, uint64_t now) const {
    auto it = defense_.find(identity.name);
    return it != defense_.end() && now < it->second.locked_until;
}

std::optional<uint64_t> HonestServer::note_outcome(const proto::Identity& identity, bool accepted,
                                                   uint64_t now) {
    if (accepted) {
        telemetry_.accepts++;
        defense_[identity.name].consecutive_failures = 0;
        return std::nullopt;
    }
    telemetry_.rejects++;
    if (!defenses_.lockout_threshold) return std::nullopt;
    AccountDefense& d = defense_[identity.name];
    if (now >= d.locked_until) {
        if (++d.consecutive_failures >= *defenses_.lockout_threshold) {
            d.consecutive_failures = 0;
            d.locked_until = now + defenses_.lockout_duration;
            return d.locked_until;
        }
    }
    return std::nullopt;
}

}  // namespace pakelab::sim

namespace pakelab::adversary {

StandardTrialRun standard_trial(sim::HonestServer& server, const proto::Identity& identity,
                                const proto::Password& guess, uint64_t now, Rng rng) {
    if (server.locked(identity, now)) {
        server.note_lockout_refusal();
        return {TrialResult::incomplete(IncompleteReason::locked_out), std::nullopt, std::nullopt,
                {}};
    }

    proto::ClientCredential cred{server.store().protocol(), identity, guess, std::nullopt,
                                 std::nullopt};
    if (cred.protocol == proto::ProtocolId::srp6a_cert) {
        // Verifying keys are public; an impersonating client knows them.
        if (!server.store().server_keys()) throw UsageError("cert store lacks server keys");
        cred.pinned_server_key = server.store().server_keys()->verifying;
    }

    proto::HandshakeResult hs = run_handshake(cred, server.store(), std::move(rng));
    server.note_outcome(identity, hs.server.accepted(), now);

    TrialResult result = hs.server.accepted() ? TrialResult::confirmed(guess)
                                              : TrialResult::refuted(guess);
    return {std::move(result), hs.client, hs.server, std::move(hs.transcript)};
}

}  // namespace pakelab::adversary
