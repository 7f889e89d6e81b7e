#include "pakelab/adversary/trial.hpp"

#include "pakelab/errors.hpp"

namespace pakelab::adversary {

std::string_view to_string(IncompleteReason r) {
    switch (r) {
        case IncompleteReason::signature_rejected: return "signature-rejected";
        case IncompleteReason::confirmation_rejected: return "confirmation-rejected";
        case IncompleteReason::locked_out: return "locked-out";
        case IncompleteReason::malformed: return "malformed";
    }
    return "unknown";
}

TrialResult TrialResult::confirmed(proto::Password password) {
    return TrialResult(Kind::confirmed, std::move(password), std::nullopt);
}

TrialResult TrialResult::refuted(proto::Password guess) {
    return TrialResult(Kind::refuted, std::move(guess), std::nullopt);
}

TrialResult TrialResult::incomplete(IncompleteReason reason) {
    return TrialResult(Kind::incomplete, std::nullopt, reason);
}

const proto::Password& TrialResult::password() const {
    if (!password_) throw UsageError("trial result carries no password");
    return *password_;
}

IncompleteReason TrialResult::incomplete_reason() const {
    if (!reason_) throw UsageError("trial result is not incomplete");
    return *reason_;
}

bool TrialResult::looks_refuted() const {
    return kind_ == Kind::refuted ||
           (kind_ == Kind::incomplete && *reason_ == IncompleteReason::confirmation_rejected);
}

std::string TrialResult::label() const {
    switch (kind_) {
        case Kind::confirmed: return "confirmed";
        case Kind::refuted: return "refuted";
        case Kind::incomplete: return "incomplete:" + std::string(to_string(*reason_));
    }
    return "unknown";
}

proto::AuthRecord forge_auth_data(proto::ProtocolId protocol, const GroupParams& group,
                                  const proto::Identity& identity, const proto::Password& guess,
                                  const proto::RegistrationOptions& deployment, Rng& rng) {
    std::optional<SigKeypair> own_keys;
    if (protocol == proto::ProtocolId::srp6a_cert) own_keys = SigKeypair::generate(rng);
    return proto::make_registration(protocol, group, identity, guess, deployment, rng, own_keys)
        .record;
}

ReverseEngagement::ReverseEngagement(proto::ProtocolId protocol, const GroupParams& group,
                                     const proto::Identity& identity, proto::Password guess,
                                     const proto::RegistrationOptions& deployment, Rng rng)
    : identity_(identity), guess_(std::move(guess)) {
    Rng forge_rng = rng.split("forge");
    store_ = std::make_unique<proto::AccountStore>(protocol, group, forge_rng);
    if (protocol == proto::ProtocolId::srp6a_cert) store_->ensure_server_keys(forge_rng);
    store_->register_account(identity_, guess_, deployment, forge_rng);
    session_.emplace(*store_, rng.split("session"));
}

proto::StepOutput ReverseEngagement::step(const proto::ProtocolMessage& incoming) {
    return session_->step(incoming);
}

const proto::AuthRecord& ReverseEngagement::forged_record() const {
    return store_->record(identity_);
}

TrialResult ReverseEngagement::conclude(const std::optional<proto::Outcome>& client_outcome,
                                        const proto::Password& true_password) const {
    if (client_outcome && client_outcome->accepted()) return TrialResult::confirmed(guess_);
    if (!client_outcome) return TrialResult::incomplete(IncompleteReason::malformed);
    switch (client_outcome->reason()) {
        case proto::RejectReason::signature_invalid:
            return TrialResult::incomplete(IncompleteReason::signature_rejected);
        case proto::RejectReason::confirmation_mismatch:
            // Only the simulator can tell a correct guess stopped by the
            // envelope secret from a plain wrong guess; the adversary sees
            // the same dropped connection either way.
            if (guess_ == true_password)
                return TrialResult::incomplete(IncompleteReason::confirmation_rejected);
            return TrialResult::refuted(guess_);
        case proto::RejectReason::verification_failed:
            return TrialResult::refuted(guess_);
        case proto::RejectReason::malformed:
            return TrialResult::incomplete(IncompleteReason::malformed);
    }
    throw UsageError("unreachable reject reason");
}

ReverseTrialRun reverse_trial(proto::ClientSession& client,
                              const proto::ProtocolMessage& intercepted_request,
                              const proto::Password& guess,
                              const proto::RegistrationOptions& deployment, Rng rng) {
    ReverseEngagement engagement(client.credential().protocol, client.group(),
                                 client.credential().identity, guess, deployment,
                                 std::move(rng));

    std::vector<proto::TranscriptEntry> transcript;
    uint32_t seq = 0;
    auto record = [&](const char* sender, const proto::ProtocolMessage& msg) {
        transcript.push_back({seq++, sender, msg});
    };

    record("client", intercepted_request);
    std::optional<proto::ProtocolMessage> in_flight = intercepted_request;
    bool to_adversary = true;
    for (int hops = 0; in_flight; hops++) {
        if (hops > 64) throw UsageError("reverse trial did not terminate");
        proto::StepOutput out =
            to_adversary ? engagement.step(*in_flight) : client.step(*in_flight);
        in_flight.reset();
        if (out.reply) {
            record(to_adversary ? "adversary" : "client", *out.reply);
            in_flight = out.reply;
        }
        to_adversary = !to_adversary;
    }
    if (client.terminal() && !engagement.terminal()) {
        record("client", proto::ProtocolMessage::close());
        engagement.step(proto::ProtocolMessage::close());
    } else if (engagement.terminal() && !client.terminal()) {
        record("adversary", proto::ProtocolMessage::close());
        client.step(proto::ProtocolMessage::close());
    }

    TrialResult result = engagement.conclude(client.outcome(), client.credential().password);
    return {std::move(result), std::move(transcript), client.outcome()};
}

}  // namespace pakelab::adversary
