#pragma once

#include <vector>

#include "pakelab/proto/handshake.hpp"

namespace pakelab::adversary {

enum class IncompleteReason : uint8_t {
    signature_rejected,
    confirmation_rejected,
    locked_out,
    malformed,
};

std::string_view to_string(IncompleteReason r);

/// Outcome of one guessing trial. Confirmed means the impersonated (or
/// impersonating) handshake fully accepted; Incomplete arises only from
/// mitigations, lockouts, or malformed flows and carries no password
/// information usable for that guess.
class TrialResult {
public:
    enum class Kind : uint8_t { confirmed, refuted, incomplete };

    static TrialResult confirmed(proto::Password password);
    static TrialResult refuted(proto::Password guess);
    static TrialResult incomplete(IncompleteReason reason);

    Kind kind() const { return kind_; }
    bool is_confirmed() const { return kind_ == Kind::confirmed; }
    const proto::Password& password() const;
    IncompleteReason incomplete_reason() const;

    /// What the adversary can actually tell from the wire: a failed
    /// confirmation check looks exactly like a wrong guess.
    bool looks_refuted() const;

    std::string label() const;

private:
    TrialResult(Kind kind, std::optional<proto::Password> password,
                std::optional<IncompleteReason> reason)
        : kind_(kind), password_(std::move(password)), reason_(reason) {}

    Kind kind_;
    std::optional<proto::Password> password_;
    std::optional<IncompleteReason> reason_;
};

/// Simulates the registration phase locally: an AuthRecord built from the
/// guess with adversary-chosen salts and keys. Structurally valid, but
/// generally different from what the honest server stores.
proto::AuthRecord forge_auth_data(proto::ProtocolId protocol, const GroupParams& group,
                                  const proto::Identity& identity, const proto::Password& guess,
                                  const proto::RegistrationOptions& deployment, Rng& rng);

/// A fake server built over forged auth data, stepped like any server
/// session. The scenario loop feeds it the live client's messages.
class ReverseEngagement {
public:
    ReverseEngagement(proto::ProtocolId protocol, const GroupParams& group,
                      const proto::Identity& identity, proto::Password guess,
                      const proto::RegistrationOptions& deployment, Rng rng);

    proto::StepOutput step(const proto::ProtocolMessage& incoming);
    bool terminal() const { return session_->terminal(); }
    const std::optional<proto::Outcome>& outcome() const { return session_->outcome(); }
    const proto::Password& guess() const { return guess_; }
    const proto::AuthRecord& forged_record() const;

    /// Ground-truth classification once the client side is terminal. The
    /// true password is the simulator's knowledge, not the adversary's; it
    /// only disambiguates the confirmation-rejected case for the trace.
    TrialResult conclude(const std::optional<proto::Outcome>& client_outcome,
                         const proto::Password& true_password) const;

private:
    std::unique_ptr<proto::AccountStore> store_;
    std::optional<proto::ServerSession> session_;
    proto::Identity identity_;
    proto::Password guess_;
};

struct ReverseTrialRun {
    TrialResult result;
    std::vector<proto::TranscriptEntry> transcript;
    std::optional<proto::Outcome> client_outcome;
};

/// Drives one reverse trial against a live client session whose initial
/// request was intercepted. The client must not have been stepped yet.
ReverseTrialRun reverse_trial(proto::ClientSession& client,
                              const proto::ProtocolMessage& intercepted_request,
                              const proto::Password& guess,
                              const proto::RegistrationOptions& deployment, Rng rng);

}  // namespace pakelab::adversary
