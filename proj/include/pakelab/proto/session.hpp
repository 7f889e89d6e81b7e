#pragma once

#include <memory>
#include <optional>

#include "pakelab/proto/message.hpp"
#include "pakelab/proto/store.hpp"

namespace pakelab::proto {

struct StepOutput {
    std::optional<ProtocolMessage> reply;
    std::optional<Outcome> outcome;
};

namespace detail {
class ClientMachine;
class ServerMachine;
}  // namespace detail

/// Client half of a handshake. Single-owner value advanced by explicit
/// steps; emits exactly one terminal Outcome. A session_close delivered
/// before the machine finishes is a failed authentication from the client's
/// point of view. Any out-of-order or undecodable message rejects as
/// malformed.
class ClientSession {
public:
    ClientSession(ClientCredential credential, GroupParams group, Rng rng);
    ~ClientSession();
    ClientSession(ClientSession&&) noexcept;
    ClientSession& operator=(ClientSession&&) noexcept;

    /// The protocol's initial request. Call exactly once, before step().
    ProtocolMessage start();
    StepOutput step(const ProtocolMessage& incoming);

    bool terminal() const { return outcome_.has_value(); }
    const std::optional<Outcome>& outcome() const { return outcome_; }
    std::string_view phase() const;
    /// True once the machine has started deriving key material; cert-mode
    /// rejections happen strictly before this.
    bool reached_key_derivation() const;

    const ClientCredential& credential() const { return credential_; }
    const GroupParams& group() const { return group_; }

private:
    ClientCredential credential_;
    GroupParams group_;
    std::unique_ptr<detail::ClientMachine> machine_;
    std::optional<Outcome> outcome_;
    bool started_ = false;
};

/// Server half; resolves identities against an AccountStore that must
/// outlive the session.
class ServerSession {
public:
    ServerSession(const AccountStore& store, Rng rng);
    ~ServerSession();
    ServerSession(ServerSession&&) noexcept;
    ServerSession& operator=(ServerSession&&) noexcept;

    StepOutput step(const ProtocolMessage& incoming);

    bool terminal() const { return outcome_.has_value(); }
    const std::optional<Outcome>& outcome() const { return outcome_; }
    std::string_view phase() const;

private:
    std::unique_ptr<detail::ServerMachine> machine_;
    std::optional<Outcome> outcome_;
};

}  // namespace pakelab::proto
