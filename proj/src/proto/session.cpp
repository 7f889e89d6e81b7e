#include "pakelab/proto/session.hpp"

#include "machine.hpp"
#include "pakelab/errors.hpp"

namespace pakelab::proto {

namespace {

std::unique_ptr<detail::ClientMachine> make_client(const ClientCredential& cred,
                                                   const GroupParams& group, Rng rng) {
    switch (cred.protocol) {
        case ProtocolId::eke:
            return detail::make_eke_client(cred, group, std::move(rng));
        case ProtocolId::srp6a_nocert:
            return detail::make_srp_client(cred, group, std::move(rng), false);
        case ProtocolId::srp6a_cert:
            if (!cred.pinned_server_key)
                throw UsageError("srp6a-cert credential lacks a pinned server key");
            return detail::make_srp_client(cred, group, std::move(rng), true);
        case ProtocolId::opaque_lite:
            return detail::make_opaque_client(cred, group, std::move(rng));
    }
    throw UsageError("unreachable protocol id");
}

std::unique_ptr<detail::ServerMachine> make_server(const AccountStore& store, Rng rng) {
    switch (store.protocol()) {
        case ProtocolId::eke:
            return detail::make_eke_server(store, std::move(rng));
        case ProtocolId::srp6a_nocert:
            return detail::make_srp_server(store, std::move(rng), false);
        case ProtocolId::srp6a_cert:
            return detail::make_srp_server(store, std::move(rng), true);
        case ProtocolId::opaque_lite:
            return detail::make_opaque_server(store, std::move(rng));
    }
    throw UsageError("unreachable protocol id");
}

}  // namespace

ClientSession::ClientSession(ClientCredential credential, GroupParams group, Rng rng)
    : credential_(std::move(credential)),
      group_(std::move(group)),
      machine_(make_client(credential_, group_, std::move(rng))) {}

ClientSession::~ClientSession() = default;
ClientSession::ClientSession(ClientSession&&) noexcept = default;
ClientSession& ClientSession::operator=(ClientSession&&) noexcept = default;

ProtocolMessage ClientSession::start() {
    if (started_) throw UsageError("client session already started");
    started_ = true;
    return machine_->start();
}

StepOutput ClientSession::step(const ProtocolMessage& incoming) {
    if (!started_) throw UsageError("client session not started");
    if (terminal()) throw UsageError("client session already terminal");
    StepOutput out;
    if (incoming.kind == MsgKind::session_close) {
        // The peer went away mid-handshake; from the client's seat this is a
        // failed authentication attempt.
        out.outcome = Outcome::reject(RejectReason::verification_failed);
    } else {
        try {
            out = machine_->step(incoming);
        } catch (const ParseError&) {
            out = StepOutput{std::nullopt, Outcome::reject(RejectReason::malformed)};
        }
    }
    if (out.outcome) outcome_ = out.outcome;
    return out;
}

std::string_view ClientSession::phase() const {
    return terminal() ? std::string_view("done") : machine_->phase();
}

bool ClientSession::reached_key_derivation() const {
    return machine_->reached_key_derivation();
}

ServerSession::ServerSession(const AccountStore& store, Rng rng)
    : machine_(make_server(store, std::move(rng))) {}

ServerSession::~ServerSession() = default;
ServerSession::ServerSession(ServerSession&&) noexcept = default;
ServerSession& ServerSession::operator=(ServerSession&&) noexcept = default;

StepOutput ServerSession::step(const ProtocolMessage& incoming) {
    if (terminal()) throw UsageError("server session already terminal");
    StepOutput out;
    if (incoming.kind == MsgKind::session_close) {
        out.outcome = Outcome::reject(RejectReason::verification_failed);
    } else {
        try {
            out = machine_->step(incoming);
        } catch (const ParseError&) {
            out = StepOutput{std::nullopt, Outcome::reject(RejectReason::malformed)};
        }
    }
    if (out.outcome) outcome_ = out.outcome;
    return out;
}

std::string_view ServerSession::phase() const {
    return terminal() ? std::string_view("done") : machine_->phase();
}

}  // namespace pakelab::proto
