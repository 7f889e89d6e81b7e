#pragma once

#include "pakelab/proto/session.hpp"

namespace pakelab::proto::detail {

class ClientMachine {
public:
    virtual ~ClientMachine() = default;
    virtual ProtocolMessage start() = 0;
    virtual StepOutput step(const ProtocolMessage& incoming) = 0;
    virtual std::string_view phase() const = 0;
    virtual bool reached_key_derivation() const = 0;
};

class ServerMachine {
public:
    virtual ~ServerMachine() = default;
    virtual StepOutput step(const ProtocolMessage& incoming) = 0;
    virtual std::string_view phase() const = 0;
};

std::unique_ptr<ClientMachine> make_eke_client(const ClientCredential&, const GroupParams&, Rng);
std::unique_ptr<ServerMachine> make_eke_server(const AccountStore&, Rng);
std::unique_ptr<ClientMachine> make_srp_client(const ClientCredential&, const GroupParams&, Rng,
                                               bool cert_mode);
std::unique_ptr<ServerMachine> make_srp_server(const AccountStore&, Rng, bool cert_mode);
std::unique_ptr<ClientMachine> make_opaque_client(const ClientCredential&, const GroupParams&, Rng);
std::unique_ptr<ServerMachine> make_opaque_server(const AccountStore&, Rng);

inline StepOutput reject_step(RejectReason reason) {
    return StepOutput{std::nullopt, Outcome::reject(reason)};
}

}  // namespace pakelab::proto::detail
