#include "pakelab/proto/handshake.hpp"

#include "pakelab/errors.hpp"

namespace pakelab::proto {

HandshakeResult run_handshake(const ClientCredential& credential, const AccountStore& store,
                              Rng rng) {
    if (credential.protocol != store.protocol())
        throw UsageError("credential and store protocols disagree");

    ClientSession client(credential, store.group(), rng.split("client"));
    ServerSession server(store, rng.split("server"));

    std::vector<TranscriptEntry> transcript;
    uint32_t seq = 0;
    auto record = [&](const char* sender, const ProtocolMessage& msg) {
        transcript.push_back({seq++, sender, msg});
    };

    ProtocolMessage first = client.start();
    record("client", first);
    std::optional<ProtocolMessage> in_flight = first;
    bool to_server = true;

    for (int hops = 0; in_flight; hops++) {
        if (hops > 64) throw UsageError("handshake did not terminate");
        StepOutput out = to_server ? server.step(*in_flight) : client.step(*in_flight);
        in_flight.reset();
        if (out.reply) {
            record(to_server ? "server" : "client", *out.reply);
            in_flight = out.reply;
        }
        to_server = !to_server;
    }

    // One side aborting leaves the other mid-handshake; it observes the
    // connection closing.
    if (client.terminal() && !server.terminal()) {
        record("client", ProtocolMessage::close());
        server.step(ProtocolMessage::close());
    } else if (server.terminal() && !client.terminal()) {
        record("server", ProtocolMessage::close());
        client.step(ProtocolMessage::close());
    }

    if (!client.terminal() || !server.terminal())
        throw UsageError("handshake stalled without outcomes");
    return {*client.outcome(), *server.outcome(), std::move(transcript)};
}

nlohmann::json transcript_to_json(const std::vector<TranscriptEntry>& transcript) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& entry : transcript) {
        arr.push_back({{"seq", entry.seq},
                       {"sender", entry.sender},
                       {"kind", std::string(msg_kind_name(entry.msg.kind))},
                       {"body", to_hex(entry.msg.body)}});
    }
    return arr;
}

}  // namespace pakelab::proto
