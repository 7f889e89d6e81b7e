#pragma once

#include <json.hpp>

#include <vector>

#include "pakelab/proto/session.hpp"

namespace pakelab::proto {

struct TranscriptEntry {
    uint32_t seq;
    std::string sender;  // "client" | "server" | "adversary"
    ProtocolMessage msg;
};

struct HandshakeResult {
    Outcome client;
    Outcome server;
    std::vector<TranscriptEntry> transcript;
};

/// Loopback driver: runs both machines to their terminal outcomes, closing
/// the side left hanging when the other aborts. Returns the full transcript.
HandshakeResult run_handshake(const ClientCredential& credential, const AccountStore& store,
                              Rng rng);

/// JSON array of {seq, sender, kind, body} with hex bodies.
nlohmann::json transcript_to_json(const std::vector<TranscriptEntry>& transcript);

}  // namespace pakelab::proto
