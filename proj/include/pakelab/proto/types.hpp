#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>

#include "pakelab/cipher.hpp"
#include "pakelab/group.hpp"
#include "pakelab/rng.hpp"
#include "pakelab/signature.hpp"

namespace pakelab::proto {

enum class ProtocolId : uint8_t { eke, srp6a_nocert, srp6a_cert, opaque_lite };

std::string_view to_string(ProtocolId id);
ProtocolId protocol_from_string(std::string_view name);

struct Password {
    std::string text;

    explicit Password(std::string t);
    bool operator==(const Password&) const = default;
    Bytes bytes() const { return to_bytes(text); }
};

struct Identity {
    std::string name;

    explicit Identity(std::string n);
    bool operator==(const Identity&) const = default;
    auto operator<=>(const Identity&) const = default;
    Bytes bytes() const { return to_bytes(name); }
};

struct Salt {
    std::array<uint8_t, 16> bytes{};

    bool operator==(const Salt&) const = default;
    static Salt random(Rng& rng);
    Bytes vec() const { return Bytes(bytes.begin(), bytes.end()); }
    static Salt from_bytes(std::span<const uint8_t> b);
};

/// Server-side auth data, one variant per protocol.
struct EkePayload {
    Password password;
};

struct SrpPayload {
    Salt salt;
    GroupElement verifier;  // g^x, x = kdf_to_scalar("srp-x", [salt, identity, password])
};

struct OpaquePayload {
    Scalar oprf_key;
    Bytes envelope;
    GroupElement client_pub;
    Scalar server_priv;  // server's long-term DH keypair
    GroupElement server_pub;
};

struct AuthRecord {
    ProtocolId protocol;
    Identity identity;
    std::variant<EkePayload, SrpPayload, OpaquePayload> payload;
};

/// What the client walks away from registration with.
struct ClientCredential {
    ProtocolId protocol;
    Identity identity;
    Password password;
    /// Present iff the envelope confirmation secret was enabled at
    /// registration (opaque-lite only).
    std::optional<Digest> confirm_tag;
    /// Present iff registered for cert mode; the client pins the server's
    /// verifying key.
    std::optional<VerifyingKey> pinned_server_key;
};

struct SessionKey {
    SymKey key;

    bool operator==(const SessionKey&) const = default;
    Digest digest() const { return kdf("key-digest", {std::span<const uint8_t>(key.bytes)}); }
};

enum class RejectReason : uint8_t {
    verification_failed,
    malformed,
    signature_invalid,
    confirmation_mismatch,
};

std::string_view to_string(RejectReason r);

/// Terminal result of a handshake state machine.
class Outcome {
public:
    static Outcome accept(SessionKey key) { return Outcome(std::move(key)); }
    static Outcome reject(RejectReason reason) { return Outcome(reason); }

    bool accepted() const { return key_.has_value(); }
    const SessionKey& key() const;
    RejectReason reason() const;

    bool operator==(const Outcome&) const = default;

private:
    explicit Outcome(SessionKey key) : key_(std::move(key)) {}
    explicit Outcome(RejectReason reason) : reason_(reason) {}

    std::optional<SessionKey> key_;
    std::optional<RejectReason> reason_;
};

}  // namespace pakelab::proto
