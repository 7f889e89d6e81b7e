#pragma once

#include <string>

#include "pakelab/proto/types.hpp"

namespace pakelab::proto {

enum class MsgKind : uint8_t {
    eke_request = 1,
    eke_response,
    eke_challenge_a,
    eke_challenge_pair,
    eke_challenge_b,
    srp_hello = 16,
    srp_server_kx,
    srp_client_finish,
    srp_server_finish,
    opq_ke1 = 32,
    opq_ke2,
    opq_ke3,
    session_close = 255,
};

std::string_view msg_kind_name(MsgKind kind);

/// Tagged wire value. Bodies are flat encodings of the per-kind structs
/// below; decoding failures surface as malformed-message rejections.
struct ProtocolMessage {
    MsgKind kind;
    Bytes body;

    static ProtocolMessage close() { return {MsgKind::session_close, {}}; }
    bool operator==(const ProtocolMessage&) const = default;
};

struct EkeRequestBody {
    std::string identity;
    Bytes enc_client_pub;  // client public key encrypted under the password key

    Bytes encode() const;
    static EkeRequestBody decode(std::span<const uint8_t> body);
};

struct EkeResponseBody {
    Bytes enc_payload;  // (server eph pub || enc(session key)) under the password key

    Bytes encode() const;
    static EkeResponseBody decode(std::span<const uint8_t> body);
};

/// Shared by eke_challenge_a / eke_challenge_pair / eke_challenge_b.
struct EkeChallengeBody {
    Bytes enc_challenge;

    Bytes encode() const;
    static EkeChallengeBody decode(std::span<const uint8_t> body);
};

struct SrpHelloBody {
    std::string identity;
    std::array<uint8_t, 32> client_nonce{};

    Bytes encode() const;
    static SrpHelloBody decode(std::span<const uint8_t> body);
};

struct SrpServerKxBody {
    std::string p_decimal;
    std::string g_decimal;
    Salt salt;
    Bytes server_pub;  // B, fixed element width
    std::optional<Signature> signature;

    Bytes encode() const;
    static SrpServerKxBody decode(std::span<const uint8_t> body);
    /// The signed portion: everything except the signature itself.
    Bytes signed_part() const;
};

struct SrpClientFinishBody {
    Bytes client_pub;  // A
    Digest proof;      // M1

    Bytes encode() const;
    static SrpClientFinishBody decode(std::span<const uint8_t> body);
};

struct SrpServerFinishBody {
    Digest proof;  // M2

    Bytes encode() const;
    static SrpServerFinishBody decode(std::span<const uint8_t> body);
};

struct OpaqueKe1Body {
    std::string identity;
    Bytes blinded;     // H(pw)^r
    Bytes client_eph;  // g^x_c

    Bytes encode() const;
    static OpaqueKe1Body decode(std::span<const uint8_t> body);
};

struct OpaqueKe2Body {
    Bytes evaluated;  // blinded^oprf_key
    Bytes envelope;
    Bytes server_eph;  // g^x_s
    Digest server_mac;

    Bytes encode() const;
    static OpaqueKe2Body decode(std::span<const uint8_t> body);
};

struct OpaqueKe3Body {
    Digest client_mac;

    Bytes encode() const;
    static OpaqueKe3Body decode(std::span<const uint8_t> body);
};

}  // namespace pakelab::proto
