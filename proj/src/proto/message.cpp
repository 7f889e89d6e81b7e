#include "pakelab/proto/message.hpp"

#include <cstring>

namespace pakelab::proto {

std::string_view msg_kind_name(MsgKind kind) {
    switch (kind) {
        case MsgKind::eke_request: return "eke-request";
        case MsgKind::eke_response: return "eke-response";
        case MsgKind::eke_challenge_a: return "eke-challenge-a";
        case MsgKind::eke_challenge_pair: return "eke-challenge-pair";
        case MsgKind::eke_challenge_b: return "eke-challenge-b";
        case MsgKind::srp_hello: return "srp-hello";
        case MsgKind::srp_server_kx: return "srp-server-kx";
        case MsgKind::srp_client_finish: return "srp-client-finish";
        case MsgKind::srp_server_finish: return "srp-server-finish";
        case MsgKind::opq_ke1: return "opq-ke1";
        case MsgKind::opq_ke2: return "opq-ke2";
        case MsgKind::opq_ke3: return "opq-ke3";
        case MsgKind::session_close: return "close";
    }
    return "unknown";
}

namespace {

Digest read_digest(ByteReader& r) {
    return Digest::from_bytes(r.raw(32));
}

}  // namespace

Bytes EkeRequestBody::encode() const {
    ByteWriter w;
    w.str(identity);
    w.var(enc_client_pub);
    return w.take();
}

EkeRequestBody EkeRequestBody::decode(std::span<const uint8_t> body) {
    ByteReader r(body);
    EkeRequestBody out;
    out.identity = r.str();
    auto enc = r.var();
    out.enc_client_pub.assign(enc.begin(), enc.end());
    r.expect_done();
    return out;
}

Bytes EkeResponseBody::encode() const {
    ByteWriter w;
    w.var(enc_payload);
    return w.take();
}

EkeResponseBody EkeResponseBody::decode(std::span<const uint8_t> body) {
    ByteReader r(body);
    EkeResponseBody out;
    auto enc = r.var();
    out.enc_payload.assign(enc.begin(), enc.end());
    r.expect_done();
    return out;
}

Bytes EkeChallengeBody::encode() const {
    ByteWriter w;
    w.var(enc_challenge);
    return w.take();
}

EkeChallengeBody EkeChallengeBody::decode(std::span<const uint8_t> body) {
    ByteReader r(body);
    EkeChallengeBody out;
    auto enc = r.var();
    out.enc_challenge.assign(enc.begin(), enc.end());
    r.expect_done();
    return out;
}

Bytes SrpHelloBody::encode() const {
    ByteWriter w;
    w.str(identity);
    w.raw(client_nonce);
    return w.take();
}

SrpHelloBody SrpHelloBody::decode(std::span<const uint8_t> body) {
    ByteReader r(body);
    SrpHelloBody out;
    out.identity = r.str();
    auto n = r.raw(32);
    std::memcpy(out.client_nonce.data(), n.data(), 32);
    r.expect_done();
    return out;
}

Bytes SrpServerKxBody::signed_part() const {
    ByteWriter w;
    w.str(p_decimal);
    w.str(g_decimal);
    w.raw(salt.bytes);
    w.var(server_pub);
    return w.take();
}

Bytes SrpServerKxBody::encode() const {
    ByteWriter w;
    w.str(p_decimal);
    w.str(g_decimal);
    w.raw(salt.bytes);
    w.var(server_pub);
    w.u8(signature.has_value() ? 1 : 0);
    if (signature) w.raw(signature->bytes);
    return w.take();
}

SrpServerKxBody SrpServerKxBody::decode(std::span<const uint8_t> body) {
    ByteReader r(body);
    SrpServerKxBody out;
    out.p_decimal = r.str();
    out.g_decimal = r.str();
    out.salt = Salt::from_bytes(r.raw(16));
    auto b = r.var();
    out.server_pub.assign(b.begin(), b.end());
    if (r.u8() != 0) {
        Signature sig;
        auto s = r.raw(32);
        std::memcpy(sig.bytes.data(), s.data(), 32);
        out.signature = sig;
    }
    r.expect_done();
    return out;
}

Bytes SrpClientFinishBody::encode() const {
    ByteWriter w;
    w.var(client_pub);
    w.raw(proof.bytes);
    return w.take();
}

SrpClientFinishBody SrpClientFinishBody::decode(std::span<const uint8_t> body) {
    ByteReader r(body);
    SrpClientFinishBody out;
    auto a = r.var();
    out.client_pub.assign(a.begin(), a.end());
    out.proof = read_digest(r);
    r.expect_done();
    return out;
}

Bytes SrpServerFinishBody::encode() const {
    ByteWriter w;
    w.raw(proof.bytes);
    return w.take();
}

SrpServerFinishBody SrpServerFinishBody::decode(std::span<const uint8_t> body) {
    ByteReader r(body);
    SrpServerFinishBody out;
    out.proof = read_digest(r);
    r.expect_done();
    return out;
}

Bytes OpaqueKe1Body::encode() const {
    ByteWriter w;
    w.str(identity);
    w.var(blinded);
    w.var(client_eph);
    return w.take();
}

OpaqueKe1Body OpaqueKe1Body::decode(std::span<const uint8_t> body) {
    ByteReader r(body);
    OpaqueKe1Body out;
    out.identity = r.str();
    auto b = r.var();
    out.blinded.assign(b.begin(), b.end());
    auto e = r.var();
    out.client_eph.assign(e.begin(), e.end());
    r.expect_done();
    return out;
}

Bytes OpaqueKe2Body::encode() const {
    ByteWriter w;
    w.var(evaluated);
    w.var(envelope);
    w.var(server_eph);
    w.raw(server_mac.bytes);
    return w.take();
}

OpaqueKe2Body OpaqueKe2Body::decode(std::span<const uint8_t> body) {
    ByteReader r(body);
    OpaqueKe2Body out;
    auto z = r.var();
    out.evaluated.assign(z.begin(), z.end());
    auto env = r.var();
    out.envelope.assign(env.begin(), env.end());
    auto e = r.var();
    out.server_eph.assign(e.begin(), e.end());
    out.server_mac = read_digest(r);
    r.expect_done();
    return out;
}

Bytes OpaqueKe3Body::encode() const {
    ByteWriter w;
    w.raw(client_mac.bytes);
    return w.take();
}

OpaqueKe3Body OpaqueKe3Body::decode(std::span<const uint8_t> body) {
    ByteReader r(body);
    OpaqueKe3Body out;
    out.client_mac = read_digest(r);
    r.expect_done();
    return out;
}

}  // namespace pakelab::proto
