#include "machine.hpp"

namespace pakelab::proto::detail {

namespace {

SymKey password_key(const Password& password) {
    std::vector<Bytes> parts{password.bytes()};
    return kdf_to_key("eke-pw", parts);
}

SymKey dh_key(const GroupElement& shared) {
    std::vector<Bytes> parts{shared.encode()};
    return kdf_to_key("eke-dh", parts);
}

// The request carries the client's ephemeral public key encrypted under the
// password key; the response carries a fresh session key, encrypted first
// for that public key and then again under the password key. Neither side
// can tell from the negotiation alone whether the other used the same
// password; that only surfaces in the challenge exchange.
class EkeClient final : public ClientMachine {
public:
    EkeClient(const ClientCredential& cred, const GroupParams& group, Rng rng)
        : cred_(cred), group_(group), rng_(std::move(rng)) {}

    ProtocolMessage start() override {
        eph_ = Scalar::random(group_, rng_);
        GroupElement pub = group_exp(GroupElement::generator(group_), *eph_);
        Bytes enc = sym_encrypt(password_key(cred_.password), pub.encode(), rng_);
        phase_ = "await-response";
        return {MsgKind::eke_request, EkeRequestBody{cred_.identity.name, enc}.encode()};
    }

    StepOutput step(const ProtocolMessage& incoming) override {
        if (phase_ == "await-response" && incoming.kind == MsgKind::eke_response)
            return on_response(incoming);
        if (phase_ == "await-challenge-pair" && incoming.kind == MsgKind::eke_challenge_pair)
            return on_challenge_pair(incoming);
        phase_ = "done";
        return reject_step(RejectReason::malformed);
    }

    std::string_view phase() const override { return phase_; }
    bool reached_key_derivation() const override { return derived_; }

private:
    StepOutput on_response(const ProtocolMessage& incoming) {
        auto body = EkeResponseBody::decode(incoming.body);
        Bytes payload = sym_decrypt(password_key(cred_.password), body.enc_payload);
        size_t elem_w = group_.element_width();
        // Payload: server ephemeral pub || inner ciphertext of the 32-byte key.
        if (payload.size() != elem_w + kCipherNonceLen + 32) {
            phase_ = "done";
            return reject_step(RejectReason::malformed);
        }
        derived_ = true;
        GroupElement server_pub =
            GroupElement::decode_total(std::span(payload).subspan(0, elem_w), group_);
        GroupElement shared = group_exp(server_pub, *eph_);
        Bytes key_bytes = sym_decrypt(dh_key(shared), std::span(payload).subspan(elem_w));
        std::copy(key_bytes.begin(), key_bytes.end(), session_key_.bytes.begin());

        rng_.fill(challenge_);
        Bytes ct = sym_encrypt(session_key_, challenge_, rng_);
        phase_ = "await-challenge-pair";
        return {ProtocolMessage{MsgKind::eke_challenge_a, EkeChallengeBody{ct}.encode()},
                std::nullopt};
    }

    StepOutput on_challenge_pair(const ProtocolMessage& incoming) {
        auto body = EkeChallengeBody::decode(incoming.body);
        Bytes pt = sym_decrypt(session_key_, body.enc_challenge);
        phase_ = "done";
        if (pt.size() != 64) return reject_step(RejectReason::malformed);
        if (!std::equal(challenge_.begin(), challenge_.end(), pt.begin()))
            return reject_step(RejectReason::verification_failed);
        Bytes their_challenge(pt.begin() + 32, pt.end());
        Bytes ct = sym_encrypt(session_key_, their_challenge, rng_);
        return {ProtocolMessage{MsgKind::eke_challenge_b, EkeChallengeBody{ct}.encode()},
                Outcome::accept(SessionKey{session_key_})};
    }

    ClientCredential cred_;
    GroupParams group_;
    Rng rng_;
    std::optional<Scalar> eph_;
    SymKey session_key_{};
    std::array<uint8_t, 32> challenge_{};
    bool derived_ = false;
    std::string_view phase_ = "start";
};

class EkeServer final : public ServerMachine {
public:
    EkeServer(const AccountStore& store, Rng rng) : store_(store), rng_(std::move(rng)) {}

    StepOutput step(const ProtocolMessage& incoming) override {
        if (phase_ == "await-request" && incoming.kind == MsgKind::eke_request)
            return on_request(incoming);
        if (phase_ == "await-challenge-a" && incoming.kind == MsgKind::eke_challenge_a)
            return on_challenge_a(incoming);
        if (phase_ == "await-challenge-b" && incoming.kind == MsgKind::eke_challenge_b)
            return on_challenge_b(incoming);
        phase_ = "done";
        return reject_step(RejectReason::malformed);
    }

    std::string_view phase() const override { return phase_; }

private:
    StepOutput on_request(const ProtocolMessage& incoming) {
        auto body = EkeRequestBody::decode(incoming.body);
        auto record = store_.lookup(Identity(body.identity));
        if (!record) {
            phase_ = "done";
            return reject_step(RejectReason::verification_failed);
        }
        const GroupParams& group = store_.group();
        SymKey pw_key = password_key(std::get<EkePayload>(record->payload).password);

        // The decryption is unverifiable: whatever bytes come out are used
        // as the client's public key.
        Bytes pub_bytes = sym_decrypt(pw_key, body.enc_client_pub);
        GroupElement client_pub = GroupElement::decode_total(pub_bytes, group);

        Scalar eph = Scalar::random(group, rng_);
        GroupElement server_pub = group_exp(GroupElement::generator(group), eph);
        GroupElement shared = group_exp(client_pub, eph);

        rng_.fill(session_key_.bytes);
        Bytes inner = sym_encrypt(dh_key(shared), session_key_.bytes, rng_);
        Bytes payload = server_pub.encode();
        payload.insert(payload.end(), inner.begin(), inner.end());
        Bytes enc = sym_encrypt(pw_key, payload, rng_);

        phase_ = "await-challenge-a";
        return {ProtocolMessage{MsgKind::eke_response, EkeResponseBody{enc}.encode()},
                std::nullopt};
    }

    StepOutput on_challenge_a(const ProtocolMessage& incoming) {
        auto body = EkeChallengeBody::decode(incoming.body);
        Bytes their = sym_decrypt(session_key_, body.enc_challenge);
        if (their.size() != 32) {
            phase_ = "done";
            return reject_step(RejectReason::malformed);
        }
        rng_.fill(challenge_);
        Bytes pair = their;
        pair.insert(pair.end(), challenge_.begin(), challenge_.end());
        Bytes ct = sym_encrypt(session_key_, pair, rng_);
        phase_ = "await-challenge-b";
        return {ProtocolMessage{MsgKind::eke_challenge_pair, EkeChallengeBody{ct}.encode()},
                std::nullopt};
    }

    StepOutput on_challenge_b(const ProtocolMessage& incoming) {
        auto body = EkeChallengeBody::decode(incoming.body);
        Bytes pt = sym_decrypt(session_key_, body.enc_challenge);
        phase_ = "done";
        if (pt.size() == 32 && std::equal(challenge_.begin(), challenge_.end(), pt.begin()))
            return {std::nullopt, Outcome::accept(SessionKey{session_key_})};
        return reject_step(RejectReason::verification_failed);
    }

    const AccountStore& store_;
    Rng rng_;
    SymKey session_key_{};
    std::array<uint8_t, 32> challenge_{};
    std::string_view phase_ = "await-request";
};

}  // namespace

std::unique_ptr<ClientMachine> make_eke_client(const ClientCredential& cred,
                                               const GroupParams& group, Rng rng) {
    return std::make_unique<EkeClient>(cred, group, std::move(rng));
}

std::unique_ptr<ServerMachine> make_eke_server(const AccountStore& store, Rng rng) {
    return std::make_unique<EkeServer>(store, std::move(rng));
}

}  // namespace pakelab::proto::detail
