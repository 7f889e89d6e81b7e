#include "machine.hpp"

namespace pakelab::proto::detail {

namespace {

// OPRF: client sends H(pw)^r, server returns (H(pw)^r)^k, client unblinds
// with r^-1. The randomized password key decrypts the envelope, which holds
// the client's long-term DH key, the server's public key, and optionally a
// confirmation tag. Key agreement is triple-DH over the ephemeral and
// long-term keys.

Digest triple_dh_key(const GroupElement& dh1, const GroupElement& dh2, const GroupElement& dh3,
                     const Bytes& client_eph, const Bytes& server_eph) {
    std::vector<Bytes> parts{dh1.encode(), dh2.encode(), dh3.encode(), client_eph, server_eph};
    return kdf("opq-3dh", parts);
}

Digest server_mac(const Digest& key) {
    return kdf("opq-smac", {std::span<const uint8_t>(key.bytes)});
}

Digest client_mac(const Digest& key) {
    return kdf("opq-cmac", {std::span<const uint8_t>(key.bytes)});
}

SymKey session_key_of(const Digest& key) {
    return kdf_to_key("opq-key", std::vector<Bytes>{Bytes(key.bytes.begin(), key.bytes.end())});
}

class OpaqueClient final : public ClientMachine {
public:
    OpaqueClient(const ClientCredential& cred, const GroupParams& group, Rng rng)
        : cred_(cred), group_(group), rng_(std::move(rng)) {}

    ProtocolMessage start() override {
        blinding_ = Scalar::random_unit(group_, rng_);
        GroupElement blinded = group_exp(opaque_password_point(group_, cred_.password), *blinding_);
        eph_ = Scalar::random(group_, rng_);
        GroupElement eph_pub = group_exp(GroupElement::generator(group_), *eph_);
        eph_bytes_ = eph_pub.encode();
        phase_ = "await-ke2";
        return {MsgKind::opq_ke1,
                OpaqueKe1Body{cred_.identity.name, blinded.encode(), eph_bytes_}.encode()};
    }

    StepOutput step(const ProtocolMessage& incoming) override {
        if (phase_ == "await-ke2" && incoming.kind == MsgKind::opq_ke2) return on_ke2(incoming);
        phase_ = "done";
        return reject_step(RejectReason::malformed);
    }

    std::string_view phase() const override { return phase_; }
    bool reached_key_derivation() const override { return derived_; }

private:
    StepOutput on_ke2(const ProtocolMessage& incoming) {
        auto body = OpaqueKe2Body::decode(incoming.body);
        GroupElement evaluated = GroupElement::decode(body.evaluated, group_);
        GroupElement server_eph = GroupElement::decode(body.server_eph, group_);

        GroupElement unblinded = group_exp(evaluated, blinding_->inverse(group_));
        SymKey rwd = opaque_rwd(unblinded, cred_.identity);
        Bytes pt = sym_decrypt(rwd, body.envelope);

        size_t scalar_w = group_.scalar_width();
        size_t elem_w = group_.element_width();
        size_t base = scalar_w + elem_w;
        phase_ = "done";
        if (cred_.confirm_tag) {
            // A structurally wrong envelope can only be a forgery; treated
            // exactly like a failed confirmation.
            if (pt.size() != base + 32)
                return reject_step(RejectReason::confirmation_mismatch);
        } else if (pt.size() != base && pt.size() != base + 32) {
            // Without a cached tag, trailing tag bytes are opaque and ignored.
            return reject_step(RejectReason::malformed);
        }
        auto view = std::span<const uint8_t>(pt);
        Scalar client_priv = Scalar::decode(view.subspan(0, scalar_w), group_);
        GroupElement server_pub = GroupElement::decode_total(view.subspan(scalar_w, elem_w), group_);
        if (cred_.confirm_tag) {
            Digest tag = Digest::from_bytes(view.subspan(scalar_w + elem_w, 32));
            if (tag != *cred_.confirm_tag)
                return reject_step(RejectReason::confirmation_mismatch);
        }

        derived_ = true;
        GroupElement dh1 = group_exp(server_eph, *eph_);
        GroupElement dh2 = group_exp(server_pub, *eph_);
        GroupElement dh3 = group_exp(server_eph, client_priv);
        Digest key = triple_dh_key(dh1, dh2, dh3, eph_bytes_, body.server_eph);

        if (body.server_mac != server_mac(key))
            return reject_step(RejectReason::verification_failed);
        return {ProtocolMessage{MsgKind::opq_ke3, OpaqueKe3Body{client_mac(key)}.encode()},
                Outcome::accept(SessionKey{session_key_of(key)})};
    }

    ClientCredential cred_;
    GroupParams group_;
    Rng rng_;
    std::optional<Scalar> blinding_, eph_;
    Bytes eph_bytes_;
    bool derived_ = false;
    std::string_view phase_ = "start";
};

class OpaqueServer final : public ServerMachine {
public:
    OpaqueServer(const AccountStore& store, Rng rng) : store_(store), rng_(std::move(rng)) {}

    StepOutput step(const ProtocolMessage& incoming) override {
        if (phase_ == "await-ke1" && incoming.kind == MsgKind::opq_ke1) return on_ke1(incoming);
        if (phase_ == "await-ke3" && incoming.kind == MsgKind::opq_ke3) return on_ke3(incoming);
        phase_ = "done";
        return reject_step(RejectReason::malformed);
    }

    std::string_view phase() const override { return phase_; }

private:
    StepOutput on_ke1(const ProtocolMessage& incoming) {
        auto body = OpaqueKe1Body::decode(incoming.body);
        auto record = store_.lookup(Identity(body.identity));
        if (!record) {
            phase_ = "done";
            return reject_step(RejectReason::verification_failed);
        }
        const GroupParams& group = store_.group();
        const auto& payload = std::get<OpaquePayload>(record->payload);

        GroupElement blinded = GroupElement::decode(body.blinded, group);
        GroupElement client_eph = GroupElement::decode(body.client_eph, group);
        GroupElement evaluated = group_exp(blinded, payload.oprf_key);

        Scalar eph = Scalar::random(group, rng_);
        GroupElement eph_pub = group_exp(GroupElement::generator(group), eph);
        Bytes eph_bytes = eph_pub.encode();

        GroupElement dh1 = group_exp(client_eph, eph);
        GroupElement dh2 = group_exp(client_eph, payload.server_priv);
        GroupElement dh3 = group_exp(payload.client_pub, eph);
        key_ = triple_dh_key(dh1, dh2, dh3, body.client_eph, eph_bytes);

        phase_ = "await-ke3";
        return {ProtocolMessage{MsgKind::opq_ke2,
                                OpaqueKe2Body{evaluated.encode(), payload.envelope, eph_bytes,
                                              server_mac(key_)}
                                    .encode()},
                std::nullopt};
    }

    StepOutput on_ke3(const ProtocolMessage& incoming) {
        auto body = OpaqueKe3Body::decode(incoming.body);
        phase_ = "done";
        if (body.client_mac != client_mac(key_))
            return reject_step(RejectReason::verification_failed);
        return {std::nullopt, Outcome::accept(SessionKey{session_key_of(key_)})};
    }

    const AccountStore& store_;
    Rng rng_;
    Digest key_{};
    std::string_view phase_ = "await-ke1";
};

}  // namespace

std::unique_ptr<ClientMachine> make_opaque_client(const ClientCredential& cred,
                                                  const GroupParams& group, Rng rng) {
    return std::make_unique<OpaqueClient>(cred, group, std::move(rng));
}

std::unique_ptr<ServerMachine> make_opaque_server(const AccountStore& store, Rng rng) {
    return std::make_unique<OpaqueServer>(store, std::move(rng));
}

}  // namespace pakelab::proto::detail
