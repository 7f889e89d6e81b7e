#include "machine.hpp"

namespace pakelab::proto::detail {

namespace {

// RFC 5054 arithmetic: k = H(p, g), B = k*v + g^b, u = H(A, B),
// client S = (B - k*g^x)^(a + u*x), server S = (A * v^u)^b.

Scalar srp_k(const GroupParams& group) {
    std::vector<Bytes> parts{to_bytes(group.p_decimal()), to_bytes(group.g_decimal())};
    return kdf_to_scalar("srp-k", parts, group);
}

Scalar srp_u(const GroupParams& group, const Bytes& a_bytes, const Bytes& b_bytes) {
    std::vector<Bytes> parts{a_bytes, b_bytes};
    return kdf_to_scalar("srp-u", parts, group);
}

Digest srp_key_digest(const GroupParams& group, const Bigint& shared_secret) {
    std::vector<Bytes> parts{bigint_to_bytes(shared_secret, group.element_width())};
    return kdf("srp-key", parts);
}

Digest srp_m1(const Bytes& a_bytes, const Bytes& b_bytes, const Digest& key) {
    return kdf("srp-m1", {std::span<const uint8_t>(a_bytes), std::span<const uint8_t>(b_bytes),
                          std::span<const uint8_t>(key.bytes)});
}

Digest srp_m2(const Bytes& a_bytes, const Digest& m1, const Digest& key) {
    return kdf("srp-m2", {std::span<const uint8_t>(a_bytes), std::span<const uint8_t>(m1.bytes),
                          std::span<const uint8_t>(key.bytes)});
}

class SrpClient final : public ClientMachine {
public:
    SrpClient(const ClientCredential& cred, const GroupParams& group, Rng rng, bool cert_mode)
        : cred_(cred), group_(group), rng_(std::move(rng)), cert_mode_(cert_mode) {}

    ProtocolMessage start() override {
        SrpHelloBody hello{cred_.identity.name, {}};
        rng_.fill(hello.client_nonce);
        phase_ = "await-server-kx";
        return {MsgKind::srp_hello, hello.encode()};
    }

    StepOutput step(const ProtocolMessage& incoming) override {
        if (phase_ == "await-server-kx" && incoming.kind == MsgKind::srp_server_kx)
            return on_server_kx(incoming);
        if (phase_ == "await-server-finish" && incoming.kind == MsgKind::srp_server_finish)
            return on_server_finish(incoming);
        phase_ = "done";
        return reject_step(RejectReason::malformed);
    }

    std::string_view phase() const override { return phase_; }
    bool reached_key_derivation() const override { return derived_; }

private:
    StepOutput on_server_kx(const ProtocolMessage& incoming) {
        auto body = SrpServerKxBody::decode(incoming.body);
        if (cert_mode_) {
            // Server authentication comes first; nothing is derived from an
            // unsigned or mis-signed key exchange.
            if (!cred_.pinned_server_key) throw UsageError("cert mode without a pinned key");
            if (!body.signature ||
                !verify(*cred_.pinned_server_key, body.signed_part(), *body.signature)) {
                phase_ = "done";
                return reject_step(RejectReason::signature_invalid);
            }
        }
        if (body.p_decimal != group_.p_decimal() || body.g_decimal != group_.g_decimal()) {
            phase_ = "done";
            return reject_step(RejectReason::malformed);
        }
        GroupElement server_pub = GroupElement::decode(body.server_pub, group_);

        derived_ = true;
        const Bigint& p = group_.p();
        Scalar a = Scalar::random(group_, rng_);
        GroupElement client_pub = group_exp(GroupElement::generator(group_), a);
        Bytes a_bytes = client_pub.encode();
        b_bytes_ = body.server_pub;

        Scalar x = srp_password_exponent(group_, body.salt, cred_.identity, cred_.password);
        Scalar k = srp_k(group_);
        Scalar u = srp_u(group_, a_bytes, b_bytes_);

        // S = (B - k*g^x)^(a + u*x); with the right password B - k*v == g^b.
        Bigint gx = powm(group_.g(), x.value(), p);
        Bigint base = (server_pub.value() - k.value() * gx) % p;
        if (base < 0) base += p;
        Scalar exponent = a.add(u.mul(x, group_), group_);
        Bigint shared = powm(base, exponent.value(), p);

        key_ = srp_key_digest(group_, shared);
        m1_ = srp_m1(a_bytes, b_bytes_, key_);
        a_bytes_ = a_bytes;
        phase_ = "await-server-finish";
        return {ProtocolMessage{MsgKind::srp_client_finish,
                                SrpClientFinishBody{a_bytes, m1_}.encode()},
                std::nullopt};
    }

    StepOutput on_server_finish(const ProtocolMessage& incoming) {
        auto body = SrpServerFinishBody::decode(incoming.body);
        phase_ = "done";
        if (body.proof != srp_m2(a_bytes_, m1_, key_))
            return reject_step(RejectReason::verification_failed);
        return {std::nullopt, Outcome::accept(SessionKey{SymKey{key_.bytes}})};
    }

    ClientCredential cred_;
    GroupParams group_;
    Rng rng_;
    bool cert_mode_;
    Bytes a_bytes_, b_bytes_;
    Digest key_{}, m1_{};
    bool derived_ = false;
    std::string_view phase_ = "start";
};

class SrpServer final : public ServerMachine {
public:
    SrpServer(const AccountStore& store, Rng rng, bool cert_mode)
        : store_(store), rng_(std::move(rng)), cert_mode_(cert_mode) {}

    StepOutput step(const ProtocolMessage& incoming) override {
        if (phase_ == "await-hello" && incoming.kind == MsgKind::srp_hello)
            return on_hello(incoming);
        if (phase_ == "await-client-finish" && incoming.kind == MsgKind::srp_client_finish)
            return on_client_finish(incoming);
        phase_ = "done";
        return reject_step(RejectReason::malformed);
    }

    std::string_view phase() const override { return phase_; }

private:
    StepOutput on_hello(const ProtocolMessage& incoming) {
        auto hello = SrpHelloBody::decode(incoming.body);
        auto record = store_.lookup(Identity(hello.identity));
        if (!record) {
            phase_ = "done";
            return reject_step(RejectReason::verification_failed);
        }
        const GroupParams& group = store_.group();
        const Bigint& p = group.p();
        const auto& payload = std::get<SrpPayload>(record->payload);
        verifier_ = payload.verifier.value();

        Scalar k = srp_k(group);
        Bigint b_pub;
        do {
            b_ = Scalar::random(group, rng_);
            b_pub = (k.value() * verifier_ + powm(group.g(), b_->value(), p)) % p;
        } while (b_pub == 0);
        b_bytes_ = bigint_to_bytes(b_pub, group.element_width());

        SrpServerKxBody kx{group.p_decimal(), group.g_decimal(), payload.salt, b_bytes_,
                           std::nullopt};
        if (cert_mode_) {
            if (!store_.server_keys()) throw UsageError("cert mode store has no signing key");
            kx.signature = sign(store_.server_keys()->signing, kx.signed_part());
        }
        phase_ = "await-client-finish";
        return {ProtocolMessage{MsgKind::srp_server_kx, kx.encode()}, std::nullopt};
    }

    StepOutput on_client_finish(const ProtocolMessage& incoming) {
        auto body = SrpClientFinishBody::decode(incoming.body);
        const GroupParams& group = store_.group();
        const Bigint& p = group.p();
        GroupElement client_pub = GroupElement::decode(body.client_pub, group);

        Scalar u = srp_u(group, body.client_pub, b_bytes_);
        Bigint base = client_pub.value() * powm(verifier_, u.value(), p) % p;
        Bigint shared = powm(base, b_->value(), p);
        Digest key = srp_key_digest(group, shared);

        phase_ = "done";
        if (body.proof != srp_m1(body.client_pub, b_bytes_, key))
            return reject_step(RejectReason::verification_failed);
        Digest m2 = srp_m2(body.client_pub, body.proof, key);
        return {ProtocolMessage{MsgKind::srp_server_finish, SrpServerFinishBody{m2}.encode()},
                Outcome::accept(SessionKey{SymKey{key.bytes}})};
    }

    const AccountStore& store_;
    Rng rng_;
    bool cert_mode_;
    std::optional<Scalar> b_;
    Bigint verifier_;
    Bytes b_bytes_;
    std::string_view phase_ = "await-hello";
};

}  // namespace

std::unique_ptr<ClientMachine> make_srp_client(const ClientCredential& cred,
                                               const GroupParams& group, Rng rng,
                                               bool cert_mode) {
    return std::make_unique<SrpClient>(cred, group, std::move(rng), cert_mode);
}

std::unique_ptr<ServerMachine> make_srp_server(const AccountStore& store, Rng rng,
                                               bool cert_mode) {
    return std::make_unique<SrpServer>(store, std::move(rng), cert_mode);
}

}  // namespace pakelab::proto::detail
