#include "pakelab/proto/store.hpp"

#include <cstring>

#include "pakelab/errors.hpp"

namespace pakelab::proto {

std::string_view to_string(ProtocolId id) {
    switch (id) {
        case ProtocolId::eke: return "eke";
        case ProtocolId::srp6a_nocert: return "srp6a-nocert";
        case ProtocolId::srp6a_cert: return "srp6a-cert";
        case ProtocolId::opaque_lite: return "opaque-lite";
    }
    return "unknown";
}

ProtocolId protocol_from_string(std::string_view name) {
    if (name == "eke") return ProtocolId::eke;
    if (name == "srp6a-nocert") return ProtocolId::srp6a_nocert;
    if (name == "srp6a-cert") return ProtocolId::srp6a_cert;
    if (name == "opaque-lite") return ProtocolId::opaque_lite;
    throw ConfigError("unknown protocol: " + std::string(name));
}

std::string_view to_string(RejectReason r) {
    switch (r) {
        case RejectReason::verification_failed: return "verification-failed";
        case RejectReason::malformed: return "malformed";
        case RejectReason::signature_invalid: return "signature-invalid";
        case RejectReason::confirmation_mismatch: return "confirmation-mismatch";
    }
    return "unknown";
}

Password::Password(std::string t) : text(std::move(t)) {
    if (text.empty()) throw UsageError("password must be nonempty");
}

Identity::Identity(std::string n) : name(std::move(n)) {
    if (name.empty()) throw UsageError("identity must be nonempty");
}

Salt Salt::random(Rng& rng) {
    Salt s;
    rng.fill(s.bytes);
    return s;
}

Salt Salt::from_bytes(std::span<const uint8_t> b) {
    if (b.size() != 16) throw ParseError("salt must be 16 bytes");
    Salt s;
    std::memcpy(s.bytes.data(), b.data(), 16);
    return s;
}

const SessionKey& Outcome::key() const {
    if (!key_) throw UsageError("outcome is not accepted");
    return *key_;
}

RejectReason Outcome::reason() const {
    if (!reason_) throw UsageError("outcome is not rejected");
    return *reason_;
}

namespace {

Bytes opaque_envelope_plaintext(const GroupParams& group, const Scalar& client_priv,
                                const GroupElement& server_pub,
                                const std::optional<Digest>& tag) {
    Bytes pt = client_priv.encode(group);
    Bytes pub = server_pub.encode();
    pt.insert(pt.end(), pub.begin(), pub.end());
    if (tag) pt.insert(pt.end(), tag->bytes.begin(), tag->bytes.end());
    return pt;
}

}  // namespace

Scalar srp_password_exponent(const GroupParams& group, const Salt& salt,
                             const Identity& identity, const Password& password) {
    std::vector<Bytes> parts{salt.vec(), identity.bytes(), password.bytes()};
    return kdf_to_scalar("srp-x", parts, group);
}

GroupElement opaque_password_point(const GroupParams& group, const Password& password) {
    std::vector<Bytes> parts{password.bytes()};
    Scalar h = kdf_to_scalar("opq-hpw", parts, group);
    return group_exp(GroupElement::generator(group), h);
}

SymKey opaque_rwd(const GroupElement& unblinded, const Identity& identity) {
    std::vector<Bytes> parts{unblinded.encode(), identity.bytes()};
    return kdf_to_key("opq-rwd", parts);
}

Registration make_registration(ProtocolId protocol, const GroupParams& group,
                               const Identity& identity, const Password& password,
                               const RegistrationOptions& options, Rng& rng,
                               const std::optional<SigKeypair>& server_keys) {
    if (options.envelope_secret && protocol != ProtocolId::opaque_lite)
        throw UsageError("envelope_secret applies to opaque-lite only");

    ClientCredential cred{protocol, identity, password, std::nullopt, std::nullopt};
    if (protocol == ProtocolId::srp6a_cert) {
        if (!server_keys) throw UsageError("srp6a-cert registration requires server keys");
        cred.pinned_server_key = server_keys->verifying;
    }

    switch (protocol) {
        case ProtocolId::eke:
            return {cred, AuthRecord{protocol, identity, EkePayload{password}}};
        case ProtocolId::srp6a_nocert:
        case ProtocolId::srp6a_cert: {
            Salt salt = Salt::random(rng);
            Scalar x = srp_password_exponent(group, salt, identity, password);
            GroupElement verifier = group_exp(GroupElement::generator(group), x);
            return {cred, AuthRecord{protocol, identity, SrpPayload{salt, verifier}}};
        }
        case ProtocolId::opaque_lite: {
            GroupElement g = GroupElement::generator(group);
            Scalar oprf_key = Scalar::random(group, rng);
            Scalar client_priv = Scalar::random(group, rng);
            GroupElement client_pub = group_exp(g, client_priv);
            Scalar server_priv = Scalar::random(group, rng);
            GroupElement server_pub = group_exp(g, server_priv);

            GroupElement unblinded = group_exp(opaque_password_point(group, password), oprf_key);
            SymKey rwd = opaque_rwd(unblinded, identity);

            std::optional<Digest> tag;
            if (options.envelope_secret) {
                tag = rng.digest();
                cred.confirm_tag = tag;
            }
            Bytes pt = opaque_envelope_plaintext(group, client_priv, server_pub, tag);
            Bytes envelope = sym_encrypt(rwd, pt, rng);
            return {cred, AuthRecord{protocol, identity,
                                     OpaquePayload{oprf_key, std::move(envelope), client_pub,
                                                   server_priv, server_pub}}};
        }
    }
    throw UsageError("unreachable protocol id");
}

AccountStore::AccountStore(ProtocolId protocol, GroupParams group, Rng& rng)
    : protocol_(protocol), group_(std::move(group)), fabrication_secret_(rng.digest()) {}

AccountStore::AccountStore(ProtocolId protocol, GroupParams group, Digest fabrication_secret)
    : protocol_(protocol), group_(std::move(group)), fabrication_secret_(fabrication_secret) {}

Registration AccountStore::register_account(const Identity& identity, const Password& password,
                                            const RegistrationOptions& options, Rng& rng) {
    if (accounts_.contains(identity))
        throw RegistrationError("identity already registered: " + identity.name);
    if (protocol_ == ProtocolId::srp6a_cert) ensure_server_keys(rng);
    if (options.envelope_secret) envelope_secret_policy_ = true;

    Registration reg =
        make_registration(protocol_, group_, identity, password, options, rng, server_keys_);
    accounts_.emplace(identity, reg.record);
    return reg;
}

bool AccountStore::contains(const Identity& identity) const {
    return accounts_.contains(identity);
}

const AuthRecord& AccountStore::record(const Identity& identity) const {
    auto it = accounts_.find(identity);
    if (it == accounts_.end()) throw UsageError("no such identity: " + identity.name);
    return it->second;
}

void AccountStore::ensure_server_keys(Rng& rng) {
    if (!server_keys_) server_keys_ = SigKeypair::generate(rng);
}

std::optional<AuthRecord> AccountStore::lookup(const Identity& identity) const {
    auto it = accounts_.find(identity);
    if (it != accounts_.end()) return it->second;
    if (!simulate_unknown_) return std::nullopt;
    return fabricate(identity);
}

AuthRecord AccountStore::fabricate(const Identity& identity) const {
    // Stable per identity: repeated probes see the same fake account.
    Rng rng = Rng::from_key(kdf("fabricate", {std::span<const uint8_t>(fabrication_secret_.bytes),
                                              std::span<const uint8_t>(identity.bytes())}));
    Password fake_password(to_hex(rng.bytes(12)));
    RegistrationOptions options{.envelope_secret = envelope_secret_policy_};
    return make_registration(protocol_, group_, identity, fake_password, options, rng,
                             server_keys_)
        .record;
}

namespace {

nlohmann::json payload_to_json(const GroupParams& group, const AuthRecord& record) {
    nlohmann::json j;
    if (const auto* eke = std::get_if<EkePayload>(&record.payload)) {
        j["password"] = eke->password.text;
    } else if (const auto* srp = std::get_if<SrpPayload>(&record.payload)) {
        j["salt"] = to_hex(srp->salt.bytes);
        j["verifier"] = srp->verifier.value().str();
    } else if (const auto* opq = std::get_if<OpaquePayload>(&record.payload)) {
        j["oprf_key"] = opq->oprf_key.value().str();
        j["envelope"] = to_hex(opq->envelope);
        j["client_pub"] = opq->client_pub.value().str();
        j["server_priv"] = opq->server_priv.value().str();
        j["server_pub"] = opq->server_pub.value().str();
    }
    (void)group;
    return j;
}

AuthRecord payload_from_json(ProtocolId protocol, const GroupParams& group,
                             const Identity& identity, const nlohmann::json& j) {
    switch (protocol) {
        case ProtocolId::eke:
            return {protocol, identity, EkePayload{Password(j.at("password").get<std::string>())}};
        case ProtocolId::srp6a_nocert:
        case ProtocolId::srp6a_cert: {
            Salt salt = Salt::from_bytes(from_hex(j.at("salt").get<std::string>()));
            GroupElement verifier(Bigint(j.at("verifier").get<std::string>()), group);
            return {protocol, identity, SrpPayload{salt, verifier}};
        }
        case ProtocolId::opaque_lite: {
            OpaquePayload p{Scalar(Bigint(j.at("oprf_key").get<std::string>()), group),
                            from_hex(j.at("envelope").get<std::string>()),
                            GroupElement(Bigint(j.at("client_pub").get<std::string>()), group),
                            Scalar(Bigint(j.at("server_priv").get<std::string>()), group),
                            GroupElement(Bigint(j.at("server_pub").get<std::string>()), group)};
            return {protocol, identity, std::move(p)};
        }
    }
    throw ConfigError("unreachable protocol id");
}

}  // namespace

nlohmann::json AccountStore::to_json() const {
    nlohmann::json j;
    j["protocol"] = std::string(to_string(protocol_));
    j["group"] = {{"p", group_.p_decimal()}, {"g", group_.g_decimal()}};
    j["fabrication_secret"] = to_hex(fabrication_secret_.bytes);
    j["simulate_unknown"] = simulate_unknown_;
    j["envelope_secret_policy"] = envelope_secret_policy_;
    if (server_keys_)
        j["server_key_secret"] = to_hex(server_keys_->signing.secret().bytes);
    nlohmann::json accounts = nlohmann::json::object();
    for (const auto& [identity, record] : accounts_)
        accounts[identity.name] = payload_to_json(group_, record);
    j["accounts"] = std::move(accounts);
    return j;
}

AccountStore AccountStore::from_json(const nlohmann::json& j) {
    ProtocolId protocol = protocol_from_string(j.at("protocol").get<std::string>());
    GroupParams group = GroupParams::from_decimal(j.at("group").at("p").get<std::string>(),
                                                  j.at("group").at("g").get<std::string>());
    Digest secret = Digest::from_bytes(from_hex(j.at("fabrication_secret").get<std::string>()));
    AccountStore store(protocol, group, secret);
    store.simulate_unknown_ = j.value("simulate_unknown", true);
    store.envelope_secret_policy_ = j.value("envelope_secret_policy", false);
    if (j.contains("server_key_secret")) {
        Digest key = Digest::from_bytes(from_hex(j.at("server_key_secret").get<std::string>()));
        store.server_keys_ = SigKeypair{SigningKey(key), VerifyingKey(key)};
    }
    for (const auto& [name, payload] : j.at("accounts").items()) {
        Identity identity(name);
        store.accounts_.emplace(identity,
                                payload_from_json(protocol, group, identity, payload));
    }
    return store;
}

}  // namespace pakelab::proto
