#pragma once

#include <json.hpp>

#include <map>
#include <optional>

#include "pakelab/proto/types.hpp"

namespace pakelab::proto {

struct RegistrationOptions {
    /// opaque-lite only: stash a confirmation tag inside the envelope and
    /// hand a copy to the client.
    bool envelope_secret = false;
};

struct Registration {
    ClientCredential credential;
    AuthRecord record;
};

/// One server's registered accounts for a single protocol deployment.
/// Also owns the knobs that shape server behavior: the cert-mode signing
/// keypair and the unknown-identity simulation flag.
class AccountStore {
public:
    AccountStore(ProtocolId protocol, GroupParams group, Rng& rng);

    ProtocolId protocol() const { return protocol_; }
    const GroupParams& group() const { return group_; }

    /// Registers a fresh account and returns the client's credential plus
    /// the stored record. Throws RegistrationError on duplicate identity.
    Registration register_account(const Identity& identity, const Password& password,
                                  const RegistrationOptions& options, Rng& rng);

    bool contains(const Identity& identity) const;
    const AuthRecord& record(const Identity& identity) const;
    size_t size() const { return accounts_.size(); }

    /// Generates the cert-mode signing keypair if not present. Freshly
    /// registered srp6a-cert credentials pin the verifying half.
    void ensure_server_keys(Rng& rng);
    const std::optional<SigKeypair>& server_keys() const { return server_keys_; }

    /// When set (the default), lookups of unknown identities fabricate a
    /// stable, plausible record instead of failing, so account enumeration
    /// is not observable from the handshake. Disable to expose the
    /// enumeration side channel in experiments.
    void set_simulate_unknown(bool on) { simulate_unknown_ = on; }
    bool simulate_unknown() const { return simulate_unknown_; }

    /// Shapes fabricated OPAQUE records: envelopes must have the same
    /// length the deployment's real envelopes have.
    void set_envelope_secret_policy(bool on) { envelope_secret_policy_ = on; }

    /// Returns the record for this identity, fabricating one if unknown and
    /// simulation is on; std::nullopt when unknown and simulation is off.
    std::optional<AuthRecord> lookup(const Identity& identity) const;

    nlohmann::json to_json() const;
    static AccountStore from_json(const nlohmann::json& j);

private:
    AccountStore(ProtocolId protocol, GroupParams group, Digest fabrication_secret);
    AuthRecord fabricate(const Identity& identity) const;

    ProtocolId protocol_;
    GroupParams group_;
    std::map<Identity, AuthRecord> accounts_;
    std::optional<SigKeypair> server_keys_;
    Digest fabrication_secret_;
    bool simulate_unknown_ = true;
    bool envelope_secret_policy_ = false;
};

/// Builds the auth data a registration would produce, without touching any
/// store. This is exactly what an honest server computes at registration,
/// and equally what anyone holding a candidate password can compute.
Registration make_registration(ProtocolId protocol, const GroupParams& group,
                               const Identity& identity, const Password& password,
                               const RegistrationOptions& options, Rng& rng,
                               const std::optional<SigKeypair>& server_keys);

/// x = kdf_to_scalar("srp-x", [salt, identity, password]); the verifier is g^x.
Scalar srp_password_exponent(const GroupParams& group, const Salt& salt,
                             const Identity& identity, const Password& password);

/// Hash-to-group for the OPRF input: H(pw) as a group element.
GroupElement opaque_password_point(const GroupParams& group, const Password& password);

/// Randomized password key derived from the unblinded OPRF output.
SymKey opaque_rwd(const GroupElement& unblinded, const Identity& identity);

}  // namespace pakelab::proto
