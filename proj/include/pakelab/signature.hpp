#pragma once

#include <array>
#include <compare>

#include "pakelab/bytes.hpp"
#include "pakelab/kdf.hpp"
#include "pakelab/rng.hpp"

namespace pakelab {

struct Signature {
    std::array<uint8_t, 32> bytes{};
    auto operator<=>(const Signature&) const = default;
};

/// Modeled signatures: a tag keyed by a shared secret that only the honest
/// server's code path ever holds. verify() succeeds exactly when the tag was
/// produced by the matching signing half over the identical message; the
/// simulator never routes a SigningKey to the adversary, which is what makes
/// forgery impossible in-model.
class SigningKey {
public:
    explicit SigningKey(Digest secret) : secret_(secret) {}
    const Digest& secret() const { return secret_; }

private:
    Digest secret_;
};

class VerifyingKey {
public:
    explicit VerifyingKey(Digest secret) : secret_(secret) {}
    const Digest& secret() const { return secret_; }
    bool operator==(const VerifyingKey& other) const { return secret_ == other.secret_; }

private:
    Digest secret_;
};

struct SigKeypair {
    SigningKey signing;
    VerifyingKey verifying;

    static SigKeypair generate(Rng& rng) {
        Digest secret = rng.digest();
        return SigKeypair{SigningKey(secret), VerifyingKey(secret)};
    }
};

Signature sign(const SigningKey& key, std::span<const uint8_t> message);
/// Returns false rather than erroring on any mismatch.
bool verify(const VerifyingKey& key, std::span<const uint8_t> message, const Signature& sig);

}  // namespace pakelab
