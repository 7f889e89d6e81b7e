#include "pakelab/signature.hpp"

namespace pakelab {

Signature sign(const SigningKey& key, std::span<const uint8_t> message) {
    Digest d = kdf("sig-tag", {std::span<const uint8_t>(key.secret().bytes), message});
    return Signature{d.bytes};
}

bool verify(const VerifyingKey& key, std::span<const uint8_t> message, const Signature& sig) {
    Digest d = kdf("sig-tag", {std::span<const uint8_t>(key.secret().bytes), message});
    return d.bytes == sig.bytes;
}

}  // namespace pakelab
