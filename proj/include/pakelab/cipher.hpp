#pragma once

#include <array>
#include <compare>

#include "pakelab/bytes.hpp"
#include "pakelab/kdf.hpp"
#include "pakelab/rng.hpp"

namespace pakelab {

/// 32-byte symmetric key; any 32-byte value is valid.
struct SymKey {
    std::array<uint8_t, 32> bytes{};

    auto operator<=>(const SymKey&) const = default;
    static SymKey from_digest(const Digest& d) { return SymKey{d.bytes}; }
};

inline constexpr size_t kCipherNonceLen = 16;

/// Unauthenticated keystream cipher: a fresh nonce is prepended and the
/// plaintext XORed with a kdf-derived keystream. There is deliberately no
/// integrity tag: decrypting with the wrong key yields a same-length byte
/// string and no error, which the protocol layer relies on.
Bytes sym_encrypt(const SymKey& key, std::span<const uint8_t> plaintext, Rng& rng);

/// Total function; never fails. Ciphertexts shorter than the nonce decrypt
/// to the empty string.
Bytes sym_decrypt(const SymKey& key, std::span<const uint8_t> ciphertext);

inline SymKey kdf_to_key(std::string_view label, std::span<const Bytes> parts) {
    return SymKey::from_digest(kdf(label, parts));
}

}  // namespace pakelab
