#include "pakelab/cipher.hpp"

namespace pakelab {

namespace {

void xor_keystream(const SymKey& key, std::span<const uint8_t> nonce,
                   std::span<const uint8_t> in, uint8_t* out) {
    for (size_t block = 0; block * 32 < in.size(); block++) {
        Bytes ctr = u64be(block);
        Digest ks = kdf("keystream", {std::span<const uint8_t>(key.bytes), nonce,
                                      std::span<const uint8_t>(ctr)});
        size_t off = block * 32;
        size_t n = std::min<size_t>(32, in.size() - off);
        for (size_t i = 0; i < n; i++) out[off + i] = in[off + i] ^ ks.bytes[i];
    }
}

}  // namespace

Bytes sym_encrypt(const SymKey& key, std::span<const uint8_t> plaintext, Rng& rng) {
    Bytes out(kCipherNonceLen + plaintext.size());
    rng.fill(std::span(out.data(), kCipherNonceLen));
    xor_keystream(key, std::span(out.data(), kCipherNonceLen), plaintext,
                  out.data() + kCipherNonceLen);
    return out;
}

Bytes sym_decrypt(const SymKey& key, std::span<const uint8_t> ciphertext) {
    if (ciphertext.size() <= kCipherNonceLen) return Bytes{};
    auto nonce = ciphertext.subspan(0, kCipherNonceLen);
    auto body = ciphertext.subspan(kCipherNonceLen);
    Bytes out(body.size());
    xor_keystream(key, nonce, body, out.data());
    return out;
}

}  // namespace pakelab
