#include "pakelab/kdf.hpp"

#include <openssl/evp.h>

#include <cstring>

#include "pakelab/errors.hpp"

namespace pakelab {

namespace {

struct Sha256Ctx {
    EVP_MD_CTX* ctx;
    const EVP_MD* md;
    Sha256Ctx() : ctx(EVP_MD_CTX_new()), md(EVP_sha256()) {}
    ~Sha256Ctx() { EVP_MD_CTX_free(ctx); }
};

class Hasher {
public:
    Hasher() {
        thread_local Sha256Ctx shared;
        ctx_ = shared.ctx;
        if (EVP_DigestInit_ex(ctx_, shared.md, nullptr) != 1)
            throw std::runtime_error("sha256 init failed");
    }
    void update(std::span<const uint8_t> data) {
        EVP_DigestUpdate(ctx_, data.data(), data.size());
    }
    void update_u64(uint64_t v) {
        uint8_t buf[8];
        for (int i = 7; i >= 0; i--) { buf[i] = static_cast<uint8_t>(v); v >>= 8; }
        EVP_DigestUpdate(ctx_, buf, 8);
    }
    Digest finish() {
        Digest d;
        unsigned int len = 0;
        EVP_DigestFinal_ex(ctx_, d.bytes.data(), &len);
        return d;
    }

private:
    EVP_MD_CTX* ctx_;
};

}  // namespace

Digest Digest::from_bytes(std::span<const uint8_t> b) {
    if (b.size() != 32) throw ParseError("digest must be 32 bytes");
    Digest d;
    std::memcpy(d.bytes.data(), b.data(), 32);
    return d;
}

Digest kdf(std::string_view label, std::initializer_list<std::span<const uint8_t>> parts) {
    Hasher h;
    h.update_u64(label.size());
    h.update({reinterpret_cast<const uint8_t*>(label.data()), label.size()});
    h.update_u64(parts.size());
    for (const auto& part : parts) {
        h.update_u64(part.size());
        h.update(part);
    }
    return h.finish();
}

Digest kdf(std::string_view label, std::span<const Bytes> parts) {
    Hasher h;
    h.update_u64(label.size());
    h.update({reinterpret_cast<const uint8_t*>(label.data()), label.size()});
    h.update_u64(parts.size());
    for (const auto& part : parts) {
        h.update_u64(part.size());
        h.update(part);
    }
    return h.finish();
}

}  // namespace pakelab
