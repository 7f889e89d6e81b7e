#include "pakelab/rng.hpp"

#include <cstring>

#include "pakelab/errors.hpp"

namespace pakelab {

Rng Rng::from_seed(uint64_t seed) {
    Bytes s = u64be(seed);
    return Rng(kdf("rng-seed", {std::span<const uint8_t>(s)}));
}

Rng Rng::split(std::string_view label) {
    Bytes ctr = u64be(counter_++);
    Bytes lab = to_bytes(label);
    return Rng(kdf("rng-split", {std::span<const uint8_t>(key_.bytes),
                                 std::span<const uint8_t>(ctr),
                                 std::span<const uint8_t>(lab)}));
}

Digest Rng::block() {
    Bytes ctr = u64be(counter_++);
    return kdf("rng-block", {std::span<const uint8_t>(key_.bytes),
                             std::span<const uint8_t>(ctr)});
}

void Rng::fill(std::span<uint8_t> out) {
    size_t off = 0;
    while (off < out.size()) {
        Digest d = block();
        size_t n = std::min<size_t>(32, out.size() - off);
        std::memcpy(out.data() + off, d.bytes.data(), n);
        off += n;
    }
}

Bytes Rng::bytes(size_t n) {
    Bytes out(n);
    fill(out);
    return out;
}

Digest Rng::digest() {
    return block();
}

uint64_t Rng::next_u64() {
    Digest d = block();
    uint64_t v = 0;
    for (int i = 0; i < 8; i++) v = v << 8 | d.bytes[i];
    return v;
}

double Rng::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

uint64_t Rng::below(uint64_t n) {
    if (n == 0) throw UsageError("Rng::below(0)");
    // Rejection-sample the top of the range away to stay unbiased.
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
        uint64_t v = next_u64();
        if (v < limit) return v % n;
    }
}

}  // namespace pakelab
