#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "pakelab/bytes.hpp"
#include "pakelab/kdf.hpp"

namespace pakelab {

/// Deterministic counter-mode generator. Identical seeds produce identical
/// output streams, and split() derives an independent child stream from a
/// label plus the parent's position, so parties and sessions can draw
/// without sharing state.
class Rng {
public:
    static Rng from_seed(uint64_t seed);
    static Rng from_key(const Digest& key) { return Rng(key); }

    /// Child stream keyed by this stream's state and the label. Consecutive
    /// splits differ even under the same label.
    Rng split(std::string_view label);

    void fill(std::span<uint8_t> out);
    Bytes bytes(size_t n);
    Digest digest();

    uint64_t next_u64();
    /// Uniform in [0, 1) with 53 random bits.
    double next_unit();
    /// Uniform in [0, n), unbiased. n must be nonzero.
    uint64_t below(uint64_t n);

private:
    explicit Rng(Digest key) : key_(key) {}
    Digest block();

    Digest key_{};
    uint64_t counter_ = 0;
};

}  // namespace pakelab
