#pragma once

#include <array>
#include <compare>
#include <initializer_list>
#include <span>
#include <string_view>

#include "pakelab/bytes.hpp"

namespace pakelab {

/// 32-byte digest. Equal inputs yield equal digests; all key material,
/// challenges and tags in the model are derived through kdf().
struct Digest {
    std::array<uint8_t, 32> bytes{};

    auto operator<=>(const Digest&) const = default;
    std::string hex() const { return to_hex(bytes); }
    static Digest from_bytes(std::span<const uint8_t> b);
};

/// Domain-separated key derivation: label and every part are length-framed,
/// so distinct (label, parts) inputs never collide by concatenation.
Digest kdf(std::string_view label, std::initializer_list<std::span<const uint8_t>> parts);
Digest kdf(std::string_view label, std::span<const Bytes> parts);

}  // namespace pakelab
