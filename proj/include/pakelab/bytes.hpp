#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pakelab/errors.hpp"

namespace pakelab {

using Bytes = std::vector<uint8_t>;

Bytes to_bytes(std::string_view s);
std::string to_hex(std::span<const uint8_t> data);
Bytes from_hex(std::string_view hex);

void append_u32be(Bytes& out, uint32_t v);
void append_u64be(Bytes& out, uint64_t v);
Bytes u64be(uint64_t v);

/// Length-framed binary writer for wire message bodies.
class ByteWriter {
public:
    void u8(uint8_t v) { buf_.push_back(v); }
    void u32(uint32_t v) { append_u32be(buf_, v); }
    void u64(uint64_t v) { append_u64be(buf_, v); }
    /// Raw bytes, no framing; the reader must know the width.
    void raw(std::span<const uint8_t> data) { buf_.insert(buf_.end(), data.begin(), data.end()); }
    /// u32 length prefix + bytes.
    void var(std::span<const uint8_t> data);
    void str(std::string_view s);

    Bytes take() { return std::move(buf_); }

private:
    Bytes buf_;
};

/// Bounds-checked reader; throws ParseError on underflow.
class ByteReader {
public:
    explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

    uint8_t u8();
    uint32_t u32();
    uint64_t u64();
    std::span<const uint8_t> raw(size_t n);
    std::span<const uint8_t> var();
    std::string str();
    size_t remaining() const { return data_.size() - pos_; }
    bool done() const { return pos_ == data_.size(); }
    /// Rejects trailing garbage.
    void expect_done() const;

private:
    std::span<const uint8_t> data_;
    size_t pos_ = 0;
};

}  // namespace pakelab
