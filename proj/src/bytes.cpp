#include "pakelab/bytes.hpp"

namespace pakelab {

Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

std::string to_hex(std::span<const uint8_t> data) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

namespace {

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) throw ParseError("hex string has odd length");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) throw ParseError("invalid hex digit");
        out.push_back(static_cast<uint8_t>(hi << 4 | lo));
    }
    return out;
}

void append_u32be(Bytes& out, uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8)
        out.push_back(static_cast<uint8_t>(v >> shift));
}

void append_u64be(Bytes& out, uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8)
        out.push_back(static_cast<uint8_t>(v >> shift));
}

Bytes u64be(uint64_t v) {
    Bytes out;
    append_u64be(out, v);
    return out;
}

void ByteWriter::var(std::span<const uint8_t> data) {
    u32(static_cast<uint32_t>(data.size()));
    raw(data);
}

void ByteWriter::str(std::string_view s) {
    u32(static_cast<uint32_t>(s.size()));
    buf_.insert(buf_.end(), s.begin(), s.end());
}

uint8_t ByteReader::u8() {
    if (remaining() < 1) throw ParseError("unexpected end of message");
    return data_[pos_++];
}

uint32_t ByteReader::u32() {
    if (remaining() < 4) throw ParseError("unexpected end of message");
    uint32_t v = 0;
    for (int i = 0; i < 4; i++) v = v << 8 | data_[pos_++];
    return v;
}

uint64_t ByteReader::u64() {
    if (remaining() < 8) throw ParseError("unexpected end of message");
    uint64_t v = 0;
    for (int i = 0; i < 8; i++) v = v << 8 | data_[pos_++];
    return v;
}

std::span<const uint8_t> ByteReader::raw(size_t n) {
    if (remaining() < n) throw ParseError("unexpected end of message");
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
}

std::span<const uint8_t> ByteReader::var() {
    uint32_t n = u32();
    return raw(n);
}

std::string ByteReader::str() {
    auto s = var();
    return std::string(s.begin(), s.end());
}

void ByteReader::expect_done() const {
    if (!done()) throw ParseError("trailing bytes in message");
}

}  // namespace pakelab
