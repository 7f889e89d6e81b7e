#include "pakelab/group.hpp"

#include <boost/integer/mod_inverse.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

#include "pakelab/errors.hpp"

namespace pakelab {

namespace {

// RFC 3526 group 14.
const char* kModp2048Hex =
    "0xFFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74"
    "020BBEA63B139B22514A08798E3404DDEF9519B3CD3A431B302B0A6DF25F1437"
    "4FE1356D6D51C245E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
    "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3DC2007CB8A163BF05"
    "98DA48361C55D39A69163FA8FD24CF5F83655D23DCA3AD961C62F356208552BB"
    "9ED529077096966D670C354E4ABC9804F1746C08CA18217C32905E462E36CE3B"
    "E39E772C180E86039B2783A2EC07A28FB5C55DF06F4C52C9DE2BCBF695581718"
    "3995497CEA956AE515D2261898FA051015728E5A8AACAA68FFFFFFFFFFFFFFFF";

size_t byte_width(const Bigint& v) {
    size_t bits = msb(v) + 1;
    return (bits + 7) / 8;
}

}  // namespace

Bigint bigint_from_bytes(std::span<const uint8_t> data) {
    Bigint v = 0;
    for (uint8_t b : data) v = (v << 8) | b;
    return v;
}

Bytes bigint_to_bytes(const Bigint& v, size_t width) {
    if (v < 0) throw UsageError("cannot encode negative bigint");
    Bytes out(width, 0);
    Bigint rest = v;
    for (size_t i = 0; i < width && rest != 0; i++) {
        out[width - 1 - i] = static_cast<uint8_t>(rest & 0xff);
        rest >>= 8;
    }
    if (rest != 0) throw UsageError("bigint does not fit in encoding width");
    return out;
}

GroupParams GroupParams::make(Bigint p, Bigint g, bool validate) {
    if (validate) {
        if (p < 5 || !boost::multiprecision::miller_rabin_test(p, 32))
            throw ConfigError("group modulus is not prime");
        if (g < 2 || g >= p - 1) throw ConfigError("generator out of range [2, p-2]");
    }
    auto d = std::make_shared<Data>();
    d->p = std::move(p);
    d->g = std::move(g);
    d->order = d->p - 1;
    d->element_width = byte_width(d->p);
    d->scalar_width = byte_width(d->order);
    return GroupParams(std::move(d));
}

GroupParams GroupParams::toy23() {
    static GroupParams params = make(23, 5, false);
    return params;
}

GroupParams GroupParams::modp2048() {
    static GroupParams params = make(Bigint(kModp2048Hex), 2, false);
    return params;
}

GroupParams GroupParams::from_decimal(const std::string& p_dec, const std::string& g_dec) {
    Bigint p, g;
    try {
        p = Bigint(p_dec);
        g = Bigint(g_dec);
    } catch (const std::exception&) {
        throw ConfigError("group params must be decimal integers");
    }
    return make(std::move(p), std::move(g), true);
}

GroupParams GroupParams::preset(const std::string& name) {
    if (name == "toy23") return toy23();
    if (name == "modp2048") return modp2048();
    throw ConfigError("unknown group preset: " + name);
}

std::string GroupParams::p_decimal() const { return d_->p.str(); }
std::string GroupParams::g_decimal() const { return d_->g.str(); }

Scalar::Scalar(Bigint v, const GroupParams& params) {
    v_ = v % params.order();
    if (v_ < 0) v_ += params.order();
}

Bytes Scalar::encode(const GroupParams& params) const {
    return bigint_to_bytes(v_, params.scalar_width());
}

Scalar Scalar::decode(std::span<const uint8_t> data, const GroupParams& params) {
    if (data.size() != params.scalar_width()) throw ParseError("scalar width mismatch");
    return Scalar(bigint_from_bytes(data), params);
}

Scalar Scalar::random(const GroupParams& params, Rng& rng) {
    // Draw well past the modulus width; the residual bias is < 2^-64.
    Bytes raw = rng.bytes(params.scalar_width() + 8);
    Bigint v = bigint_from_bytes(raw) % (params.order() - 1);
    return Scalar(v + 1, params);
}

Scalar Scalar::random_unit(const GroupParams& params, Rng& rng) {
    for (;;) {
        Scalar s = random(params, rng);
        if (gcd(s.value(), params.order()) == 1) return s;
    }
}

Scalar Scalar::inverse(const GroupParams& params) const {
    Bigint inv = boost::integer::mod_inverse(v_, params.order());
    if (inv == 0) throw UsageError("scalar has no inverse modulo the group order");
    return Scalar(inv, params);
}

Scalar Scalar::add(const Scalar& other, const GroupParams& params) const {
    return Scalar(v_ + other.v_, params);
}

Scalar Scalar::mul(const Scalar& other, const GroupParams& params) const {
    return Scalar(v_ * other.v_, params);
}

GroupElement::GroupElement(Bigint v, GroupParams params) : v_(std::move(v)), params_(std::move(params)) {
    if (v_ < 1 || v_ >= params_.p()) throw UsageError("group element out of range [1, p-1]");
}

Bytes GroupElement::encode() const {
    return bigint_to_bytes(v_, params_.element_width());
}

GroupElement GroupElement::decode(std::span<const uint8_t> data, const GroupParams& params) {
    if (data.size() != params.element_width()) throw ParseError("element width mismatch");
    Bigint v = bigint_from_bytes(data);
    if (v < 1 || v >= params.p()) throw ParseError("element value out of range");
    return GroupElement(std::move(v), params);
}

GroupElement GroupElement::decode_total(std::span<const uint8_t> data, const GroupParams& params) {
    Bigint v = bigint_from_bytes(data);
    // Identity on valid encodings; out-of-range bytes fold into [1, p-1].
    if (v < 1 || v >= params.p()) v = v % (params.p() - 1) + 1;
    return GroupElement(std::move(v), params);
}

GroupElement GroupElement::generator(const GroupParams& params) {
    return GroupElement(params.g(), params);
}

bool GroupElement::operator==(const GroupElement& other) const {
    return v_ == other.v_ && params_ == other.params_;
}

GroupElement group_exp(const GroupElement& base, const Scalar& exponent) {
    const GroupParams& params = base.params();
    Bigint r = powm(base.value(), exponent.value(), params.p());
    return GroupElement(std::move(r), params);
}

GroupElement group_mul(const GroupElement& a, const GroupElement& b) {
    if (!(a.params() == b.params()))
        throw UsageError("group_mul operands have mismatched params");
    return GroupElement(a.value() * b.value() % a.params().p(), a.params());
}

Scalar kdf_to_scalar(std::string_view label, std::span<const Bytes> parts,
                     const GroupParams& params) {
    Digest d = kdf(label, parts);
    Bigint v = bigint_from_bytes(d.bytes) % params.order();
    uint32_t counter = 0;
    while (v == 0) {
        // Zero exponents are invalid; re-derive with an appended counter.
        std::vector<Bytes> extended(parts.begin(), parts.end());
        Bytes ctr;
        append_u32be(ctr, counter++);
        extended.push_back(ctr);
        d = kdf(label, extended);
        v = bigint_from_bytes(d.bytes) % params.order();
    }
    return Scalar(v, params);
}

}  // namespace pakelab
