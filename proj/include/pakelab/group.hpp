#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <memory>
#include <string>

#include "pakelab/bytes.hpp"
#include "pakelab/kdf.hpp"
#include "pakelab/rng.hpp"

namespace pakelab {

using Bigint = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;

Bigint bigint_from_bytes(std::span<const uint8_t> data);
/// Fixed-width big-endian encoding; throws UsageError if v does not fit.
Bytes bigint_to_bytes(const Bigint& v, size_t width);

/// Multiplicative group mod a prime p with generator g. Cheap to copy;
/// instances sharing the same (p, g) compare equal. Exponent arithmetic is
/// done modulo the group order p-1.
class GroupParams {
public:
    /// p=23, g=5. Small enough for exhaustive checks.
    static GroupParams toy23();
    /// 2048-bit MODP group (RFC 3526 group 14), g=2.
    static GroupParams modp2048();
    /// Decimal strings, the config-file form. Validates primality of p and
    /// g in [2, p-1].
    static GroupParams from_decimal(const std::string& p_dec, const std::string& g_dec);
    static GroupParams preset(const std::string& name);

    const Bigint& p() const { return d_->p; }
    const Bigint& g() const { return d_->g; }
    /// Scalar modulus: exponents live in [1, order-1].
    const Bigint& order() const { return d_->order; }
    size_t element_width() const { return d_->element_width; }
    size_t scalar_width() const { return d_->scalar_width; }
    std::string p_decimal() const;
    std::string g_decimal() const;

    bool operator==(const GroupParams& other) const {
        return d_ == other.d_ || (d_->p == other.d_->p && d_->g == other.d_->g);
    }

private:
    struct Data {
        Bigint p, g, order;
        size_t element_width, scalar_width;
    };
    explicit GroupParams(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
    static GroupParams make(Bigint p, Bigint g, bool validate);

    std::shared_ptr<const Data> d_;
};

/// Exponent reduced modulo the group order, never zero when derived via
/// kdf_to_scalar or drawn randomly.
class Scalar {
public:
    Scalar(Bigint v, const GroupParams& params);

    const Bigint& value() const { return v_; }
    Bytes encode(const GroupParams& params) const;
    static Scalar decode(std::span<const uint8_t> data, const GroupParams& params);

    /// Uniform in [1, order-1].
    static Scalar random(const GroupParams& params, Rng& rng);
    /// Uniform over values coprime to the order, so an inverse exists.
    static Scalar random_unit(const GroupParams& params, Rng& rng);
    Scalar inverse(const GroupParams& params) const;

    Scalar add(const Scalar& other, const GroupParams& params) const;
    Scalar mul(const Scalar& other, const GroupParams& params) const;

    bool operator==(const Scalar& other) const { return v_ == other.v_; }

private:
    Bigint v_;
};

/// Group element in [1, p-1], tied to its params.
class GroupElement {
public:
    GroupElement(Bigint v, GroupParams params);

    const Bigint& value() const { return v_; }
    const GroupParams& params() const { return params_; }

    Bytes encode() const;
    /// Wire decoding: out-of-range values throw ParseError.
    static GroupElement decode(std::span<const uint8_t> data, const GroupParams& params);
    /// Total decoding for password-derived plaintexts: any byte string maps
    /// to some element, so a wrong-key decryption still parses.
    static GroupElement decode_total(std::span<const uint8_t> data, const GroupParams& params);

    static GroupElement generator(const GroupParams& params);

    bool operator==(const GroupElement& other) const;

private:
    Bigint v_;
    GroupParams params_;
};

/// Modular exponentiation; base and result share params.
GroupElement group_exp(const GroupElement& base, const Scalar& exponent);

/// Modular product; operands must share params.
GroupElement group_mul(const GroupElement& a, const GroupElement& b);

/// Digest reduced into [1, order-1]; a zero reduction is re-derived with an
/// appended counter, so the result is never zero.
Scalar kdf_to_scalar(std::string_view label, std::span<const Bytes> parts,
                     const GroupParams& params);

}  // namespace pakelab
