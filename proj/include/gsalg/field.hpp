#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace gsalg {

/// Coefficient field: GF(2), GF(p) with p < 2^31, or the rationals.
class Field {
public:
    enum class Kind { gf2, prime, rational };

    static Field gf2() { return Field(Kind::gf2, 2); }
    static Field prime(std::uint32_t p);
    static Field rational() { return Field(Kind::rational, 0); }

    /// Accepts "gf2", "gfp:<p>" and "rational" (alias "q").
    static Field parse(std::string_view text);

    Kind kind() const noexcept { return kind_; }
    /// Characteristic; 0 for the rationals.
    std::uint32_t characteristic() const noexcept { return p_; }
    bool is_finite() const noexcept { return kind_ != Kind::rational; }

    std::string to_string() const;

    friend bool operator==(const Field&, const Field&) = default;

private:
    Field(Kind k, std::uint32_t p) : kind_(k), p_(p) {}

    Kind kind_;
    std::uint32_t p_;
};

bool is_prime_u32(std::uint32_t n);

/// Field element. Finite-field values are kept as residues in [0, p).
class Scalar {
public:
    explicit Scalar(Field f = Field::rational()) : field_(f) {}
    Scalar(Field f, long value);
    /// Reduces a rational into `f`; throws if the denominator vanishes mod p.
    Scalar(Field f, const mpq_class& value);

    static Scalar zero(Field f) { return Scalar(f); }
    static Scalar one(Field f) { return Scalar(f, 1L); }

    const Field& field() const noexcept { return field_; }
    bool is_zero() const noexcept;
    bool is_one() const noexcept;

    std::uint32_t residue() const noexcept { return residue_; }
    const mpq_class& rational() const noexcept { return q_; }

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar inverse() const;

    /// Decimal residue for finite fields, "a" or "a/b" for rationals.
    std::string to_string() const;
    /// Signed representative: residues above p/2 print as negatives.
    std::string to_signed_string() const;

    friend bool operator==(const Scalar& a, const Scalar& b) {
        if (!(a.field_ == b.field_)) return false;
        return a.field_.is_finite() ? a.residue_ == b.residue_ : a.q_ == b.q_;
    }

private:
    void check_same(const Scalar& o) const;

    Field field_;
    std::uint32_t residue_ = 0;
    mpq_class q_;
};

}  // namespace gsalg
