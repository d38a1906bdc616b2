#include "gsalg/field.hpp"

#include <charconv>

#include "gsalg/error.hpp"

namespace gsalg {

bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t q = 3; q * q <= n; q += 2)
        if (n % q == 0) return false;
    return true;
}

Field Field::prime(std::uint32_t p) {
    if (p >= (std::uint32_t{1} << 31)) throw InvalidArgument("prime field characteristic must be below 2^31");
    if (!is_prime_u32(p)) throw InvalidArgument(std::to_string(p) + " is not prime");
    if (p == 2) return gf2();
    return Field(Kind::prime, p);
}

Field Field::parse(std::string_view text) {
    if (text == "gf2") return gf2();
    if (text == "rational" || text == "q" || text == "Q") return rational();
    if (text.starts_with("gfp:")) {
        auto digits = text.substr(4);
        std::uint64_t p = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
        if (ec != std::errc() || ptr != digits.data() + digits.size() || p >= (std::uint64_t{1} << 31))
            throw InvalidArgument("bad prime field: " + std::string(text));
        return prime(static_cast<std::uint32_t>(p));
    }
    throw InvalidArgument("unknown field: " + std::string(text) + " (expected gf2, gfp:<p> or rational)");
}

std::string Field::to_string() const {
    switch (kind_) {
    case Kind::gf2: return "gf2";
    case Kind::prime: return "gfp:" + std::to_string(p_);
    case Kind::rational: return "rational";
    }
    return "?";
}

namespace {

std::uint32_t reduce_mpz(const mpz_class& z, std::uint32_t p) {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), z.get_mpz_t(), p);
    return static_cast<std::uint32_t>(r.get_ui());
}

std::uint32_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint32_t p) {
    std::uint64_t r = 1;
    b %= p;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(r);
}

}  // namespace

Scalar::Scalar(Field f, long value) : field_(f) {
    if (f.is_finite()) {
        long p = static_cast<long>(f.characteristic());
        long r = value % p;
        if (r < 0) r += p;
        residue_ = static_cast<std::uint32_t>(r);
    } else {
        q_ = value;
    }
}

Scalar::Scalar(Field f, const mpq_class& value) : field_(f) {
    if (f.is_finite()) {
        std::uint32_t p = f.characteristic();
        std::uint32_t den = reduce_mpz(value.get_den(), p);
        if (den == 0) throw InvalidArgument("coefficient " + value.get_str() + " has denominator divisible by " + std::to_string(p));
        std::uint64_t num = reduce_mpz(value.get_num(), p);
        residue_ = static_cast<std::uint32_t>(num * pow_mod(den, p - 2, p) % p);
    } else {
        q_ = value;
        q_.canonicalize();
    }
}

bool Scalar::is_zero() const noexcept { return field_.is_finite() ? residue_ == 0 : q_ == 0; }
bool Scalar::is_one() const noexcept { return field_.is_finite() ? residue_ == 1 : q_ == 1; }

void Scalar::check_same(const Scalar& o) const {
    if (!(field_ == o.field_)) throw DegreeMismatch("scalar field mismatch: " + field_.to_string() + " vs " + o.field_.to_string());
}

Scalar Scalar::operator+(const Scalar& o) const {
    check_same(o);
    Scalar r(field_);
    if (field_.is_finite()) {
        std::uint64_t s = std::uint64_t{residue_} + o.residue_;
        r.residue_ = static_cast<std::uint32_t>(s % field_.characteristic());
    } else {
        r.q_ = q_ + o.q_;
    }
    return r;
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator-() const {
    Scalar r(field_);
    if (field_.is_finite())
        r.residue_ = residue_ == 0 ? 0 : field_.characteristic() - residue_;
    else
        r.q_ = -q_;
    return r;
}

Scalar Scalar::operator*(const Scalar& o) const {
    check_same(o);
    Scalar r(field_);
    if (field_.is_finite())
        r.residue_ = static_cast<std::uint32_t>(std::uint64_t{residue_} * o.residue_ % field_.characteristic());
    else
        r.q_ = q_ * o.q_;
    return r;
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw InvalidArgument("division by zero");
    Scalar r(field_);
    if (field_.is_finite())
        r.residue_ = pow_mod(residue_, field_.characteristic() - 2, field_.characteristic());
    else
        r.q_ = 1 / q_;
    return r;
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inverse(); }

std::string Scalar::to_string() const {
    if (field_.is_finite()) return std::to_string(residue_);
    return q_.get_str();
}

std::string Scalar::to_signed_string() const {
    if (!field_.is_finite()) return q_.get_str();
    std::uint32_t p = field_.characteristic();
    if (p > 2 && residue_ > p / 2) return "-" + std::to_string(p - residue_);
    return std::to_string(residue_);
}

}  // namespace gsalg
