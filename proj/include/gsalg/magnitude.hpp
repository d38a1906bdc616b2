#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace gsalg {

/// Nonnegative integer exponent `linear + 2^tower`, the tower part optional.
///
/// Towers with tower <= kTowerFoldLimit are folded into the linear part, so a
/// present tower always denotes a number with more than kTowerFoldLimit bits.
class Exponent {
public:
    static constexpr unsigned long kTowerFoldLimit = 4096;

    Exponent() = default;
    Exponent(const mpz_class& linear);  // NOLINT(google-explicit-constructor)
    Exponent(long linear) : Exponent(mpz_class(linear)) {}  // NOLINT(google-explicit-constructor)

    /// The exponent 2^t (t >= 0).
    static Exponent power_of_two(const mpz_class& t);

    const mpz_class& linear() const noexcept { return linear_; }
    const std::optional<mpz_class>& tower() const noexcept { return tower_; }
    bool is_zero() const noexcept { return !tower_ && linear_ == 0; }

    /// Exact value when no tower is present.
    std::optional<mpz_class> value() const;

    Exponent operator+(const Exponent& o) const;
    /// Multiplication by a positive integer; a tower only survives scaling by powers of two.
    Exponent scaled(const mpz_class& k) const;
    /// Difference when expressible (same tower or no towers); nullopt otherwise.
    std::optional<Exponent> minus(const Exponent& o) const;

    std::string to_string() const;

    friend bool operator==(const Exponent&, const Exponent&) = default;
    friend std::strong_ordering operator<=>(const Exponent& a, const Exponent& b);

private:
    void normalize();

    mpz_class linear_ = 0;
    std::optional<mpz_class> tower_;
};

/// Positive rational coefficient times a product of integer powers, kept in
/// canonical form (bases >= 2, sorted, distinct; small prime factors split out).
class Magnitude {
public:
    struct Factor {
        mpz_class base;
        Exponent exp;
        friend bool operator==(const Factor&, const Factor&) = default;
    };

    Magnitude() : coeff_(1) {}
    Magnitude(const mpz_class& value);  // NOLINT(google-explicit-constructor)
    Magnitude(const mpq_class& value);  // NOLINT(google-explicit-constructor)
    Magnitude(long value) : Magnitude(mpz_class(value)) {}  // NOLINT(google-explicit-constructor)

    static Magnitude power(const mpz_class& base, const Exponent& exp);
    static Magnitude pow2(const Exponent& exp) { return power(2, exp); }
    /// 2^(2^t); t may be negative only through `tower_fraction` callers, so t >= 0 here.
    static Magnitude tower2(const mpz_class& t) { return pow2(Exponent::power_of_two(t)); }

    const mpq_class& coeff() const noexcept { return coeff_; }
    const std::vector<Factor>& factors() const noexcept { return factors_; }

    Magnitude operator*(const Magnitude& o) const;
    Magnitude& operator*=(const Magnitude& o) { return *this = *this * o; }
    Magnitude pow(const mpz_class& k) const;

    /// Upper estimate of the bit size of the numerator; nullopt when a tower is present.
    std::optional<mpz_class> bit_estimate() const;
    /// Exact rational value if its bit estimate is within `max_bits`.
    std::optional<mpq_class> exact(unsigned long max_bits = kExactBitBudget) const;

    /// floor(log2 value), exact. Throws CapExceeded when the logarithm itself is too large.
    mpz_class floor_log2() const;

    std::string to_string() const;
    nlohmann::json to_json() const;
    /// Integer, rational string, "b^e * b2^(2^t) * c" string, or {"coeff", "factors"}.
    static Magnitude from_json(const nlohmann::json& j);

    /// Value equality: structural on canonical forms, else a certified comparison.
    friend bool operator==(const Magnitude& a, const Magnitude& b);
    bool same_form(const Magnitude& o) const { return coeff_ == o.coeff_ && factors_ == o.factors_; }

    static constexpr unsigned long kExactBitBudget = 1ul << 24;

private:
    void canonicalize();

    mpq_class coeff_;
    std::vector<Factor> factors_;
};

struct CompareOptions {
    unsigned long exact_bit_budget = Magnitude::kExactBitBudget;
    unsigned long start_precision = 128;
    unsigned long max_precision = 1ul << 16;
};

/// Certified comparison; throws Undecided if the refinement budget runs out.
std::strong_ordering magnitude_cmp(const Magnitude& a, const Magnitude& b, const CompareOptions& opts = {});

inline bool operator<(const Magnitude& a, const Magnitude& b) { return magnitude_cmp(a, b) < 0; }
inline bool operator<=(const Magnitude& a, const Magnitude& b) { return magnitude_cmp(a, b) <= 0; }
inline bool operator>(const Magnitude& a, const Magnitude& b) { return magnitude_cmp(a, b) > 0; }
inline bool operator>=(const Magnitude& a, const Magnitude& b) { return magnitude_cmp(a, b) >= 0; }

/// r < 2^t, decided through bit length without forming 2^t. Requires r >= 1, t >= 0.
bool bitlen_lt_pow2(const mpz_class& r, const mpz_class& t);
/// Magnitude form of the same test.
bool magnitude_lt_pow2(const Magnitude& r, const Exponent& t);

/// Certified enclosure [lo, hi] of log2(m), rendered as decimal strings for reports.
std::pair<std::string, std::string> log2_enclosure(const Magnitude& m, unsigned long precision = 128);

/// Bit length of a positive integer.
mpz_class bit_length(const mpz_class& n);

}  // namespace gsalg
