#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "gsalg/magnitude.hpp"

namespace gsalg {

/// Positive integer stored as its set of one-bit positions (descending), so degrees
/// such as 2^m + 2^(m-1) stay exact for astronomically large m.
class SparseBinary {
public:
    SparseBinary() = default;
    explicit SparseBinary(const mpz_class& value);
    /// Sum of 2^p over distinct positions p.
    static SparseBinary from_bits(std::vector<mpz_class> positions);

    const std::vector<mpz_class>& bits() const noexcept { return bits_; }
    bool is_zero() const noexcept { return bits_.empty(); }
    mpz_class bit_length() const;
    bool is_power_of_two() const noexcept { return bits_.size() == 1; }
    /// Exact value when the bit length is at most `max_bits`.
    std::optional<mpz_class> value(unsigned long max_bits = 1ul << 20) const;

    std::string to_string() const;
    nlohmann::json to_json() const;
    /// Integer, decimal string or {"bits": [p, ...]}.
    static SparseBinary from_json(const nlohmann::json& j);

    friend bool operator==(const SparseBinary&, const SparseBinary&) = default;
    friend std::strong_ordering operator<=>(const SparseBinary& a, const SparseBinary& b);

private:
    std::vector<mpz_class> bits_;
};

/// Relation degrees with multiplicities (multiplicity may be astronomically large).
struct DegreeSupport {
    std::vector<std::pair<SparseBinary, Magnitude>> degrees;

    void add(const SparseBinary& degree, const Magnitude& count = Magnitude(1)) { degrees.emplace_back(degree, count); }
    nlohmann::json to_json() const;
    static DegreeSupport from_json(const nlohmann::json& j);
};

/// The n with 2^n < deg <= 2^(n+1). Requires deg >= 2.
mpz_class dyadic_level(const SparseBinary& degree);

/// The level n whose window [2^n - 2^(n-3), 2^n + 2^(n-2)] contains deg, if any.
std::optional<mpz_class> forbidden_window_level(const SparseBinary& degree);

/// r_n = number of relations with 2^n < degree <= 2^(n+1); only nonzero levels stored.
struct DyadicProfile {
    std::map<mpz_class, Magnitude> r;

    std::vector<mpz_class> support() const;
    bool contains(const mpz_class& n) const { return r.count(n) != 0; }

    nlohmann::json to_json() const;
    /// {"r": {"level": count, ...}}; counts are integers, decimal strings or Magnitude objects.
    static DyadicProfile from_json(const nlohmann::json& j);
};

DyadicProfile dyadic_profile(const DegreeSupport& degrees);

/// Reading of r_0 in the chain conditions with m = 0 when 0 is not a level of the profile:
/// `unit` takes r_0 = 1 (the m = 0 lower condition becomes 2^(3n+4) < r_n),
/// `zero` takes r_0 = 0 (it degenerates to r_n >= 1).
enum class R0Convention { unit, zero };

/// Reading of S_n: the interval {n-1-e(n), ..., n-1} or the two-element set {n-1-e(n), n-1}.
enum class SReading { interval, pair };

std::string to_string(R0Convention c);
std::string to_string(SReading s);

struct ConditionCheck {
    std::string key;
    bool ok = true;
    /// False when the inputs needed for the condition were not supplied.
    bool evaluated = true;
    std::optional<mpz_class> n, m;
    std::string lhs, rhs;
    std::string note;

    nlohmann::json to_json() const;
};

struct ConditionReport {
    std::vector<ConditionCheck> checks;

    bool ok() const;
    const ConditionCheck* first_failure() const;
    nlohmann::json to_json() const;
};

struct HypothesisReport : ConditionReport {
    R0Convention r0 = R0Convention::unit;
    nlohmann::json to_json() const;
};

/// Hypotheses of the growth theorem: no levels below 8, empty forbidden windows, the chain
/// 2^(3n+4) r_m^33 < r_n < 2^(2^(n-m-3)) for m < n in Y + {0}, and r_n < 2^(2^(floor(n/2)-4)).
/// `degrees`, when given, is also checked against the profile.
HypothesisReport validate_growth_hypotheses(const DyadicProfile& profile, const std::optional<DegreeSupport>& degrees = std::nullopt,
                                 R0Convention r0 = R0Convention::unit);

struct ScheduleOptions {
    SReading s_reading = SReading::interval;
    /// Throw PropertyViolation on the first failed schedule invariant.
    bool strict = false;
};

struct Schedule {
    DyadicProfile profile;
    std::map<mpz_class, mpz_class> e;
    /// t_n = 2^(e(n)-1) - 3n - 4 - sum_{k<n, k in Y} 2^(e(k)+2).
    std::map<mpz_class, mpz_class> t;
    SReading s_reading = SReading::interval;
    ConditionReport report;

    bool ok() const { return report.ok(); }
    nlohmann::json to_json() const;
};

/// e(n) with 2^(2^(e-3)) <= r < 2^(2^(e-2)); requires r >= 2.
mpz_class bracket_exponent(const Magnitude& r);

/// e(n) by bracketing, then S_n disjointness, 1 <= e(n) <= n/2 - 1, the master inequality
/// r_n 2^(3n+4) prod_{k<n} 2^(2^(e(k)+2)) <= 2^(2^(e(n)-1)) and 2^(2^e(n)) >= r_n^4.
/// Throws InvalidArgument when some r_n < 2 (no bracketing exponent).
Schedule compute_e_schedule(const DyadicProfile& profile, const ScheduleOptions& opts = {});

/// 2^(3n+4) prod_{i<n, i in Y} r_i^32 < r_n for every n in Y.
struct ProductChainResult {
    bool ok = true;
    ConditionReport report;
};

ProductChainResult check_product_chain(const DyadicProfile& profile);

struct BoundsReport {
    mpz_class n;
    /// Largest k in Y with k <= 2 log2 n.
    std::optional<mpz_class> k;
    /// 8 n^4 r_k^33; when no k applies, 8 n^4 from the degree bound with an empty product.
    Magnitude upper;
    std::string upper_source;
    /// 8 n^3 prod_{i in Y, i <= 2 log2 n} 2^(2^(e(i)+2)), a bound on the single degree n.
    Magnitude upper_degree;
    /// max over j in Y, j <= log2 n, of r_j^4 / 2 and of 2^(2^e(j)) / 2.
    std::optional<Magnitude> lower_relations;
    std::optional<mpz_class> lower_relations_level;
    std::optional<Magnitude> lower_schedule;
    ConditionReport consistency;

    nlohmann::json to_json() const;
};

BoundsReport eval_bounds(const Schedule& schedule, const mpz_class& n);

/// log2 upper(n) <= 3 + 4 log2 n + 200 (log2 n)^3, decided as a Magnitude comparison.
ConditionCheck subexp_upper_growth_check(const Schedule& schedule, const mpz_class& n);
/// dim R_(2^(m+1)) lower bound against 40^(8 m^2).
ConditionCheck subexp_lower_growth_check(const Schedule& schedule, const mpz_class& m);
/// c^n <= 2^(400 (log2 n)^3) with c = 1 + 2^-10 at n = 2^log2n must fail; ok means it fails.
ConditionCheck exponential_growth_refutation(unsigned long log2n = 64);

struct SubexpPlan {
    std::vector<mpz_class> levels;
    DegreeSupport degrees;
    DyadicProfile profile;
    ConditionReport side_conditions;
    HypothesisReport validation;
    Schedule schedule;

    nlohmann::json to_json() const;
};

/// m_1 = 101, m_(i+1) = 200 m_i^3 + 1, one relation block of degree 2^m + 2^(m-1) and size
/// 40^(8 m^3) per level.
SubexpPlan gen_subexp_schedule(unsigned count);

}  // namespace gsalg
