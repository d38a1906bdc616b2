#pragma once

#include <map>
#include <optional>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "gsalg/element.hpp"

namespace gsalg {

/// Generator count and relation counts r_i per degree i (r_1 = 0).
struct DegreeProfile {
    unsigned d = 2;
    std::map<unsigned, mpz_class> r;

    mpz_class count(unsigned i) const;
    /// Drops every degree above m.
    DegreeProfile truncated(unsigned m) const;
    /// Throws InvalidArgument on r_1 != 0, a degree-0 entry or a negative count.
    void validate() const;

    /// {"d": 2, "degree_counts": {"3": 1}}
    nlohmann::json to_json() const;
    static DegreeProfile from_json(const nlohmann::json& j);
    /// Counts relations by degree; every relation must be homogeneous.
    static DegreeProfile of_relations(const std::vector<Element>& relations, unsigned d);
};

/// Coefficients c_0..c_N (c_0 = 1) and whether the zero clamp fired.
struct SeriesBound {
    std::vector<mpz_class> c;
    bool clamped = false;

    unsigned max_degree() const { return c.empty() ? 0 : static_cast<unsigned>(c.size() - 1); }
    /// Decimal strings for degrees 1..N, or 0..N in unital mode, plus the clamp flag.
    nlohmann::json to_json(bool unital = false) const;
};

/// True iff every coefficient of H(t)(1 - d t + sum r_i t^i) up to N is >= [n = 0].
bool gs_check(const SeriesBound& dims, const DegreeProfile& profile);

/// c_n = max(0, d c_{n-1} - sum_{i=2}^n r_i c_{n-i}), c_0 = 1.
SeriesBound gs_min_series(const DegreeProfile& profile, unsigned N);

/// P_m(t) = 1 - d t + sum_{i=2}^m r_i t^i, exactly.
mpq_class gs_polynomial(const DegreeProfile& profile, unsigned m, const mpq_class& t);

struct SearchParams {
    /// First grid resolution: t = k / grid for 0 < k < grid.
    unsigned grid = 4;
    /// Grids double until they exceed this resolution.
    unsigned max_grid = 1024;
    unsigned bisection_steps = 60;
    /// Largest denominator tried when refining near an interior minimum.
    unsigned max_denominator = 64;
};

struct Certificate {
    unsigned m = 0;
    mpq_class t;
    mpq_class value;
};

struct CertificateSearch {
    std::optional<Certificate> witness;
    /// Least P value seen on the finest grid scanned, and where.
    mpq_class grid_min;
    mpq_class grid_argmin;
    unsigned grids_scanned = 0;
};

/// Looks for a rational t in (0,1) with P_m(t) < 0. Absence of a witness proves nothing.
CertificateSearch certify_infinite(const DegreeProfile& profile, unsigned m, const SearchParams& params = {});

/// Hilbert series of A / (relations) up to degree N: a_n = d^n - dim I(n).
/// Relations must be homogeneous of degree >= 2 over a common field.
SeriesBound hilbert_quotient(const std::vector<Element>& relations, unsigned d, unsigned N, Field field = Field::gf2());

/// Certified rational enclosure of a_n^(1/n).
struct RootBound {
    unsigned n = 0;
    mpq_class lower;
    mpq_class upper;
    bool exact = false;
};

struct EntropyEstimate {
    unsigned N = 0;
    /// max over n in [ceil(N/2), N] of a_n^(1/n): `lower`/`upper` bound that maximum.
    RootBound window;
    /// a_N^(1/N) alone.
    RootBound at_top;
};

/// `bits` fixes the dyadic resolution 2^-bits of the rational bounds.
EntropyEstimate entropy_estimate(const SeriesBound& dims, unsigned bits = 32);
RootBound nth_root_bound(const mpz_class& a, unsigned n, unsigned bits = 32);

}  // namespace gsalg
