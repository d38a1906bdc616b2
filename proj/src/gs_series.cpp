#include "gsalg/gs_series.hpp"

#include <algorithm>

#include "gsalg/error.hpp"
#include "gsalg/limits.hpp"
#include "gsalg/row_space.hpp"

namespace gsalg {

// ---------------------------------------------------------------- profiles

mpz_class DegreeProfile::count(unsigned i) const {
    auto it = r.find(i);
    return it == r.end() ? mpz_class(0) : it->second;
}

DegreeProfile DegreeProfile::truncated(unsigned m) const {
    DegreeProfile p{d, {}};
    for (const auto& [i, c] : r)
        if (i <= m) p.r.emplace(i, c);
    return p;
}

void DegreeProfile::validate() const {
    if (d == 0) throw InvalidArgument("generator count must be positive");
    for (const auto& [i, c] : r) {
        if (c < 0) throw InvalidArgument("negative relation count at degree " + std::to_string(i));
        if ((i == 0 || i == 1) && c != 0) throw InvalidArgument("relations of degree " + std::to_string(i) + " are not allowed (r_1 = 0)");
    }
}

nlohmann::json DegreeProfile::to_json() const {
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [i, c] : r)
        if (c != 0) counts[std::to_string(i)] = c.fits_slong_p() ? nlohmann::json(c.get_si()) : nlohmann::json(c.get_str());
    return {{"d", d}, {"degree_counts", counts}};
}

DegreeProfile DegreeProfile::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("d")) throw ParseError("profile needs a \"d\" field");
    DegreeProfile p;
    p.d = j.at("d").get<unsigned>();
    if (j.contains("degree_counts")) {
        for (const auto& [key, val] : j.at("degree_counts").items()) {
            unsigned long deg = 0;
            try {
                std::size_t used = 0;
                deg = std::stoul(key, &used);
                if (used != key.size()) throw std::invalid_argument(key);
            } catch (const std::exception&) {
                throw ParseError("degree key '" + key + "' is not a nonnegative integer");
            }
            mpz_class c;
            if (val.is_number_integer())
                c = val.get<long>();
            else if (!val.is_string() || c.set_str(val.get<std::string>(), 10) != 0)
                throw ParseError("count for degree " + key + " must be an integer");
            if (c != 0) p.r[static_cast<unsigned>(deg)] = c;
        }
    }
    p.validate();
    return p;
}

DegreeProfile DegreeProfile::of_relations(const std::vector<Element>& relations, unsigned d) {
    DegreeProfile p{d, {}};
    for (const auto& f : relations) {
        if (f.is_zero()) continue;
        if (!f.is_homogeneous()) throw InvalidArgument("inhomogeneous relation " + f.to_string() + "; the degree profile needs homogeneous relations");
        p.r[*f.order()] += 1;
    }
    p.validate();
    return p;
}

nlohmann::json SeriesBound::to_json(bool unital) const {
    nlohmann::json a = nlohmann::json::array();
    for (std::size_t n = unital ? 0 : 1; n < c.size(); ++n) a.push_back(c[n].get_str());
    return {{"series", a}, {"first_degree", unital ? 0 : 1}, {"clamped", clamped}};
}

// ---------------------------------------------------------------- inequality and minimal series

bool gs_check(const SeriesBound& dims, const DegreeProfile& profile) {
    const auto& a = dims.c;
    for (std::size_t n = 0; n < a.size(); ++n) {
        mpz_class coeff = a[n];
        if (n >= 1) coeff -= profile.d * a[n - 1];
        for (const auto& [i, r] : profile.r)
            if (i >= 2 && i <= n) coeff += r * a[n - i];
        if (coeff < (n == 0 ? 1 : 0)) return false;
    }
    return true;
}

SeriesBound gs_min_series(const DegreeProfile& profile, unsigned N) {
    profile.validate();
    SeriesBound s;
    s.c.assign(N + 1, 0);
    s.c[0] = 1;
    for (unsigned n = 1; n <= N; ++n) {
        mpz_class v = profile.d * s.c[n - 1];
        for (const auto& [i, r] : profile.r)
            if (i >= 2 && i <= n) v -= r * s.c[n - i];
        if (v < 0) {
            v = 0;
            s.clamped = true;
        }
        s.c[n] = v;
    }
    return s;
}

// ---------------------------------------------------------------- certificates

mpq_class gs_polynomial(const DegreeProfile& profile, unsigned m, const mpq_class& t) {
    mpq_class v = 1 - mpq_class(profile.d) * t;
    mpq_class power = t;
    for (unsigned i = 2; i <= m; ++i) {
        power *= t;
        mpz_class r = profile.count(i);
        if (r != 0) v += mpq_class(r) * power;
    }
    return v;
}

namespace {

mpq_class frac(unsigned long p, unsigned long q) {
    mpq_class v(p, q);
    v.canonicalize();
    return v;
}

mpq_class gs_derivative(const DegreeProfile& profile, unsigned m, const mpq_class& t) {
    mpq_class v = -mpq_class(profile.d);
    mpq_class power = 1;
    for (unsigned i = 2; i <= m; ++i) {
        power *= t;
        mpz_class r = profile.count(i);
        if (r != 0) v += mpq_class(r * i) * power;
    }
    return v;
}

}  // namespace

CertificateSearch certify_infinite(const DegreeProfile& profile, unsigned m, const SearchParams& params) {
    if (m < 2) throw InvalidArgument("partial degree m must be at least 2");
    if (params.grid < 2 || params.max_grid < params.grid || params.max_denominator == 0)
        throw InvalidArgument("search grid must be >= 2, max_grid >= grid and max_denominator >= 1");
    profile.validate();
    auto P = [&](const mpq_class& t) { return gs_polynomial(profile, m, t); };
    auto dP = [&](const mpq_class& t) { return gs_derivative(profile, m, t); };

    CertificateSearch out;
    for (unsigned G = params.grid; G <= params.max_grid; G *= 2) {
        ++out.grids_scanned;
        unsigned best_k = 1;
        mpq_class best_v = P(frac(1, G));
        for (unsigned k = 2; k < G; ++k) {
            mpq_class v = P(frac(k, G));
            if (v < best_v) {
                best_v = v;
                best_k = k;
            }
        }
        mpq_class best_t = frac(best_k, G);
        out.grid_min = best_v;
        out.grid_argmin = best_t;

        mpq_class cand_t = best_t, cand_v = best_v;
        // An interior minimum sits in the neighbouring cell where P' changes sign.
        mpq_class slope = dP(best_t);
        std::optional<std::pair<mpq_class, mpq_class>> cell;
        if (slope < 0 && dP(frac(best_k + 1, G)) > 0)
            cell = {best_t, frac(best_k + 1, G)};
        else if (slope > 0 && dP(frac(best_k - 1, G)) < 0)
            cell = {frac(best_k - 1, G), best_t};
        if (cell) {
            cell->first.canonicalize();
            cell->second.canonicalize();
            mpq_class lo = cell->first, hi = cell->second;
            for (unsigned s = 0; s < params.bisection_steps; ++s) {
                mpq_class mid = (lo + hi) / 2;
                if (dP(mid) < 0)
                    lo = mid;
                else
                    hi = mid;
            }
            bool improved = false;
            for (unsigned q = 1; q <= params.max_denominator && !improved; ++q) {
                mpz_class p_lo, p_hi;
                mpq_class a = cell->first * q, b = cell->second * q;
                mpz_fdiv_q(p_lo.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
                mpz_cdiv_q(p_hi.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
                for (mpz_class p = p_lo + 1; p < p_hi; ++p) {
                    mpq_class t(p, q);
                    t.canonicalize();
                    mpq_class v = P(t);
                    if (v < cand_v) {
                        cand_v = v;
                        cand_t = t;
                        improved = true;
                    }
                }
            }
            if (!improved) {
                mpq_class v = P(lo);
                if (v < cand_v) {
                    cand_v = v;
                    cand_t = lo;
                }
            }
        }
        if (cand_v < 0) {
            out.witness = Certificate{m, cand_t, cand_v};
            return out;
        }
    }
    return out;
}

// ---------------------------------------------------------------- Hilbert series

SeriesBound hilbert_quotient(const std::vector<Element>& relations, unsigned d, unsigned N, Field field) {
    if (d == 0) throw InvalidArgument("generator count must be positive");
    if (N > kDefaultDegreeCap) throw CapExceeded("degree " + std::to_string(N) + " exceeds the cap " + std::to_string(kDefaultDegreeCap));
    std::map<unsigned, std::vector<SparseVec>> by_degree;
    for (const auto& f : relations) {
        if (f.is_zero()) continue;
        if (!(f.field() == field) || f.gens() != d) throw DegreeMismatch("relation " + f.to_string() + " is over a different algebra");
        if (!f.is_homogeneous()) throw InvalidArgument("inhomogeneous relation " + f.to_string() + "; use the quotient module");
        unsigned k = *f.order();
        if (k < 2) throw InvalidArgument("relation " + f.to_string() + " has degree below 2");
        if (k <= N) by_degree[k].push_back(f.component(k).to_sparse());
    }
    std::uint64_t top = word_count(d, N);
    // Dense worst case: top rows of top bit columns.
    check_memory(top / 8 * top, "Hilbert series up to degree " + std::to_string(N));

    SeriesBound s;
    s.c.assign(N + 1, 0);
    s.c[0] = 1;
    std::vector<SparseVec> prev;
    bool prev_full = false;
    for (unsigned n = 1; n <= N; ++n) {
        std::uint64_t width = word_count(d, n);
        if (prev_full) {
            s.c[n] = 0;
            continue;
        }
        RowSpace I(field, width);
        std::uint64_t shift = width / d;
        for (const auto& row : prev) {
            for (std::uint32_t a = 0; a < d && !I.full(); ++a) {
                SparseVec left = row, right = row;
                for (auto& e : left) e.first += a * shift;
                for (auto& e : right) e.first = e.first * d + a;
                I.insert(left);
                I.insert(right);
            }
            if (I.full()) break;
        }
        if (auto it = by_degree.find(n); it != by_degree.end())
            for (const auto& f : it->second) I.insert(f);
        s.c[n] = mpz_class(static_cast<unsigned long>(width - I.rank()));
        prev_full = I.full();
        prev = I.basis();
    }
    return s;
}

// ---------------------------------------------------------------- entropy

RootBound nth_root_bound(const mpz_class& a, unsigned n, unsigned bits) {
    if (n == 0) throw InvalidArgument("root index must be positive");
    if (a < 0) throw InvalidArgument("dimensions are nonnegative");
    RootBound b;
    b.n = n;
    mpz_class scaled = a << (bits * n);
    mpz_class root;
    int exact = mpz_root(root.get_mpz_t(), scaled.get_mpz_t(), n);
    mpz_class den = mpz_class(1) << bits;
    b.lower = mpq_class(root, den);
    b.lower.canonicalize();
    b.exact = exact != 0;
    b.upper = b.exact ? b.lower : mpq_class(root + 1, den);
    b.upper.canonicalize();
    return b;
}

EntropyEstimate entropy_estimate(const SeriesBound& dims, unsigned bits) {
    if (dims.c.size() < 4) throw InvalidArgument("entropy estimate needs at least four coefficients");
    EntropyEstimate e;
    e.N = dims.max_degree();
    unsigned first = (e.N + 1) / 2;
    bool any = false;
    for (unsigned n = std::max(first, 1u); n <= e.N; ++n) {
        if (dims.c[n] != 0) any = true;
        RootBound b = nth_root_bound(dims.c[n], n, bits);
        if (n == std::max(first, 1u) || b.lower > e.window.lower) {
            e.window.n = n;
            e.window.lower = b.lower;
        }
        if (n == std::max(first, 1u) || b.upper > e.window.upper) e.window.upper = b.upper;
    }
    if (!any) throw InvalidArgument("all dimensions in the window [N/2, N] vanish");
    e.window.exact = e.window.lower == e.window.upper;
    e.at_top = nth_root_bound(dims.c[e.N], e.N, bits);
    return e;
}

}  // namespace gsalg
