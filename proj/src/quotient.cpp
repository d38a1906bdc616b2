#include "gsalg/quotient.hpp"

#include <algorithm>

#include "gsalg/error.hpp"
#include "gsalg/limits.hpp"

namespace gsalg {

TruncatedLayout::TruncatedLayout(unsigned n, unsigned D) : n_(n), D_(D) {
    if (n == 0) throw InvalidArgument("generator count must be positive");
    if (D == 0) throw InvalidArgument("precision must be at least 1");
    offset_.push_back(0);
    for (unsigned k = 1; k <= D; ++k) offset_.push_back(offset_.back() + word_count(n, k));
}

unsigned TruncatedLayout::degree_of(std::uint64_t col) const {
    for (unsigned k = 1; k <= D_; ++k)
        if (col < offset_[k]) return k;
    throw InvalidArgument("column " + std::to_string(col) + " outside F_{<=" + std::to_string(D_) + "}");
}

unsigned default_precision_cap(unsigned n) {
    if (n == 0) throw InvalidArgument("generator count must be positive");
    if (n <= 2) return 10;
    constexpr std::uint64_t kMaxCols = 1u << 14;
    constexpr unsigned kMaxPrecision = 10;
    std::uint64_t total = 0, power = 1;
    unsigned D = 0;
    while (D < kMaxPrecision) {
        power *= n;
        if (total + power > kMaxCols) break;
        total += power;
        ++D;
    }
    return D;
}

TruncatedIdeal::TruncatedIdeal(Field field, unsigned n, unsigned D) : field_(field), layout_(n, D), span_(field, layout_.ncols()) {}

SparseVec TruncatedIdeal::embed(const Element& e) const {
    if (!(e.field() == field_) || e.gens() != gens()) throw DegreeMismatch("element " + e.to_string() + " is over a different algebra");
    SparseVec v;
    for (const auto& [deg, part] : e.components()) {
        if (deg == 0) throw InvalidArgument("element " + e.to_string() + " has a constant term");
        if (deg > precision()) break;
        for (const auto& [w, c] : part.terms()) v.emplace_back(layout_.column(deg, w), c);
    }
    return v;
}

bool TruncatedIdeal::contains(const Element& e) const { return span_.contains(embed(e)); }

void TruncatedIdeal::add_relation(const Element& f) { add_relations({f}); }

void TruncatedIdeal::add_relations(const std::vector<Element>& relations) {
    struct Prepared {
        unsigned ord;
        std::vector<std::pair<unsigned, std::vector<std::pair<std::uint64_t, Scalar>>>> parts;
    };
    const unsigned D = precision();
    std::vector<Prepared> prepared;
    for (const auto& f : relations) {
        if (f.is_zero()) continue;
        if (!(f.field() == field_) || f.gens() != gens()) throw DegreeMismatch("relation " + f.to_string() + " is over a different algebra");
        unsigned ord = *f.order();
        if (ord < 2) throw InvalidArgument("relation " + f.to_string() + " has order " + std::to_string(ord) + "; relations need order >= 2");
        Prepared p{ord, {}};
        for (const auto& [deg, part] : f.components())
            if (deg <= D) p.parts.emplace_back(deg, std::vector<std::pair<std::uint64_t, Scalar>>(part.terms().begin(), part.terms().end()));
        prepared.push_back(std::move(p));
    }
    // Rows u f v ordered by s = |u| + |v| across relations; a row starts in degree s + ord(f).
    auto tail_full = [&](unsigned from_degree) {
        if (from_degree > D) return true;
        std::uint64_t c0 = layout_.column(from_degree, 0);
        auto piv = span_.pivot_columns();
        auto it = std::lower_bound(piv.begin(), piv.end(), c0);
        return static_cast<std::uint64_t>(piv.end() - it) == layout_.ncols() - c0;
    };
    for (unsigned s = 0; s + 2 <= D; ++s) {
        if (tail_full(s + 2)) return;
        for (const auto& p : prepared) {
            if (s + p.ord > D) continue;
            for (unsigned a = 0; a <= s; ++a) {
                unsigned b = s - a;
                std::uint64_t nu = word_count(gens(), a), nv = word_count(gens(), b);
                for (std::uint64_t u = 0; u < nu; ++u)
                    for (std::uint64_t v = 0; v < nv; ++v) {
                        SparseVec row;
                        for (const auto& [g, terms] : p.parts) {
                            if (s + g > D) break;
                            std::uint64_t wg = word_count(gens(), g);
                            for (const auto& [w, c] : terms) row.emplace_back(layout_.column(s + g, (u * wg + w) * nv + v), c);
                        }
                        span_.insert(row);
                    }
            }
        }
    }
}

std::vector<std::uint64_t> TruncatedIdeal::quotient_dims() const {
    std::vector<std::uint64_t> dims;
    for (unsigned k = 1; k <= precision(); ++k) dims.push_back(word_count(gens(), k));
    for (auto c : span_.pivot_columns()) --dims[layout_.degree_of(c) - 1];
    return dims;
}

std::uint64_t TruncatedIdeal::dim() const { return layout_.ncols() - span_.rank(); }

TruncatedIdeal truncated_ideal_basis(const std::vector<Element>& relations, unsigned n, unsigned D, std::optional<unsigned> cap) {
    unsigned limit = cap ? *cap : default_precision_cap(n);
    if (D > limit) throw CapExceeded("precision " + std::to_string(D) + " exceeds the cap " + std::to_string(limit) + " for " + std::to_string(n) + " generators");
    Field field = relations.empty() ? Field::rational() : relations.front().field();
    TruncatedLayout layout(n, D);
    // Dense worst case: ncols rows of ncols bits.
    check_memory(layout.ncols() / 8 * layout.ncols(), "truncated ideal at precision " + std::to_string(D));
    TruncatedIdeal ideal(field, n, D);
    ideal.add_relations(relations);
    return ideal;
}

// ---------------------------------------------------------------- verdicts

nlohmann::json FinDimCertificate::to_json() const {
    nlohmann::json j{{"certified", certified}, {"precision", precision}, {"dims", dims}};
    j["k"] = k ? nlohmann::json(*k) : nlohmann::json(nullptr);
    if (certified)
        j["reading"] = {{"power_series", "power-series-complete: F^k inside I"},
                        {"free_algebra", "nilpotency up to D: F^k inside I + F^(D+1)"}};
    else
        j["reading"] = "not certified at precision " + std::to_string(precision) + " (inconclusive)";
    return j;
}

FinDimCertificate certify_finite_dimensional(const TruncatedIdeal& ideal) {
    FinDimCertificate c;
    c.precision = ideal.precision();
    c.dims = ideal.quotient_dims();
    unsigned k = ideal.precision() + 1;
    while (k > 1 && c.dims[k - 2] == 0) --k;
    if (k <= ideal.precision()) {
        c.certified = true;
        c.k = k;
        std::uint64_t words = word_count(ideal.gens(), k);
        for (std::uint64_t w = 0; w < words; ++w) {
            SparseVec mono{{ideal.layout().column(k, w), Scalar::one(ideal.field())}};
            if (!ideal.span().contains(mono)) throw PropertyViolation("degree-" + std::to_string(k) + " word " + std::to_string(w) + " escaped the ideal");
        }
    }
    return c;
}

FinDimCertificate certify_finite_dimensional(const std::vector<Element>& relations, unsigned n, unsigned D) {
    return certify_finite_dimensional(truncated_ideal_basis(relations, n, D));
}

std::string CommutativityStatus::status() const {
    return noncommutative ? "noncommutative" : "commutative-at-precision-" + std::to_string(precision);
}

nlohmann::json CommutativityStatus::to_json() const {
    nlohmann::json j{{"status", status()}, {"precision", precision}};
    j["witness"] = witness ? nlohmann::json{witness->first, witness->second} : nlohmann::json(nullptr);
    return j;
}

CommutativityStatus commutativity_status(const TruncatedIdeal& ideal) {
    if (ideal.precision() < 2) throw InvalidArgument("commutators need precision >= 2");
    CommutativityStatus s;
    s.precision = ideal.precision();
    const std::uint64_t n = ideal.gens();
    Scalar one = Scalar::one(ideal.field());
    for (std::uint64_t i = 0; i < n && !s.noncommutative; ++i)
        for (std::uint64_t j = i + 1; j < n; ++j) {
            SparseVec comm{{ideal.layout().column(2, i * n + j), one}, {ideal.layout().column(2, j * n + i), -one}};
            if (!ideal.span().contains(comm)) {
                s.noncommutative = true;
                s.witness = {static_cast<unsigned>(i + 1), static_cast<unsigned>(j + 1)};
                break;
            }
        }
    return s;
}

CommutativityStatus commutativity_status(const std::vector<Element>& relations, unsigned n, unsigned D) {
    return commutativity_status(truncated_ideal_basis(relations, n, D));
}

nlohmann::json RelationThreshold::to_json() const {
    return {{"n", n},
            {"threshold", threshold},
            {"construction_size", construction_size},
            {"open_gap", open_gap},
            {"open_gap_status", open_gap <= threshold ? "closed: covered by the threshold" : "undecided"}};
}

RelationThreshold relation_threshold(unsigned n) {
    if (n < 2) throw InvalidArgument("the relation threshold needs n >= 2");
    RelationThreshold t;
    t.n = n;
    t.construction_size = std::uint64_t{n} * (n + 1) / 2;
    t.threshold = n == 2 ? 2 : t.construction_size - 2;
    t.open_gap = t.construction_size - 1;
    return t;
}

std::vector<Element> commutative_construction(unsigned n, Field field) {
    std::vector<Element> rel;
    Scalar one = Scalar::one(field);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j) {
            Element c(field, n);
            c.add_term(Monomial({i, j}), one);
            c.add_term(Monomial({j, i}), -one);
            rel.push_back(c);
        }
    for (std::uint32_t i = 0; i < n; ++i) {
        Element sq(field, n);
        sq.add_term(Monomial({i, i}), one);
        rel.push_back(sq);
    }
    return rel;
}

std::vector<Element> random_presentation(std::mt19937_64& rng, unsigned n, unsigned count, unsigned min_order, unsigned max_degree, Field field) {
    if (min_order < 2 || max_degree < min_order) throw InvalidArgument("random relations need 2 <= min_order <= max_degree");
    std::uniform_int_distribution<int> coin(-1, 1);
    std::vector<Element> rel;
    while (rel.size() < count) {
        Element f(field, n);
        for (unsigned k = min_order; k <= max_degree; ++k)
            for (std::uint64_t w = 0; w < word_count(n, k); ++w)
                if (int c = coin(rng)) f.add_term(Monomial::from_index(w, k, n), Scalar(field, static_cast<long>(c)));
        if (!f.is_zero()) rel.push_back(std::move(f));
    }
    return rel;
}

nlohmann::json quotient_verdict(const TruncatedIdeal& ideal) {
    nlohmann::json j{{"findim", certify_finite_dimensional(ideal).to_json()}, {"commutativity", commutativity_status(ideal).to_json()}};
    j["threshold"] = ideal.gens() >= 2 ? relation_threshold(ideal.gens()).to_json() : nlohmann::json(nullptr);
    return j;
}

nlohmann::json GapExploration::to_json() const {
    return {{"n", n},
            {"relations", relations},
            {"precision", precision},
            {"max_degree", max_degree},
            {"trials", trials},
            {"seed", seed},
            {"certified_finite_dimensional", certified},
            {"certified_and_commutative_at_precision", certified_commutative},
            {"example", example}};
}

GapExploration explore_gap(unsigned n, unsigned D, unsigned trials, std::uint64_t seed, unsigned max_degree, Field field) {
    RelationThreshold t = relation_threshold(n);
    GapExploration g;
    g.n = n;
    g.relations = static_cast<unsigned>(t.open_gap);
    g.precision = D;
    g.max_degree = max_degree;
    g.trials = trials;
    g.seed = seed;
    std::mt19937_64 rng(seed);
    for (unsigned i = 0; i < trials; ++i) {
        auto rel = random_presentation(rng, n, g.relations, 2, max_degree, field);
        TruncatedIdeal ideal = truncated_ideal_basis(rel, n, D);
        if (!certify_finite_dimensional(ideal).certified) continue;
        ++g.certified;
        if (commutativity_status(ideal).noncommutative) continue;
        ++g.certified_commutative;
        if (g.example.empty())
            for (const auto& f : rel) g.example.push_back(f.to_string());
    }
    return g;
}

}  // namespace gsalg
