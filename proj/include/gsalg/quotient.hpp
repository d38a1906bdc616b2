#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gsalg/element.hpp"
#include "gsalg/row_space.hpp"

namespace gsalg {

/// Coordinates of F_{<=D} = A(1) + ... + A(D): degree-ascending, lex inside a degree.
class TruncatedLayout {
public:
    TruncatedLayout(unsigned n, unsigned D);

    unsigned gens() const noexcept { return n_; }
    unsigned precision() const noexcept { return D_; }
    std::uint64_t ncols() const noexcept { return offset_.back(); }
    std::uint64_t column(unsigned degree, std::uint64_t word) const { return offset_[degree - 1] + word; }
    unsigned degree_of(std::uint64_t col) const;

private:
    unsigned n_, D_;
    std::vector<std::uint64_t> offset_;
};

/// Largest default precision: 10 for two generators, otherwise the largest D with at most
/// 2^14 coordinates (and never above 10).
unsigned default_precision_cap(unsigned n);

/// (I + F^(D+1)) inside F_{<=D}, spanned by the truncations of u f v over relations f and
/// words u, v. Pivots are lowest-degree columns, so pivot counts per degree give the
/// associated graded of the order filtration.
class TruncatedIdeal {
public:
    TruncatedIdeal(Field field, unsigned n, unsigned D);

    const Field& field() const noexcept { return field_; }
    unsigned gens() const noexcept { return layout_.gens(); }
    unsigned precision() const noexcept { return layout_.precision(); }
    const TruncatedLayout& layout() const noexcept { return layout_; }
    const RowSpace& span() const noexcept { return span_; }

    /// Adds all truncated products u f v; f must have order >= 2. Rows are generated by
    /// increasing |u| + |v| and stop once every column they could lead in is a pivot.
    void add_relations(const std::vector<Element>& relations);
    void add_relation(const Element& f);
    /// Components of degree 1..D; a constant term is rejected.
    SparseVec embed(const Element& e) const;
    bool contains(const Element& e) const;

    /// dim of the degree-k piece of the quotient, k = 1..D (index k-1).
    std::vector<std::uint64_t> quotient_dims() const;
    /// dim F_{<=D} / (I + F^(D+1)).
    std::uint64_t dim() const;

private:
    Field field_;
    TruncatedLayout layout_;
    RowSpace span_;
};

/// Throws InvalidArgument for relations of order < 2, CapExceeded above `cap`
/// (default_precision_cap when absent) or the memory guard.
TruncatedIdeal truncated_ideal_basis(const std::vector<Element>& relations, unsigned n, unsigned D,
                                     std::optional<unsigned> cap = std::nullopt);

struct FinDimCertificate {
    bool certified = false;
    /// Least k with every quotient degree k..D zero.
    std::optional<unsigned> k;
    unsigned precision = 0;
    std::vector<std::uint64_t> dims;

    nlohmann::json to_json() const;
};

FinDimCertificate certify_finite_dimensional(const TruncatedIdeal& ideal);
FinDimCertificate certify_finite_dimensional(const std::vector<Element>& relations, unsigned n, unsigned D);

struct CommutativityStatus {
    /// Sound: some commutator x_i x_j - x_j x_i lies outside I + F^(D+1), hence outside I.
    bool noncommutative = false;
    /// 1-based generator indices of the first commutator found outside the ideal.
    std::optional<std::pair<unsigned, unsigned>> witness;
    unsigned precision = 0;

    std::string status() const;
    nlohmann::json to_json() const;
};

CommutativityStatus commutativity_status(const TruncatedIdeal& ideal);
CommutativityStatus commutativity_status(const std::vector<Element>& relations, unsigned n, unsigned D);

struct RelationThreshold {
    unsigned n = 0;
    /// 2 for n = 2, n(n+1)/2 - 2 otherwise: at most this many relations never give a
    /// finite-dimensional commutative quotient.
    std::uint64_t threshold = 0;
    /// n(n+1)/2 relations {x_i x_j - x_j x_i, x_i^2} give one.
    std::uint64_t construction_size = 0;
    /// n(n+1)/2 - 1: undecided for n >= 3; equal to the threshold for n = 2.
    std::uint64_t open_gap = 0;

    nlohmann::json to_json() const;
};

RelationThreshold relation_threshold(unsigned n);

/// {x_i x_j - x_j x_i : i < j} and {x_i^2}.
std::vector<Element> commutative_construction(unsigned n, Field field);

/// `count` relations, each a sum over words of degree min_order..max_degree with coefficients
/// uniform in {-1, 0, 1}, redrawn until nonzero.
std::vector<Element> random_presentation(std::mt19937_64& rng, unsigned n, unsigned count, unsigned min_order, unsigned max_degree,
                                         Field field);

/// {findim: {...}, commutativity: {...}, threshold: {...}}.
nlohmann::json quotient_verdict(const TruncatedIdeal& ideal);

struct GapExploration {
    unsigned n = 0, relations = 0, precision = 0, max_degree = 0, trials = 0;
    std::uint64_t seed = 0;
    unsigned certified = 0;
    unsigned certified_commutative = 0;
    /// First certified presentation that stays commutative at precision D.
    std::vector<std::string> example;

    nlohmann::json to_json() const;
};

/// Random search at n(n+1)/2 - 1 relations for a finite-dimensional quotient that is
/// commutative at precision D. Exploratory only.
GapExploration explore_gap(unsigned n, unsigned D, unsigned trials, std::uint64_t seed, unsigned max_degree, Field field);

}  // namespace gsalg
