#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gsalg/field.hpp"
#include "gsalg/monomial.hpp"

namespace gsalg {

/// Sparse vector: (column, coefficient) pairs with strictly increasing columns and no zeros.
using SparseVec = std::vector<std::pair<std::uint64_t, Scalar>>;

/// Element of A(k): coefficients keyed by the lexicographic index of degree-k words.
class HomogeneousElement {
public:
    HomogeneousElement(Field field, unsigned d, unsigned degree);

    const Field& field() const noexcept { return field_; }
    unsigned gens() const noexcept { return d_; }
    unsigned degree() const noexcept { return degree_; }
    const std::map<std::uint64_t, Scalar>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    Scalar coeff(std::uint64_t index) const;
    /// Adds c to the coefficient of word `index`, dropping the entry if it cancels.
    void add_term(std::uint64_t index, const Scalar& c);

    HomogeneousElement operator+(const HomogeneousElement& o) const;
    HomogeneousElement operator-(const HomogeneousElement& o) const;
    HomogeneousElement scaled(const Scalar& c) const;
    HomogeneousElement operator*(const HomogeneousElement& o) const;

    SparseVec to_sparse() const;
    static HomogeneousElement from_sparse(Field field, unsigned d, unsigned degree, const SparseVec& v);

    friend bool operator==(const HomogeneousElement& a, const HomogeneousElement& b) {
        return a.field_ == b.field_ && a.d_ == b.d_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
    }

private:
    void check_compatible(const HomogeneousElement& o) const;

    Field field_;
    unsigned d_;
    unsigned degree_;
    std::map<std::uint64_t, Scalar> terms_;
};

/// Element of the free algebra (with the unit allowed as a constant term): a sum of homogeneous parts.
class Element {
public:
    Element(Field field, unsigned d, unsigned degree_cap = kDefaultDegreeCap);

    static Element constant(Field field, unsigned d, const Scalar& c, unsigned degree_cap = kDefaultDegreeCap);
    static Element generator(Field field, unsigned d, std::uint32_t letter, unsigned degree_cap = kDefaultDegreeCap);
    static Element from_homogeneous(const HomogeneousElement& h, unsigned degree_cap = kDefaultDegreeCap);

    const Field& field() const noexcept { return field_; }
    unsigned gens() const noexcept { return d_; }
    unsigned degree_cap() const noexcept { return cap_; }
    const std::map<unsigned, HomogeneousElement>& components() const noexcept { return parts_; }
    bool is_zero() const noexcept { return parts_.empty(); }

    /// Least degree with a nonzero component; nullopt for zero.
    std::optional<unsigned> order() const;
    std::optional<unsigned> top_degree() const;
    bool is_homogeneous() const noexcept { return parts_.size() == 1; }
    /// The degree-k component (zero if absent).
    HomogeneousElement component(unsigned k) const;

    void add_term(const Monomial& m, const Scalar& c);

    Element operator+(const Element& o) const;
    Element operator-(const Element& o) const;
    Element operator-() const;
    Element scaled(const Scalar& c) const;
    /// Concatenation product; throws CapExceeded if a product degree passes the cap.
    Element operator*(const Element& o) const;
    Element pow(unsigned e) const;

    /// Canonical text: degree-ascending, then lexicographic; re-parses to an identical element.
    std::string to_string() const;

    friend bool operator==(const Element& a, const Element& b) {
        return a.field_ == b.field_ && a.d_ == b.d_ && a.parts_ == b.parts_;
    }

private:
    void check_compatible(const Element& o) const;
    void add_component(const HomogeneousElement& h);

    Field field_;
    unsigned d_;
    unsigned cap_;
    std::map<unsigned, HomogeneousElement> parts_;
};

}  // namespace gsalg
