#include "gsalg/subspace.hpp"

#include "gsalg/error.hpp"

namespace gsalg {

Subspace::Subspace(Field field, unsigned d, unsigned degree) : d_(d), degree_(degree), rows_(field, word_count(d, degree)) {}

Subspace Subspace::span(Field field, unsigned d, unsigned degree, const std::vector<HomogeneousElement>& vectors) {
    Subspace s(field, d, degree);
    for (const auto& v : vectors) s.add(v);
    return s;
}

void Subspace::check(const HomogeneousElement& v) const {
    if (v.degree() != degree_) throw DegreeMismatch("vector of degree " + std::to_string(v.degree()) + " in a subspace of A(" + std::to_string(degree_) + ")");
    if (v.gens() != d_ || !(v.field() == field())) throw DegreeMismatch("vector from a different algebra");
}

void Subspace::check(const Subspace& o) const {
    if (o.degree_ != degree_ || o.d_ != d_ || !(o.field() == field()))
        throw DegreeMismatch("subspaces of different graded pieces");
}

bool Subspace::add(const HomogeneousElement& v) {
    check(v);
    return rows_.insert(v.to_sparse());
}

bool Subspace::contains(const HomogeneousElement& v) const {
    check(v);
    return rows_.contains(v.to_sparse());
}

std::vector<HomogeneousElement> Subspace::basis() const {
    std::vector<HomogeneousElement> out;
    for (const auto& r : rows_.basis()) out.push_back(HomogeneousElement::from_sparse(field(), d_, degree_, r));
    return out;
}

Subspace Subspace::sum(const Subspace& o) const {
    check(o);
    Subspace r = *this;
    for (const auto& v : o.rows_.basis()) r.rows_.insert(v);
    return r;
}

Subspace Subspace::intersect(const Subspace& o) const {
    check(o);
    // Rows (a | a) for a in S and (b | 0) for b in T; echelon rows whose left half
    // vanishes carry S ∩ T in their right half.
    std::uint64_t n = ambient_dim();
    RowSpace z(field(), 2 * n);
    for (const auto& a : rows_.basis()) {
        SparseVec row = a;
        for (const auto& [c, s] : a) row.emplace_back(c + n, s);
        z.insert(row);
    }
    for (const auto& b : o.rows_.basis()) z.insert(b);
    Subspace r(field(), d_, degree_);
    for (const auto& row : z.basis()) {
        if (row.front().first < n) continue;
        SparseVec right;
        for (const auto& [c, s] : row) right.emplace_back(c - n, s);
        r.rows_.insert(right);
    }
    return r;
}

nlohmann::json Subspace::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : rows_.basis()) {
        nlohmann::json row = nlohmann::json::object();
        for (const auto& [c, s] : r) row[Monomial::from_index(c, degree_, d_).to_string(d_)] = s.to_signed_string();
        rows.push_back(row);
    }
    return {{"degree", degree_}, {"field", field().to_string()}, {"dim", dim()}, {"rows", rows}};
}

bool operator==(const Subspace& a, const Subspace& b) {
    if (a.degree_ != b.degree_ || a.d_ != b.d_ || !(a.field() == b.field()) || a.dim() != b.dim()) return false;
    return a.rows_.basis() == b.rows_.basis();
}

}  // namespace gsalg
