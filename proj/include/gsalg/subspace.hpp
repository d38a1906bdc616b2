#pragma once

#include <vector>

#include <json.hpp>

#include "gsalg/element.hpp"
#include "gsalg/row_space.hpp"

namespace gsalg {

/// A subspace of A(k), columns indexed by degree-k words in lexicographic order.
class Subspace {
public:
    Subspace(Field field, unsigned d, unsigned degree);

    /// Row-reduced span; all vectors must share one degree and algebra.
    static Subspace span(Field field, unsigned d, unsigned degree, const std::vector<HomogeneousElement>& vectors);

    const Field& field() const noexcept { return rows_.field(); }
    unsigned gens() const noexcept { return d_; }
    unsigned degree() const noexcept { return degree_; }
    std::size_t dim() const noexcept { return rows_.rank(); }
    std::uint64_t ambient_dim() const noexcept { return rows_.ncols(); }
    std::uint64_t codim() const noexcept { return ambient_dim() - dim(); }

    /// Returns true when v was independent of the current rows.
    bool add(const HomogeneousElement& v);
    bool contains(const HomogeneousElement& v) const;

    /// Reduced row-echelon basis.
    std::vector<HomogeneousElement> basis() const;
    const RowSpace& rows() const noexcept { return rows_; }

    Subspace sum(const Subspace& o) const;
    /// Zassenhaus intersection.
    Subspace intersect(const Subspace& o) const;

    /// {"degree", "field", "rows": [{"word": "coeff", ...}, ...]}
    nlohmann::json to_json() const;

    /// Same row space (reduced echelon forms agree).
    friend bool operator==(const Subspace& a, const Subspace& b);

private:
    void check(const HomogeneousElement& v) const;
    void check(const Subspace& o) const;

    unsigned d_;
    unsigned degree_;
    RowSpace rows_;
};

}  // namespace gsalg
