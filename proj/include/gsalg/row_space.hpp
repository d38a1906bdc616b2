#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "gsalg/bitvec.hpp"
#include "gsalg/element.hpp"
#include "gsalg/field.hpp"

namespace gsalg {

/// Incrementally built row space over GF(2) (dense bit rows), GF(p) or Q (sparse rows).
///
/// Rows are kept in semi-echelon form: each stored row has a distinct leading
/// column, normalized to 1, and is reduced against rows stored before it.
/// `basis()` returns the reduced row-echelon form.
class RowSpace {
public:
    RowSpace(Field field, std::uint64_t ncols);
    ~RowSpace();
    RowSpace(const RowSpace& o);
    RowSpace& operator=(const RowSpace& o);
    RowSpace(RowSpace&&) noexcept;
    RowSpace& operator=(RowSpace&&) noexcept;

    const Field& field() const noexcept;
    std::uint64_t ncols() const noexcept;
    std::size_t rank() const noexcept;
    bool full() const noexcept { return rank() == ncols(); }

    /// Adds a row; returns true when the rank grew.
    bool insert(const SparseVec& v);
    /// GF(2) only.
    bool insert(const BitVec& v);

    /// Remainder of v after full reduction against the stored rows.
    SparseVec reduce(const SparseVec& v) const;
    bool contains(const SparseVec& v) const;
    /// GF(2) only.
    BitVec reduce(const BitVec& v) const;
    bool contains(const BitVec& v) const;

    /// Leading columns in increasing order.
    std::vector<std::uint64_t> pivot_columns() const;
    /// Reduced row-echelon basis, sorted by pivot column.
    std::vector<SparseVec> basis() const;
    /// GF(2) only: reduced row-echelon basis as bit rows.
    std::vector<BitVec> basis_bits() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace gsalg
