#pragma once

// Dense GF(2) span used as an independent oracle in tests: rows keyed by lowest set bit.

#include <bit>
#include <cstdint>
#include <map>
#include <vector>

namespace oracle {

using Bits = std::vector<std::uint64_t>;

inline Bits zeros(std::uint64_t n) { return Bits((n + 63) / 64, 0); }
inline void flip(Bits& b, std::uint64_t i) { b[i >> 6] ^= std::uint64_t{1} << (i & 63); }
inline bool any(const Bits& b) {
    for (auto w : b)
        if (w) return true;
    return false;
}
inline std::uint64_t lowest(const Bits& b) {
    for (std::size_t i = 0; i < b.size(); ++i)
        if (b[i]) return (i << 6) + static_cast<std::uint64_t>(std::countr_zero(b[i]));
    return ~std::uint64_t{0};
}

class Span {
public:
    explicit Span(std::uint64_t n) : n_(n) {}

    Bits reduce(Bits v) const {
        while (any(v)) {
            auto it = rows_.find(lowest(v));
            if (it == rows_.end()) break;
            for (std::size_t i = 0; i < v.size(); ++i) v[i] ^= it->second[i];
        }
        return v;
    }
    bool insert(const Bits& v) {
        Bits r = reduce(v);
        if (!any(r)) return false;
        rows_.emplace(lowest(r), std::move(r));
        return true;
    }
    bool contains(const Bits& v) const { return !any(reduce(v)); }
    std::size_t rank() const { return rows_.size(); }
    std::uint64_t size() const { return n_; }
    std::vector<Bits> rows() const {
        std::vector<Bits> out;
        for (const auto& [k, r] : rows_) out.push_back(r);
        return out;
    }

private:
    std::uint64_t n_;
    std::map<std::uint64_t, Bits> rows_;
};

}  // namespace oracle
