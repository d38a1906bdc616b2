#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <vector>

namespace gsalg {

/// Dense GF(2) vector packed into 64-bit words.
class BitVec {
public:
    static constexpr std::uint64_t npos = ~std::uint64_t{0};

    BitVec() = default;
    explicit BitVec(std::uint64_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    std::uint64_t size() const noexcept { return nbits_; }
    std::size_t word_count() const noexcept { return words_.size(); }
    const std::vector<std::uint64_t>& words() const noexcept { return words_; }
    std::vector<std::uint64_t>& words() noexcept { return words_; }

    bool test(std::uint64_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::uint64_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::uint64_t i) noexcept { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    void flip(std::uint64_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    BitVec& operator^=(const BitVec& other) noexcept {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
        return *this;
    }

    /// XOR restricted to words at index >= first_word (other is zero below it).
    void xor_from(const BitVec& other, std::size_t first_word) noexcept {
        for (std::size_t w = first_word; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    }

    bool any() const noexcept {
        for (auto w : words_)
            if (w) return true;
        return false;
    }

    std::uint64_t popcount() const noexcept {
        std::uint64_t c = 0;
        for (auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
        return c;
    }

    /// Lowest set index at or after `from`, or npos.
    std::uint64_t find_next(std::uint64_t from) const noexcept {
        if (from >= nbits_) return npos;
        std::size_t w = from >> 6;
        std::uint64_t word = words_[w] & (~std::uint64_t{0} << (from & 63));
        while (true) {
            if (word) return (static_cast<std::uint64_t>(w) << 6) + std::countr_zero(word);
            if (++w >= words_.size()) return npos;
            word = words_[w];
        }
    }

    std::uint64_t find_first() const noexcept { return find_next(0); }

    template <class F>
    void for_each_set(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t word = words_[w];
            while (word) {
                f((static_cast<std::uint64_t>(w) << 6) + std::countr_zero(word));
                word &= word - 1;
            }
        }
    }

    std::vector<std::uint64_t> set_indices() const {
        std::vector<std::uint64_t> out;
        for_each_set([&](std::uint64_t i) { out.push_back(i); });
        return out;
    }

    friend bool operator==(const BitVec&, const BitVec&) = default;

private:
    std::uint64_t nbits_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace gsalg
