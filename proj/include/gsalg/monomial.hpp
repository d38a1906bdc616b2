#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gsalg {

/// Default degree cap for graded computations (columns grow like d^k).
inline constexpr unsigned kDefaultDegreeCap = 20;

/// Number of words of length k over d letters; throws CapExceeded past 2^62.
std::uint64_t word_count(unsigned d, unsigned k);

/// A word in the letters 0..d-1. The empty word is the unit monomial.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::vector<std::uint32_t> letters) : letters_(std::move(letters)) {}

    /// Word with lexicographic rank `index` among words of length k (first letter most significant).
    static Monomial from_index(std::uint64_t index, unsigned k, unsigned d);

    unsigned degree() const noexcept { return static_cast<unsigned>(letters_.size()); }
    const std::vector<std::uint32_t>& letters() const noexcept { return letters_; }

    /// Lexicographic rank among words of the same length, letter 0 < letter 1 < ...
    std::uint64_t index(unsigned d) const;

    /// Two-letter packing: bit `len` is a sentinel, letters below it, first letter highest. len <= 63.
    std::uint64_t pack() const;
    static Monomial unpack(std::uint64_t packed);

    Monomial operator*(const Monomial& o) const;

    /// "x*y*x" style; letters are x,y when d == 2 and x1..xd otherwise; "1" for the empty word.
    std::string to_string(unsigned d) const;

    friend bool operator==(const Monomial&, const Monomial&) = default;
    friend auto operator<=>(const Monomial&, const Monomial&) = default;

private:
    std::vector<std::uint32_t> letters_;
};

/// Name of letter i for a d-generator algebra.
std::string letter_name(std::uint32_t i, unsigned d);

/// Compact two-letter word text ("xyx") for an index of length k; used by ladder reports.
std::string word_text(std::uint64_t index, unsigned k);
/// Inverse of word_text; accepts only 'x' and 'y'.
std::uint64_t parse_word_text(std::string_view text);

}  // namespace gsalg
