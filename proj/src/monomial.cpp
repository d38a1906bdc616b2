#include "gsalg/monomial.hpp"

#include "gsalg/error.hpp"

namespace gsalg {

std::uint64_t word_count(unsigned d, unsigned k) {
    std::uint64_t n = 1;
    for (unsigned i = 0; i < k; ++i) {
        if (n > (std::uint64_t{1} << 62) / d) throw CapExceeded("A(" + std::to_string(k) + ") on " + std::to_string(d) + " generators is too large to index");
        n *= d;
    }
    return n;
}

Monomial Monomial::from_index(std::uint64_t index, unsigned k, unsigned d) {
    std::vector<std::uint32_t> letters(k);
    for (unsigned i = k; i-- > 0;) {
        letters[i] = static_cast<std::uint32_t>(index % d);
        index /= d;
    }
    return Monomial(std::move(letters));
}

std::uint64_t Monomial::index(unsigned d) const {
    std::uint64_t idx = 0;
    for (auto l : letters_) idx = idx * d + l;
    return idx;
}

std::uint64_t Monomial::pack() const {
    if (letters_.size() > 63) throw CapExceeded("packed words hold at most 63 letters");
    std::uint64_t p = 1;
    for (auto l : letters_) {
        if (l > 1) throw InvalidArgument("packing needs a two-letter alphabet");
        p = (p << 1) | l;
    }
    return p;
}

Monomial Monomial::unpack(std::uint64_t packed) {
    if (packed == 0) throw InvalidArgument("packed word lacks its sentinel bit");
    unsigned len = 63 - static_cast<unsigned>(__builtin_clzll(packed));
    std::vector<std::uint32_t> letters(len);
    for (unsigned i = 0; i < len; ++i) letters[i] = (packed >> (len - 1 - i)) & 1u;
    return Monomial(std::move(letters));
}

Monomial Monomial::operator*(const Monomial& o) const {
    std::vector<std::uint32_t> l = letters_;
    l.insert(l.end(), o.letters_.begin(), o.letters_.end());
    return Monomial(std::move(l));
}

std::string letter_name(std::uint32_t i, unsigned d) {
    if (d == 2) return i == 0 ? "x" : "y";
    return "x" + std::to_string(i + 1);
}

std::string Monomial::to_string(unsigned d) const {
    if (letters_.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (i) out += '*';
        out += letter_name(letters_[i], d);
    }
    return out;
}

std::string word_text(std::uint64_t index, unsigned k) {
    std::string s(k, 'x');
    for (unsigned i = 0; i < k; ++i)
        if ((index >> (k - 1 - i)) & 1u) s[i] = 'y';
    return s;
}

std::uint64_t parse_word_text(std::string_view text) {
    if (text.size() > 63) throw CapExceeded("word longer than 63 letters");
    std::uint64_t idx = 0;
    for (char c : text) {
        if (c != 'x' && c != 'y') throw ParseError("word '" + std::string(text) + "' may only contain x and y");
        idx = (idx << 1) | (c == 'y' ? 1u : 0u);
    }
    return idx;
}

}  // namespace gsalg
