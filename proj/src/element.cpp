#include "gsalg/element.hpp"

#include "gsalg/error.hpp"

namespace gsalg {

HomogeneousElement::HomogeneousElement(Field field, unsigned d, unsigned degree) : field_(field), d_(d), degree_(degree) {
    if (d == 0) throw InvalidArgument("generator count must be positive");
    word_count(d, degree);
}

void HomogeneousElement::check_compatible(const HomogeneousElement& o) const {
    if (!(field_ == o.field_) || d_ != o.d_) throw DegreeMismatch("elements over different algebras");
}

Scalar HomogeneousElement::coeff(std::uint64_t index) const {
    auto it = terms_.find(index);
    return it == terms_.end() ? Scalar::zero(field_) : it->second;
}

void HomogeneousElement::add_term(std::uint64_t index, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(index, c);
    if (inserted) return;
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

HomogeneousElement HomogeneousElement::operator+(const HomogeneousElement& o) const {
    check_compatible(o);
    if (degree_ != o.degree_) throw DegreeMismatch("adding homogeneous elements of degrees " + std::to_string(degree_) + " and " + std::to_string(o.degree_));
    HomogeneousElement r = *this;
    for (const auto& [idx, c] : o.terms_) r.add_term(idx, c);
    return r;
}

HomogeneousElement HomogeneousElement::operator-(const HomogeneousElement& o) const { return *this + o.scaled(-Scalar::one(field_)); }

HomogeneousElement HomogeneousElement::scaled(const Scalar& c) const {
    HomogeneousElement r(field_, d_, degree_);
    if (c.is_zero()) return r;
    for (const auto& [idx, v] : terms_) r.terms_.emplace(idx, v * c);
    return r;
}

HomogeneousElement HomogeneousElement::operator*(const HomogeneousElement& o) const {
    check_compatible(o);
    HomogeneousElement r(field_, d_, degree_ + o.degree_);
    std::uint64_t shift = word_count(d_, o.degree_);
    for (const auto& [a, ca] : terms_)
        for (const auto& [b, cb] : o.terms_) r.add_term(a * shift + b, ca * cb);
    return r;
}

SparseVec HomogeneousElement::to_sparse() const { return SparseVec(terms_.begin(), terms_.end()); }

HomogeneousElement HomogeneousElement::from_sparse(Field field, unsigned d, unsigned degree, const SparseVec& v) {
    HomogeneousElement h(field, d, degree);
    for (const auto& [idx, c] : v) h.add_term(idx, c);
    return h;
}

// ---------------------------------------------------------------- Element

Element::Element(Field field, unsigned d, unsigned degree_cap) : field_(field), d_(d), cap_(degree_cap) {
    if (d == 0) throw InvalidArgument("generator count must be positive");
}

Element Element::constant(Field field, unsigned d, const Scalar& c, unsigned degree_cap) {
    Element e(field, d, degree_cap);
    e.add_term(Monomial(), c);
    return e;
}

Element Element::generator(Field field, unsigned d, std::uint32_t letter, unsigned degree_cap) {
    if (letter >= d) throw InvalidArgument("generator index out of range");
    Element e(field, d, degree_cap);
    e.add_term(Monomial({letter}), Scalar::one(field));
    return e;
}

Element Element::from_homogeneous(const HomogeneousElement& h, unsigned degree_cap) {
    Element e(h.field(), h.gens(), degree_cap);
    e.add_component(h);
    return e;
}

void Element::check_compatible(const Element& o) const {
    if (!(field_ == o.field_) || d_ != o.d_) throw DegreeMismatch("elements over different algebras");
}

void Element::add_component(const HomogeneousElement& h) {
    if (h.is_zero()) return;
    auto it = parts_.find(h.degree());
    if (it == parts_.end()) {
        parts_.emplace(h.degree(), h);
        return;
    }
    it->second = it->second + h;
    if (it->second.is_zero()) parts_.erase(it);
}

std::optional<unsigned> Element::order() const {
    if (parts_.empty()) return std::nullopt;
    return parts_.begin()->first;
}

std::optional<unsigned> Element::top_degree() const {
    if (parts_.empty()) return std::nullopt;
    return parts_.rbegin()->first;
}

HomogeneousElement Element::component(unsigned k) const {
    auto it = parts_.find(k);
    return it == parts_.end() ? HomogeneousElement(field_, d_, k) : it->second;
}

void Element::add_term(const Monomial& m, const Scalar& c) {
    if (m.degree() > cap_) throw CapExceeded("degree " + std::to_string(m.degree()) + " exceeds cap " + std::to_string(cap_));
    for (auto l : m.letters())
        if (l >= d_) throw InvalidArgument("letter index out of range");
    HomogeneousElement h(field_, d_, m.degree());
    h.add_term(m.index(d_), c);
    add_component(h);
}

Element Element::operator+(const Element& o) const {
    check_compatible(o);
    Element r = *this;
    for (const auto& [k, h] : o.parts_) r.add_component(h);
    return r;
}

Element Element::operator-() const { return scaled(-Scalar::one(field_)); }
Element Element::operator-(const Element& o) const { return *this + (-o); }

Element Element::scaled(const Scalar& c) const {
    Element r(field_, d_, cap_);
    for (const auto& [k, h] : parts_) r.add_component(h.scaled(c));
    return r;
}

Element Element::operator*(const Element& o) const {
    check_compatible(o);
    Element r(field_, d_, std::min(cap_, o.cap_));
    for (const auto& [ka, ha] : parts_)
        for (const auto& [kb, hb] : o.parts_) {
            if (ka + kb > r.cap_) throw CapExceeded("product degree " + std::to_string(ka + kb) + " exceeds cap " + std::to_string(r.cap_));
            r.add_component(ha * hb);
        }
    return r;
}

Element Element::pow(unsigned e) const {
    if (e == 0) return constant(field_, d_, Scalar::one(field_), cap_);
    Element r = *this;
    for (unsigned i = 1; i < e; ++i) r = r * *this;
    return r;
}

std::string Element::to_string() const {
    if (parts_.empty()) return "0";
    std::string out;
    for (const auto& [k, h] : parts_) {
        for (const auto& [idx, c] : h.terms()) {
            std::string coeff = c.to_signed_string();
            bool negative = coeff.front() == '-';
            if (negative) coeff.erase(0, 1);
            if (out.empty())
                out += negative ? "-" : "";
            else
                out += negative ? " - " : " + ";
            std::string word = Monomial::from_index(idx, k, d_).to_string(d_);
            if (k == 0)
                out += coeff;
            else if (coeff == "1")
                out += word;
            else
                out += coeff + "*" + word;
        }
    }
    return out;
}

}  // namespace gsalg
