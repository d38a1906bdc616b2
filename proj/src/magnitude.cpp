#include "gsalg/magnitude.hpp"

#include <algorithm>
#include <climits>
#include <cstdio>
#include <map>

#include <mpfr.h>

#include "gsalg/error.hpp"

namespace gsalg {

mpz_class bit_length(const mpz_class& n) {
    if (n == 0) return 0;
    return mpz_class(static_cast<unsigned long>(mpz_sizeinbase(n.get_mpz_t(), 2)));
}

namespace {

mpz_class pow2_mpz(unsigned long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
    return r;
}

unsigned long to_ulong_checked(const mpz_class& z, const char* what) {
    if (z < 0 || !z.fits_ulong_p()) throw CapExceeded(std::string(what) + " does not fit a machine word");
    return z.get_ui();
}

bool is_power_of_two(const mpz_class& k) { return k > 0 && mpz_popcount(k.get_mpz_t()) == 1; }

constexpr unsigned long kSmallPrimeLimit = 1000;

const std::vector<unsigned long>& small_primes() {
    static const std::vector<unsigned long> primes = [] {
        std::vector<unsigned long> out;
        for (unsigned long n = 2; n < kSmallPrimeLimit; ++n) {
            bool prime = true;
            for (auto p : out) {
                if (p * p > n) break;
                if (n % p == 0) {
                    prime = false;
                    break;
                }
            }
            if (prime) out.push_back(n);
        }
        return out;
    }();
    return primes;
}

}  // namespace

// ---------------------------------------------------------------- Exponent

Exponent::Exponent(const mpz_class& linear) : linear_(linear) {
    if (linear_ < 0) throw InvalidArgument("negative exponent");
}

Exponent Exponent::power_of_two(const mpz_class& t) {
    if (t < 0) throw InvalidArgument("negative tower height");
    Exponent e;
    e.tower_ = t;
    e.normalize();
    return e;
}

void Exponent::normalize() {
    if (tower_ && *tower_ <= kTowerFoldLimit) {
        linear_ += pow2_mpz(tower_->get_ui());
        tower_.reset();
    }
}

std::optional<mpz_class> Exponent::value() const {
    if (tower_) return std::nullopt;
    return linear_;
}

Exponent Exponent::operator+(const Exponent& o) const {
    Exponent r;
    r.linear_ = linear_ + o.linear_;
    if (tower_ && o.tower_) {
        if (*tower_ != *o.tower_) throw CapExceeded("sum of exponents with distinct towers is not representable");
        r.tower_ = *tower_ + 1;
    } else if (tower_) {
        r.tower_ = tower_;
    } else {
        r.tower_ = o.tower_;
    }
    r.normalize();
    return r;
}

Exponent Exponent::scaled(const mpz_class& k) const {
    if (k <= 0) throw InvalidArgument("exponent scale must be positive");
    Exponent r;
    r.linear_ = linear_ * k;
    if (tower_) {
        if (!is_power_of_two(k)) throw CapExceeded("tower exponent scaled by a non power of two");
        r.tower_ = *tower_ + (bit_length(k) - 1);
    }
    r.normalize();
    return r;
}

std::optional<Exponent> Exponent::minus(const Exponent& o) const {
    if (tower_ != o.tower_ && o.tower_) return std::nullopt;
    Exponent r;
    r.linear_ = linear_ - o.linear_;
    r.tower_ = (tower_ == o.tower_) ? std::nullopt : tower_;
    if (!r.tower_ && r.linear_ < 0) return std::nullopt;
    if (r.tower_ && r.linear_ < 0 && bit_length(-r.linear_) >= *r.tower_) return std::nullopt;
    return r;
}

std::strong_ordering operator<=>(const Exponent& a, const Exponent& b) {
    if (a.tower_ == b.tower_) return cmp(a.linear_, b.linear_) <=> 0;
    // Towers differ. Exactly one may be absent, or both present with distinct heights.
    mpz_class diff = a.linear_ - b.linear_;
    mpz_class mag = bit_length(abs(diff));
    auto dominant = [&](const mpz_class& t) {
        // The dominant side exceeds the other by at least 2^(t-1).
        if (mag >= t - 1) throw CapExceeded("exponent comparison outside the supported range");
    };
    if (!b.tower_ || (a.tower_ && *a.tower_ > *b.tower_)) {
        dominant(*a.tower_);
        return std::strong_ordering::greater;
    }
    dominant(*b.tower_);
    return std::strong_ordering::less;
}

std::string Exponent::to_string() const {
    if (!tower_) return linear_.get_str();
    if (linear_ == 0) return "2^" + tower_->get_str();
    return "(" + linear_.get_str() + (linear_ > 0 ? " + " : " - ") + "2^" + tower_->get_str() + ")";
}

// ---------------------------------------------------------------- Magnitude

Magnitude::Magnitude(const mpz_class& value) : coeff_(value) {
    if (value <= 0) throw InvalidArgument("magnitudes are positive");
    canonicalize();
}

Magnitude::Magnitude(const mpq_class& value) : coeff_(value) {
    coeff_.canonicalize();
    if (coeff_ <= 0) throw InvalidArgument("magnitudes are positive");
    canonicalize();
}

Magnitude Magnitude::power(const mpz_class& base, const Exponent& exp) {
    if (base <= 0) throw InvalidArgument("magnitude base must be positive");
    Magnitude m;
    if (base != 1 && !exp.is_zero()) m.factors_.push_back({base, exp});
    m.canonicalize();
    return m;
}

void Magnitude::canonicalize() {
    std::map<mpz_class, Exponent> merged;
    auto add = [&](const mpz_class& base, const Exponent& e) {
        if (base == 1 || e.is_zero()) return;
        auto it = merged.find(base);
        if (it == merged.end())
            merged.emplace(base, e);
        else
            it->second = it->second + e;
    };
    for (const auto& f : factors_) {
        // Split small prime factors out of the base when the exponent allows it.
        mpz_class rest = f.base;
        std::vector<std::pair<unsigned long, unsigned long>> split;
        for (auto p : small_primes()) {
            if (rest == 1) break;
            unsigned long mult = 0;
            while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
                mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
                ++mult;
            }
            if (mult) split.emplace_back(p, mult);
        }
        bool ok = true;
        std::vector<std::pair<mpz_class, Exponent>> parts;
        try {
            for (auto [p, mult] : split) parts.emplace_back(mpz_class(p), f.exp.scaled(mult));
        } catch (const CapExceeded&) {
            ok = false;
        }
        if (!ok) {
            add(f.base, f.exp);
            continue;
        }
        for (auto& [p, e] : parts) add(p, e);
        add(rest, f.exp);
    }
    factors_.clear();
    for (auto& [b, e] : merged) factors_.push_back({b, e});
}

bool operator==(const Magnitude& a, const Magnitude& b) {
    return a.same_form(b) || magnitude_cmp(a, b) == 0;
}

Magnitude Magnitude::operator*(const Magnitude& o) const {
    Magnitude r;
    r.coeff_ = coeff_ * o.coeff_;
    r.factors_ = factors_;
    r.factors_.insert(r.factors_.end(), o.factors_.begin(), o.factors_.end());
    r.canonicalize();
    return r;
}

Magnitude Magnitude::pow(const mpz_class& k) const {
    if (k < 0) throw InvalidArgument("negative power");
    if (k == 0) return Magnitude(1);
    Magnitude r;
    // coeff^k only when small enough to materialize; otherwise move it into factors.
    const mpz_class& num = coeff_.get_num();
    const mpz_class& den = coeff_.get_den();
    if (den != 1) {
        unsigned long kk = to_ulong_checked(k, "power of a fractional magnitude");
        mpz_class n, d;
        mpz_pow_ui(n.get_mpz_t(), num.get_mpz_t(), kk);
        mpz_pow_ui(d.get_mpz_t(), den.get_mpz_t(), kk);
        r.coeff_ = mpq_class(n, d);
        r.coeff_.canonicalize();
    } else if (num != 1) {
        r.factors_.push_back({num, Exponent(k)});
    }
    for (const auto& f : factors_) r.factors_.push_back({f.base, f.exp.scaled(k)});
    r.canonicalize();
    return r;
}

std::optional<mpz_class> Magnitude::bit_estimate() const {
    mpz_class bits = bit_length(coeff_.get_num());
    for (const auto& f : factors_) {
        auto v = f.exp.value();
        if (!v) return std::nullopt;
        bits += *v * bit_length(f.base);
    }
    return bits;
}

std::optional<mpq_class> Magnitude::exact(unsigned long max_bits) const {
    auto est = bit_estimate();
    if (!est || *est > max_bits) return std::nullopt;
    mpz_class num = coeff_.get_num();
    for (const auto& f : factors_) {
        mpz_class p;
        mpz_pow_ui(p.get_mpz_t(), f.base.get_mpz_t(), f.exp.value()->get_ui());
        num *= p;
    }
    mpq_class q(num, coeff_.get_den());
    q.canonicalize();
    return q;
}

// ---------------------------------------------------------------- MPFR enclosures

namespace {

void ensure_wide_exponent_range() {
    static const bool done = [] {
        mpfr_set_emax(mpfr_get_emax_max());
        mpfr_set_emin(mpfr_get_emin_min());
        return true;
    }();
    (void)done;
}

class Mpfr {
public:
    explicit Mpfr(unsigned long prec) { mpfr_init2(v_, static_cast<mpfr_prec_t>(prec)); }
    ~Mpfr() { mpfr_clear(v_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

private:
    mpfr_t v_;
};

void log2_of(mpfr_ptr out, const mpz_class& z, mpfr_rnd_t rnd, unsigned long prec) {
    Mpfr t(prec);
    mpfr_set_z(t.get(), z.get_mpz_t(), rnd);
    mpfr_log2(out, t.get(), rnd);
}

void exponent_value(mpfr_ptr out, const Exponent& e, mpfr_rnd_t rnd, unsigned long prec) {
    mpfr_set_z(out, e.linear().get_mpz_t(), rnd);
    if (e.tower()) {
        const mpz_class& t = *e.tower();
        if (!t.fits_slong_p() || t.get_si() >= mpfr_get_emax() - 1)
            throw CapExceeded("tower height " + t.get_str() + " beyond the certified comparison range");
        Mpfr p(prec);
        mpfr_set_ui_2exp(p.get(), 1, static_cast<mpfr_exp_t>(t.get_si()), MPFR_RNDN);
        mpfr_add(out, out, p.get(), rnd);
    }
}

/// Certified lo <= log2(m) <= hi.
void log2_bounds(const Magnitude& m, mpfr_ptr lo, mpfr_ptr hi, unsigned long prec) {
    ensure_wide_exponent_range();
    Mpfr a(prec), b(prec);
    log2_of(lo, m.coeff().get_num(), MPFR_RNDD, prec);
    log2_of(a.get(), m.coeff().get_den(), MPFR_RNDU, prec);
    mpfr_sub(lo, lo, a.get(), MPFR_RNDD);
    log2_of(hi, m.coeff().get_num(), MPFR_RNDU, prec);
    log2_of(a.get(), m.coeff().get_den(), MPFR_RNDD, prec);
    mpfr_sub(hi, hi, a.get(), MPFR_RNDU);
    for (const auto& f : m.factors()) {
        log2_of(a.get(), f.base, MPFR_RNDD, prec);
        exponent_value(b.get(), f.exp, MPFR_RNDD, prec);
        mpfr_mul(a.get(), a.get(), b.get(), MPFR_RNDD);
        mpfr_add(lo, lo, a.get(), MPFR_RNDD);
        log2_of(a.get(), f.base, MPFR_RNDU, prec);
        exponent_value(b.get(), f.exp, MPFR_RNDU, prec);
        mpfr_mul(a.get(), a.get(), b.get(), MPFR_RNDU);
        mpfr_add(hi, hi, a.get(), MPFR_RNDU);
    }
}

std::string mpfr_str(mpfr_srcptr x, mpfr_rnd_t rnd) {
    char* s = nullptr;
    if (rnd == MPFR_RNDD)
        mpfr_asprintf(&s, "%.25RDg", x);
    else
        mpfr_asprintf(&s, "%.25RUg", x);
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

/// Drop the common part of factors sharing a base, so equal-looking tails cancel exactly.
void cancel_common(Magnitude& a, Magnitude& b) {
    std::vector<Magnitude::Factor> fa = a.factors(), fb = b.factors();
    Magnitude ra(a.coeff()), rb(b.coeff());
    std::size_t i = 0, j = 0;
    while (i < fa.size() || j < fb.size()) {
        if (j == fb.size() || (i < fa.size() && fa[i].base < fb[j].base)) {
            ra *= Magnitude::power(fa[i].base, fa[i].exp);
            ++i;
        } else if (i == fa.size() || fb[j].base < fa[i].base) {
            rb *= Magnitude::power(fb[j].base, fb[j].exp);
            ++j;
        } else {
            const auto& ea = fa[i].exp;
            const auto& eb = fb[j].exp;
            const Exponent& low = (ea <= eb) ? ea : eb;
            auto da = ea.minus(low);
            auto db = eb.minus(low);
            if (da && db) {
                ra *= Magnitude::power(fa[i].base, *da);
                rb *= Magnitude::power(fb[j].base, *db);
            } else {
                ra *= Magnitude::power(fa[i].base, ea);
                rb *= Magnitude::power(fb[j].base, eb);
            }
            ++i;
            ++j;
        }
    }
    a = ra;
    b = rb;
}

}  // namespace

std::strong_ordering magnitude_cmp(const Magnitude& a_in, const Magnitude& b_in, const CompareOptions& opts) {
    Magnitude a = a_in, b = b_in;
    cancel_common(a, b);
    if (a.same_form(b)) return std::strong_ordering::equal;
    auto ea = a.exact(opts.exact_bit_budget);
    auto eb = ea ? b.exact(opts.exact_bit_budget) : std::nullopt;
    if (ea && eb) return cmp(*ea, *eb) <=> 0;

    for (unsigned long prec = opts.start_precision; prec <= opts.max_precision; prec *= 2) {
        Mpfr alo(prec), ahi(prec), blo(prec), bhi(prec);
        log2_bounds(a, alo.get(), ahi.get(), prec);
        log2_bounds(b, blo.get(), bhi.get(), prec);
        if (mpfr_less_p(ahi.get(), blo.get())) return std::strong_ordering::less;
        if (mpfr_less_p(bhi.get(), alo.get())) return std::strong_ordering::greater;
    }
    throw Undecided("magnitude comparison undecided within precision budget: " + a.to_string() + " vs " + b.to_string());
}

bool bitlen_lt_pow2(const mpz_class& r, const mpz_class& t) {
    if (r < 1) throw InvalidArgument("bitlen_lt_pow2 requires r >= 1");
    if (t < 0) throw InvalidArgument("bitlen_lt_pow2 requires t >= 0");
    return bit_length(r) <= t;
}

bool magnitude_lt_pow2(const Magnitude& r, const Exponent& t) {
    if (auto v = r.coeff().get_den() == 1 && r.factors().empty() ? std::optional<mpz_class>(r.coeff().get_num()) : std::nullopt;
        v && t.value())
        return bitlen_lt_pow2(*v, *t.value());
    // r < 2^B <= 2^(2^T) <= 2^t once bit_length(B) <= T.
    if (auto b = r.bit_estimate(); b && t.tower() && bit_length(*b) <= *t.tower()) return true;
    return magnitude_cmp(r, Magnitude::pow2(t)) < 0;
}

std::pair<std::string, std::string> log2_enclosure(const Magnitude& m, unsigned long precision) {
    Mpfr lo(precision), hi(precision);
    log2_bounds(m, lo.get(), hi.get(), precision);
    return {mpfr_str(lo.get(), MPFR_RNDD), mpfr_str(hi.get(), MPFR_RNDU)};
}

mpz_class Magnitude::floor_log2() const {
    if (auto q = exact()) {
        const mpz_class& num = q->get_num();
        const mpz_class& den = q->get_den();
        long l = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) - static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
        // 2^l <= q < 2^(l+1) or 2^(l-1) <= q < 2^l.
        auto ge_pow2 = [&](long e) {
            if (e >= 0) return cmp(num, den * pow2_mpz(static_cast<unsigned long>(e))) >= 0;
            return cmp(num * pow2_mpz(static_cast<unsigned long>(-e)), den) >= 0;
        };
        return ge_pow2(l) ? mpz_class(l) : mpz_class(l - 1);
    }
    for (unsigned long prec = 128; prec <= (1ul << 16); prec *= 2) {
        Mpfr lo(prec), hi(prec);
        log2_bounds(*this, lo.get(), hi.get(), prec);
        if (mpfr_get_exp(hi.get()) > static_cast<mpfr_exp_t>(Exponent::kTowerFoldLimit))
            throw CapExceeded("log2 of " + to_string() + " is too large to take its floor");
        mpz_class flo, fhi;
        mpfr_get_z(flo.get_mpz_t(), lo.get(), MPFR_RNDD);
        mpfr_get_z(fhi.get_mpz_t(), hi.get(), MPFR_RNDD);
        if (fhi - flo <= 1) {
            if (magnitude_cmp(*this, Magnitude::pow2(Exponent(fhi))) >= 0) return fhi;
            return fhi - 1;
        }
    }
    throw Undecided("floor(log2) undecided for " + to_string());
}

std::string Magnitude::to_string() const {
    std::string out;
    if (coeff_ != 1 || factors_.empty()) out = coeff_.get_str();
    for (const auto& f : factors_) {
        if (!out.empty()) out += " * ";
        out += f.base.get_str();
        auto v = f.exp.value();
        if (v && *v == 1) continue;
        out += "^";
        std::string e = f.exp.to_string();
        out += (v || e.front() == '(') ? e : "(" + e + ")";
    }
    return out;
}

nlohmann::json Magnitude::to_json() const {
    nlohmann::json factors = nlohmann::json::array();
    for (const auto& f : factors_) {
        if (f.exp.linear() != 0 || !f.exp.tower())
            factors.push_back({{"base", f.base.get_str()}, {"exp", f.exp.linear().get_str()}});
        if (f.exp.tower())
            factors.push_back({{"base", f.base.get_str()}, {"exp", {{"base", "2"}, {"exp", f.exp.tower()->get_str()}}}});
    }
    return {{"coeff", coeff_.get_str()}, {"factors", factors}};
}

namespace {

mpz_class parse_int(const nlohmann::json& j, const char* what) {
    mpz_class z;
    if (j.is_number_integer()) return mpz_class(j.get<long>());
    if (!j.is_string() || z.set_str(j.get<std::string>(), 10) != 0)
        throw ParseError(std::string("expected decimal integer for ") + what);
    return z;
}

}  // namespace

namespace {

std::string strip(std::string s) {
    auto keep = [](char c) { return c != ' ' && c != '\t'; };
    std::string out;
    for (char c : s)
        if (keep(c)) out += c;
    return out;
}

mpz_class literal_int(const std::string& s, const std::string& whole) {
    mpz_class v;
    if (s.empty() || v.set_str(s, 10) != 0) throw ParseError("bad magnitude literal: " + whole);
    return v;
}

/// "q", or '*'-separated factors "b", "b^e", "b^(2^t)" / "b^2^t".
Magnitude parse_magnitude_literal(const std::string& text) {
    std::string s = strip(text);
    if (s.find('^') == std::string::npos && s.find('*') == std::string::npos) {
        mpq_class q;
        if (s.empty() || q.set_str(s, 10) != 0) throw ParseError("bad magnitude literal: " + text);
        q.canonicalize();
        return Magnitude(q);
    }
    Magnitude m(1);
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t end = s.find('*', start);
        if (end == std::string::npos) end = s.size();
        std::string f = s.substr(start, end - start);
        std::size_t caret = f.find('^');
        if (caret == std::string::npos) {
            m *= Magnitude(literal_int(f, text));
        } else {
            mpz_class base = literal_int(f.substr(0, caret), text);
            std::string e = f.substr(caret + 1);
            if (e.size() >= 2 && e.front() == '(' && e.back() == ')') e = e.substr(1, e.size() - 2);
            std::size_t inner = e.find('^');
            if (inner == std::string::npos) {
                m *= Magnitude::power(base, Exponent(literal_int(e, text)));
            } else {
                if (literal_int(e.substr(0, inner), text) != 2) throw ParseError("nested exponents must have base 2: " + text);
                m *= Magnitude::power(base, Exponent::power_of_two(literal_int(e.substr(inner + 1), text)));
            }
        }
        start = end + 1;
    }
    return m;
}

}  // namespace

Magnitude Magnitude::from_json(const nlohmann::json& j) {
    if (j.is_number_integer() || j.is_string()) {
        if (j.is_string()) return parse_magnitude_literal(j.get<std::string>());
        return Magnitude(parse_int(j, "magnitude"));
    }
    if (!j.is_object()) throw ParseError("magnitude must be an integer, a string, or an object");
    Magnitude m(1);
    if (j.contains("coeff")) m = Magnitude::from_json(j.at("coeff"));
    if (j.contains("factors")) {
        for (const auto& f : j.at("factors")) {
            mpz_class base = parse_int(f.at("base"), "base");
            const auto& e = f.at("exp");
            Exponent exp;
            if (e.is_object()) {
                if (parse_int(e.at("base"), "nested base") != 2) throw ParseError("nested exponents must have base 2");
                exp = Exponent::power_of_two(parse_int(e.at("exp"), "nested exp"));
            } else {
                exp = Exponent(parse_int(e, "exp"));
            }
            m *= Magnitude::power(base, exp);
        }
    }
    return m;
}

}  // namespace gsalg
