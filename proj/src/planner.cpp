#include "gsalg/planner.hpp"

#include <algorithm>

#include "gsalg/error.hpp"

namespace gsalg {

namespace {

std::string str(const mpz_class& v) { return v.get_str(); }

nlohmann::json mpz_json(const mpz_class& v) { return v.fits_slong_p() ? nlohmann::json(v.get_si()) : nlohmann::json(v.get_str()); }

mpz_class mpz_from_json(const nlohmann::json& j, const std::string& what) {
    if (j.is_number_integer()) return mpz_class(j.get<long>());
    mpz_class v;
    if (!j.is_string() || v.set_str(j.get<std::string>(), 10) != 0) throw ParseError(what + " must be an integer");
    return v;
}

bool is_integral(const Magnitude& m) { return m.coeff().get_den() == 1; }

/// 2^(2^x); x may be negative, in which case the value lies in (1, 2).
bool lt_tower(const Magnitude& r, const mpz_class& x) {
    if (x < 0) return r == Magnitude(1);
    return magnitude_lt_pow2(r, Exponent::power_of_two(x));
}

std::string tower_text(const mpz_class& x) { return "2^(2^" + str(x) + ")"; }

Magnitude pow2(const mpz_class& e) { return Magnitude::pow2(Exponent(e)); }

Magnitude add_counts(const Magnitude& a, const Magnitude& b) {
    auto x = a.exact(), y = b.exact();
    if (!x || !y) throw CapExceeded("cannot add relation counts " + a.to_string() + " and " + b.to_string() + " exactly");
    return Magnitude(mpq_class(*x + *y));
}

ConditionCheck check(std::string key, bool ok, std::string lhs, std::string rhs) {
    ConditionCheck c;
    c.key = std::move(key);
    c.ok = ok;
    c.lhs = std::move(lhs);
    c.rhs = std::move(rhs);
    return c;
}

/// floor(n / 2) for n >= 0.
mpz_class half(const mpz_class& n) {
    mpz_class h;
    mpz_fdiv_q_2exp(h.get_mpz_t(), n.get_mpz_t(), 1);
    return h;
}

}  // namespace

// ---------------------------------------------------------------- SparseBinary

SparseBinary::SparseBinary(const mpz_class& value) {
    if (value < 0) throw InvalidArgument("SparseBinary needs a nonnegative value");
    for (long p = static_cast<long>(mpz_sizeinbase(value.get_mpz_t(), 2)) - 1; p >= 0; --p)
        if (mpz_tstbit(value.get_mpz_t(), static_cast<mp_bitcnt_t>(p))) bits_.emplace_back(p);
}

SparseBinary SparseBinary::from_bits(std::vector<mpz_class> positions) {
    std::sort(positions.begin(), positions.end(), [](const mpz_class& a, const mpz_class& b) { return a > b; });
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (positions[i] < 0) throw InvalidArgument("bit positions must be nonnegative");
        if (i > 0 && positions[i] == positions[i - 1]) throw InvalidArgument("bit positions must be distinct");
    }
    SparseBinary s;
    s.bits_ = std::move(positions);
    return s;
}

mpz_class SparseBinary::bit_length() const { return bits_.empty() ? mpz_class(0) : bits_.front() + 1; }

std::optional<mpz_class> SparseBinary::value(unsigned long max_bits) const {
    if (bit_length() > max_bits) return std::nullopt;
    mpz_class v = 0;
    for (const auto& p : bits_) mpz_setbit(v.get_mpz_t(), p.get_ui());
    return v;
}

std::string SparseBinary::to_string() const {
    if (auto v = value(64)) return v->get_str();
    std::string s;
    for (const auto& p : bits_) s += (s.empty() ? "" : " + ") + std::string("2^") + p.get_str();
    return s;
}

nlohmann::json SparseBinary::to_json() const {
    if (auto v = value(62)) return v->get_si();
    nlohmann::json bits = nlohmann::json::array();
    for (const auto& p : bits_) bits.push_back(mpz_json(p));
    return {{"bits", bits}};
}

SparseBinary SparseBinary::from_json(const nlohmann::json& j) {
    if (j.is_object()) {
        if (!j.contains("bits") || !j.at("bits").is_array()) throw ParseError("sparse binary object needs a \"bits\" array");
        std::vector<mpz_class> pos;
        for (const auto& b : j.at("bits")) pos.push_back(mpz_from_json(b, "bit position"));
        return from_bits(std::move(pos));
    }
    return SparseBinary(mpz_from_json(j, "degree"));
}

std::strong_ordering operator<=>(const SparseBinary& a, const SparseBinary& b) {
    for (std::size_t i = 0; i < std::min(a.bits_.size(), b.bits_.size()); ++i) {
        int c = cmp(a.bits_[i], b.bits_[i]);
        if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return a.bits_.size() <=> b.bits_.size();
}

// ---------------------------------------------------------------- degrees and profiles

nlohmann::json DegreeSupport::to_json() const {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& [deg, count] : degrees) a.push_back({{"degree", deg.to_json()}, {"count", count.to_json()}});
    return {{"degrees", a}};
}

DegreeSupport DegreeSupport::from_json(const nlohmann::json& j) {
    const nlohmann::json& list = j.is_object() && j.contains("degrees") ? j.at("degrees") : j;
    if (!list.is_array()) throw ParseError("degree support must be an array or {\"degrees\": [...]}");
    DegreeSupport s;
    for (const auto& item : list) {
        if (item.is_object() && item.contains("degree"))
            s.add(SparseBinary::from_json(item.at("degree")), item.contains("count") ? Magnitude::from_json(item.at("count")) : Magnitude(1));
        else
            s.add(SparseBinary::from_json(item));
    }
    return s;
}

mpz_class dyadic_level(const SparseBinary& degree) {
    if (degree.bit_length() < 2) throw InvalidArgument("relation degrees must be at least 2");
    return degree.is_power_of_two() ? degree.bits().front() - 1 : degree.bits().front();
}

std::optional<mpz_class> forbidden_window_level(const SparseBinary& degree) {
    if (degree.is_zero()) return std::nullopt;
    if (auto v = degree.value(16)) {
        // 8 deg in [2^(n+3) - 2^n, 2^(n+3) + 2^(n+1)].
        mpz_class d8 = *v * 8;
        for (unsigned long n = 0; n <= 18; ++n) {
            mpz_class p = mpz_class(1) << n;
            if (d8 >= 8 * p - p && d8 <= 8 * p + 2 * p) return mpz_class(n);
        }
        return std::nullopt;
    }
    const auto& b = degree.bits();
    const mpz_class& top = b.front();
    // n = top: deg - 2^top <= 2^(top-2).
    if (b.size() == 1 || b[1] < top - 2 || (b.size() == 2 && b[1] == top - 2)) return top;
    // n = top + 1: deg >= 2^top + 2^(top-1) + 2^(top-2).
    if (b.size() >= 3 && b[1] == top - 1 && b[2] == top - 2) return mpz_class(top + 1);
    return std::nullopt;
}

std::vector<mpz_class> DyadicProfile::support() const {
    std::vector<mpz_class> y;
    for (const auto& [n, c] : r) y.push_back(n);
    return y;
}

nlohmann::json DyadicProfile::to_json() const {
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [n, c] : r) counts[n.get_str()] = c.to_json();
    return {{"r", counts}};
}

DyadicProfile DyadicProfile::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("r") || !j.at("r").is_object()) throw ParseError("dyadic profile needs an \"r\" object");
    DyadicProfile p;
    for (const auto& [key, val] : j.at("r").items()) {
        mpz_class n;
        if (n.set_str(key, 10) != 0 || n < 0) throw ParseError("level '" + key + "' is not a nonnegative integer");
        if ((val.is_number_integer() && val.get<long>() == 0) || (val.is_string() && val.get<std::string>() == "0")) continue;
        Magnitude c = Magnitude::from_json(val);
        if (!is_integral(c)) throw ParseError("relation count at level " + key + " must be an integer");
        p.r[n] = c;
    }
    return p;
}

DyadicProfile dyadic_profile(const DegreeSupport& degrees) {
    DyadicProfile p;
    for (const auto& [deg, count] : degrees.degrees) {
        mpz_class n = dyadic_level(deg);
        auto it = p.r.find(n);
        if (it == p.r.end())
            p.r.emplace(n, count);
        else
            it->second = add_counts(it->second, count);
    }
    return p;
}

std::string to_string(R0Convention c) { return c == R0Convention::unit ? "r_0 = 1" : "r_0 = 0"; }
std::string to_string(SReading s) { return s == SReading::interval ? "interval" : "pair"; }

// ---------------------------------------------------------------- reports

nlohmann::json ConditionCheck::to_json() const {
    nlohmann::json j{{"key", key}, {"status", !evaluated ? "not evaluated" : ok ? "pass" : "fail"}};
    if (n) j["n"] = mpz_json(*n);
    if (m) j["m"] = mpz_json(*m);
    if (!lhs.empty()) j["lhs"] = lhs;
    if (!rhs.empty()) j["rhs"] = rhs;
    if (!note.empty()) j["note"] = note;
    return j;
}

bool ConditionReport::ok() const { return first_failure() == nullptr; }

const ConditionCheck* ConditionReport::first_failure() const {
    for (const auto& c : checks)
        if (!c.ok) return &c;
    return nullptr;
}

nlohmann::json ConditionReport::to_json() const {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& c : checks) a.push_back(c.to_json());
    return {{"ok", ok()}, {"checks", a}};
}

nlohmann::json HypothesisReport::to_json() const {
    nlohmann::json j = ConditionReport::to_json();
    j["r0_convention"] = to_string(r0);
    j["half_level_convention"] = "floor(n/2)";
    return j;
}

// ---------------------------------------------------------------- hypotheses

HypothesisReport validate_growth_hypotheses(const DyadicProfile& profile, const std::optional<DegreeSupport>& degrees, R0Convention r0) {
    HypothesisReport rep;
    rep.r0 = r0;
    auto& out = rep.checks;

    for (const auto& [n, c] : profile.r) {
        auto chk = check("count_is_positive_integer", is_integral(c) && Magnitude(1) <= c, "r_" + str(n) + " = " + c.to_string(), ">= 1");
        chk.n = n;
        out.push_back(chk);
    }

    {
        auto chk = check("no_relations_below_level_8", true, "", "");
        for (const auto& [n, c] : profile.r)
            if (n < 8) {
                chk.ok = false;
                chk.lhs = "r_" + str(n) + " = " + c.to_string();
                chk.rhs = "0";
                chk.n = n;
                break;
            }
        out.push_back(chk);
    }

    if (!degrees) {
        auto chk = check("degrees_avoid_forbidden_windows", true, "", "");
        chk.evaluated = false;
        chk.note = "no degree list supplied";
        out.push_back(chk);
    } else {
        auto chk = check("degrees_avoid_forbidden_windows", true, "", "");
        for (const auto& [deg, count] : degrees->degrees)
            if (auto n = forbidden_window_level(deg)) {
                chk.ok = false;
                chk.n = *n;
                chk.lhs = deg.to_string();
                chk.rhs = "[2^" + str(*n) + " - 2^(" + str(*n) + "-3), 2^" + str(*n) + " + 2^(" + str(*n) + "-2)]";
                chk.note = "degree lies inside the forbidden window";
                break;
            }
        out.push_back(chk);
        DyadicProfile derived = dyadic_profile(*degrees);
        auto match = check("profile_matches_degrees", derived.r == profile.r, "", "");
        if (!match.ok) match.note = "the profile differs from the level counts of the degree list";
        out.push_back(match);
    }

    const auto y = profile.support();
    for (const auto& n : y) {
        const Magnitude& rn = profile.r.at(n);
        std::vector<mpz_class> lower_levels{0};
        for (const auto& m : y)
            if (m > 0 && m < n) lower_levels.push_back(m);
        for (const auto& m : lower_levels) {
            bool real_r0 = m == 0 && profile.contains(0);
            ConditionCheck lo;
            if (m == 0 && !real_r0 && r0 == R0Convention::zero) {
                lo = check("chain_lower", Magnitude(1) <= rn, "r_" + str(n) + " = " + rn.to_string(), ">= 1");
                lo.note = "r_0 = 0 reduces the condition to r_n >= 1";
            } else {
                Magnitude rm = m == 0 && !real_r0 ? Magnitude(1) : profile.r.at(m);
                Magnitude lhs = pow2(3 * n + 4) * rm.pow(33);
                lo = check("chain_lower", lhs < rn, "2^(3*" + str(n) + "+4) * r_" + str(m) + "^33 = " + lhs.to_string(),
                           "r_" + str(n) + " = " + rn.to_string());
                if (m == 0 && !real_r0) lo.note = "r_0 = 1";
            }
            lo.n = n;
            lo.m = m;
            out.push_back(lo);

            mpz_class x = n - m - 3;
            auto hi = check("chain_upper", lt_tower(rn, x), "r_" + str(n) + " = " + rn.to_string(), tower_text(x));
            hi.n = n;
            hi.m = m;
            out.push_back(hi);
        }
        mpz_class x = half(n) - 4;
        auto cap = check("growth_cap", lt_tower(rn, x), "r_" + str(n) + " = " + rn.to_string(), tower_text(x));
        cap.n = n;
        cap.note = "exponent floor(n/2) - 4";
        out.push_back(cap);
    }
    return rep;
}

// ---------------------------------------------------------------- e-schedule

mpz_class bracket_exponent(const Magnitude& r) {
    if (r < Magnitude(2)) throw InvalidArgument("no e(n) brackets r_n = " + r.to_string() + "; r_n must be at least 2");
    // 2^(e-3) <= log2 r < 2^(e-2)  <=>  e - 3 = floor(log2 floor(log2 r)).
    return bit_length(r.floor_log2()) + 2;
}

nlohmann::json Schedule::to_json() const {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& [n, en] : e) {
        nlohmann::json l{{"n", mpz_json(n)}, {"e", mpz_json(en)}, {"S", {mpz_json(n - 1 - en), mpz_json(n - 1)}}};
        if (auto it = t.find(n); it != t.end()) l["t"] = mpz_json(it->second);
        levels.push_back(l);
    }
    return {{"profile", profile.to_json()}, {"levels", levels}, {"S_reading", to_string(s_reading)}, {"report", report.to_json()}};
}

Schedule compute_e_schedule(const DyadicProfile& profile, const ScheduleOptions& opts) {
    Schedule s;
    s.profile = profile;
    s.s_reading = opts.s_reading;
    auto& out = s.report.checks;
    auto push = [&](ConditionCheck c) {
        out.push_back(c);
        if (opts.strict && !c.ok)
            throw PropertyViolation("schedule condition " + c.key + " fails at n = " + (c.n ? str(*c.n) : std::string("?")) + ": " + c.lhs + " vs " +
                                    c.rhs);
    };

    for (const auto& [n, rn] : profile.r) s.e[n] = bracket_exponent(rn);

    mpz_class prior = 0;  // sum_{k < n} 2^(e(k)+2)
    for (const auto& [n, rn] : profile.r) {
        const mpz_class& en = s.e.at(n);

        auto b = check("bracketing", !lt_tower(rn, en - 3) && lt_tower(rn, en - 2), tower_text(en - 3) + " <= r_" + str(n) + " = " + rn.to_string(),
                       "< " + tower_text(en - 2));
        b.n = n;
        push(b);

        auto range = check("e_within_half_level", en >= 1 && 2 * (en + 1) <= n, "e = " + str(en), "1 <= e <= " + str(n) + "/2 - 1");
        range.n = n;
        push(range);

        Magnitude lhs = rn * pow2(3 * n + 4 + prior);
        auto master = check("master_inequality", lhs <= Magnitude::tower2(en - 1),
                            "r_" + str(n) + " * 2^(3*" + str(n) + "+4+" + str(prior) + ") = " + lhs.to_string(), tower_text(en - 1));
        master.n = n;
        push(master);

        auto four = check("fourth_power", Magnitude::tower2(en) >= rn.pow(4), tower_text(en), "r_" + str(n) + "^4 = " + rn.pow(4).to_string());
        four.n = n;
        push(four);

        constexpr unsigned long kExactT = 1ul << 20;
        if (en - 1 <= kExactT && en + 2 <= kExactT) s.t[n] = (mpz_class(1) << mpz_class(en - 1).get_ui()) - 3 * n - 4 - prior;
        prior += mpz_class(1) << mpz_class(en + 2).get_ui();
    }

    auto y = profile.support();
    for (std::size_t i = 0; i < y.size(); ++i)
        for (std::size_t j = i + 1; j < y.size(); ++j) {
            mpz_class lo_i = y[i] - 1 - s.e.at(y[i]), hi_i = y[i] - 1;
            mpz_class lo_j = y[j] - 1 - s.e.at(y[j]), hi_j = y[j] - 1;
            bool meet = opts.s_reading == SReading::interval ? (lo_j <= hi_i && lo_i <= hi_j)
                                                             : (lo_i == lo_j || lo_i == hi_j || hi_i == lo_j || hi_i == hi_j);
            auto c = check("S_disjoint", !meet, "S_" + str(y[i]) + " = {" + str(lo_i) + ", " + str(hi_i) + "}",
                           "S_" + str(y[j]) + " = {" + str(lo_j) + ", " + str(hi_j) + "}");
            c.n = y[j];
            c.m = y[i];
            push(c);
        }
    return s;
}

// ---------------------------------------------------------------- derived chain inequality

ProductChainResult check_product_chain(const DyadicProfile& profile) {
    ProductChainResult res;
    Magnitude prod(1);
    for (const auto& [n, rn] : profile.r) {
        Magnitude lhs = pow2(3 * n + 4) * prod;
        auto c = check("product_chain", lhs < rn, "2^(3*" + str(n) + "+4) * prod_{i<" + str(n) + "} r_i^32 = " + lhs.to_string(),
                       "r_" + str(n) + " = " + rn.to_string());
        c.n = n;
        res.report.checks.push_back(c);
        prod *= rn.pow(32);
    }
    res.ok = res.report.ok();
    return res;
}

// ---------------------------------------------------------------- growth bounds

nlohmann::json BoundsReport::to_json() const {
    auto enclosure = [](const Magnitude& m) {
        auto [lo, hi] = log2_enclosure(m);
        return nlohmann::json{{"value", m.to_json()}, {"text", m.to_string()}, {"log2", {lo, hi}}};
    };
    nlohmann::json j{{"n", mpz_json(n)},
                     {"k", k ? mpz_json(*k) : nlohmann::json("inapplicable")},
                     {"upper_cumulative", enclosure(upper)},
                     {"upper_source", upper_source},
                     {"upper_degree", enclosure(upper_degree)},
                     {"consistency", consistency.to_json()}};
    j["lower_relations"] = lower_relations ? enclosure(*lower_relations) : nlohmann::json("inapplicable");
    if (lower_relations_level) j["lower_relations_level"] = mpz_json(*lower_relations_level);
    j["lower_schedule"] = lower_schedule ? enclosure(*lower_schedule) : nlohmann::json("inapplicable");
    return j;
}

BoundsReport eval_bounds(const Schedule& schedule, const mpz_class& n) {
    if (n < 1) throw InvalidArgument("eval_bounds needs n >= 1");
    BoundsReport b;
    b.n = n;
    mpz_class floor_log = bit_length(n) - 1;           // j <= log2 n  <=>  j <= floor(log2 n)
    mpz_class floor_two_log = bit_length(n * n) - 1;   // k <= 2 log2 n  <=>  2^k <= n^2
    Magnitude nm(n);

    mpz_class sum = 0;
    for (const auto& [i, e] : schedule.e)
        if (i <= floor_two_log) {
            b.k = i;
            sum += mpz_class(1) << mpz_class(e + 2).get_ui();
        }
    b.upper_degree = Magnitude(8) * nm.pow(3) * pow2(sum);
    if (b.k) {
        b.upper = Magnitude(8) * nm.pow(4) * schedule.profile.r.at(*b.k).pow(33);
        b.upper_source = "8 n^4 r_k^33";
    } else {
        b.upper = Magnitude(8) * nm.pow(4);
        b.upper_source = "8 n^4 (no level k <= 2 log2 n)";
    }

    const Magnitude half_q(mpq_class(1, 2));
    for (const auto& [j, rj] : schedule.profile.r) {
        if (j > floor_log) break;
        Magnitude lo = half_q * rj.pow(4);
        if (!b.lower_relations || *b.lower_relations < lo) {
            b.lower_relations = lo;
            b.lower_relations_level = j;
        }
        Magnitude ls = half_q * Magnitude::tower2(schedule.e.at(j));
        if (!b.lower_schedule || *b.lower_schedule < ls) b.lower_schedule = ls;

        auto c1 = check("relation_lower_below_upper", lo <= b.upper, "r_" + str(j) + "^4 / 2", b.upper_source);
        c1.n = n;
        c1.m = j;
        b.consistency.checks.push_back(c1);
        auto c2 = check("schedule_lower_below_upper", ls <= b.upper, tower_text(schedule.e.at(j)) + " / 2", b.upper_source);
        c2.n = n;
        c2.m = j;
        b.consistency.checks.push_back(c2);
        auto c3 = check("schedule_lower_above_relation_lower", lo <= ls, "r_" + str(j) + "^4 / 2", tower_text(schedule.e.at(j)) + " / 2");
        c3.n = n;
        c3.m = j;
        b.consistency.checks.push_back(c3);
    }
    return b;
}

ConditionCheck subexp_upper_growth_check(const Schedule& schedule, const mpz_class& n) {
    BoundsReport b = eval_bounds(schedule, n);
    // floor(log2 n) <= log2 n keeps the right-hand side a lower estimate of the true bound.
    mpz_class l = bit_length(n) - 1;
    Magnitude rhs = pow2(3 + 200 * l * l * l) * Magnitude(n).pow(4);
    auto c = check("upper_growth_subexponential", b.upper <= rhs, b.upper_source + " = " + b.upper.to_string(),
                   "8 n^4 2^(200 * " + str(l) + "^3)");
    c.n = n;
    if (b.k) c.m = *b.k;
    if (mpz_class(n & (n - 1)) != 0) c.note = "log2 n rounded down";
    return c;
}

ConditionCheck subexp_lower_growth_check(const Schedule& schedule, const mpz_class& m) {
    mpz_class n = mpz_class(1) << mpz_class(m + 1).get_ui();
    BoundsReport b = eval_bounds(schedule, n);
    Magnitude rhs = Magnitude::power(40, Exponent(8 * m * m));
    bool ok = b.lower_relations && *b.lower_relations > rhs;
    auto c = check("lower_growth_superpolynomial", ok, b.lower_relations ? "r_j^4 / 2 = " + b.lower_relations->to_string() : "inapplicable",
                   "40^(8 * " + str(m) + "^2)");
    c.n = n;
    c.m = m;
    return c;
}

ConditionCheck exponential_growth_refutation(unsigned long log2n) {
    // (1 + 2^-10)^n > 2^(400 log2(n)^3)  <=>  1025^n > 2^(10 n + 400 log2(n)^3).
    mpz_class n = mpz_class(1) << log2n;
    mpz_class l = log2n;
    Magnitude lhs = Magnitude::power(1025, Exponent::power_of_two(l));
    Magnitude rhs = pow2(10 * n + 400 * l * l * l);
    auto c = check("exponential_growth_refuted", lhs > rhs, "1025^(2^" + str(l) + ")", "2^(10 * 2^" + str(l) + " + 400 * " + str(l) + "^3)");
    c.n = n;
    c.note = "c = 1 + 2^-10; ok means c^n <= 2^(400 (log2 n)^3) fails";
    return c;
}

// ---------------------------------------------------------------- generated schedule

nlohmann::json SubexpPlan::to_json() const {
    nlohmann::json l = nlohmann::json::array();
    for (const auto& m : levels) l.push_back(mpz_json(m));
    return {{"levels", l},
            {"degrees", degrees.to_json()},
            {"profile", profile.to_json()},
            {"side_conditions", side_conditions.to_json()},
            {"validation", validation.to_json()},
            {"schedule", schedule.to_json()}};
}

SubexpPlan gen_subexp_schedule(unsigned count) {
    SubexpPlan plan;
    mpz_class m = 101;
    for (unsigned i = 0; i < count; ++i) {
        plan.levels.push_back(m);
        m = 200 * m * m * m + 1;
    }
    auto r_of = [](const mpz_class& lv) { return Magnitude::power(40, Exponent(8 * lv * lv * lv)); };
    for (const auto& lv : plan.levels) plan.degrees.add(SparseBinary::from_bits({lv, lv - 1}), r_of(lv));
    plan.profile = dyadic_profile(plan.degrees);

    auto& sc = plan.side_conditions.checks;
    for (std::size_t i = 0; i < plan.levels.size(); ++i) {
        const mpz_class& a = plan.levels[i];
        auto big = check("level_above_100", a > 100, str(a), "> 100");
        big.n = a;
        sc.push_back(big);
        mpz_class x = half(a) - 4;
        auto cube = check("cube_below_half_power", x >= 0 && bitlen_lt_pow2(a * a * a, x), str(a) + "^3", "2^(" + str(x) + ")");
        cube.n = a;
        cube.note = "exponent floor(m/2) - 4";
        sc.push_back(cube);
        if (i + 1 < plan.levels.size()) {
            const mpz_class& b = plan.levels[i + 1];
            auto gap = check("level_spacing", 200 * a * a * a < b, "200 * " + str(a) + "^3", str(b));
            gap.n = b;
            gap.m = a;
            sc.push_back(gap);
            Magnitude lhs = r_of(a).pow(33) * pow2(3 * b + 4);
            auto step = check("chain_step", lhs < r_of(b), "r_m^33 2^(3m'+4)", "r_m' = 40^(8 * " + str(b) + "^3)");
            step.n = b;
            step.m = a;
            sc.push_back(step);
            mpz_class xb = half(b) - 4, xab = b - a - 3;
            auto cap = check("cap_chain", lt_tower(r_of(b), xb) && xb < xab, "r_m' < " + tower_text(xb), "< " + tower_text(xab));
            cap.n = b;
            cap.m = a;
            sc.push_back(cap);
        }
    }
    plan.validation = validate_growth_hypotheses(plan.profile, plan.degrees);
    plan.schedule = compute_e_schedule(plan.profile);
    return plan;
}

}  // namespace gsalg
