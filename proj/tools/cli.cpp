#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "gsalg/error.hpp"
#include "gsalg/gs_series.hpp"
#include "gsalg/ladder.hpp"
#include "gsalg/limits.hpp"
#include "gsalg/parser.hpp"
#include "gsalg/planner.hpp"
#include "gsalg/quotient.hpp"

namespace gsalg::cli {

namespace {

using json = nlohmann::json;

struct Common {
    std::string field;
    std::uint64_t seed = 0;
    unsigned cap = kDefaultDegreeCap;
    bool text = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

json read_json(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what(), 1, e.byte);
    }
}

std::vector<Element> read_relations(const std::string& path, unsigned d, const Field& f, unsigned cap) {
    if (path.empty()) return {};
    try {
        return parse_relations(read_file(path), d, f, cap);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

std::string q_text(const mpq_class& q) { return q.get_str(); }

json root_json(const RootBound& b) {
    return {{"n", b.n}, {"lower", q_text(b.lower)}, {"upper", q_text(b.upper)}, {"exact", b.exact}};
}

mpz_class parse_big(const std::string& s) {
    mpz_class v;
    if (s.rfind("2^", 0) == 0) {
        mpz_class e;
        if (e.set_str(s.substr(2), 10) != 0 || e < 0 || !e.fits_ulong_p()) throw InvalidArgument("bad exponent in '" + s + "'");
        mpz_ui_pow_ui(v.get_mpz_t(), 2, e.get_ui());
        return v;
    }
    if (v.set_str(s, 10) != 0) throw InvalidArgument("'" + s + "' is not an integer or 2^k");
    return v;
}

void collect_keys(const json& j, std::set<std::string>& keys) {
    if (j.is_object()) {
        if (auto it = j.find("key"); it != j.end() && it->is_string() && j.contains("status")) keys.insert(it->get<std::string>());
        for (const auto& [k, v] : j.items()) collect_keys(v, keys);
    } else if (j.is_array()) {
        for (const auto& v : j) collect_keys(v, keys);
    }
}

json condition(const std::string& key, bool ok, json detail = nullptr) {
    json c{{"key", key}, {"status", ok ? "pass" : "fail"}};
    if (!detail.is_null()) c["detail"] = std::move(detail);
    return c;
}

// ---------------------------------------------------------------- subcommands

struct Outcome {
    json result;
    bool ok = true;
};

struct HilbertArgs {
    unsigned gens = 2;
    std::string relations;
    unsigned max_degree = 12;
    unsigned entropy_bits = 32;
};

Outcome run_hilbert(const HilbertArgs& a, const Common& c, json& config) {
    Field f = Field::parse(c.field.empty() ? "gf2" : c.field);
    config["gens"] = a.gens;
    config["max_degree"] = a.max_degree;
    config["field"] = f.to_string();
    if (a.max_degree > c.cap) throw CapExceeded("max degree " + std::to_string(a.max_degree) + " exceeds the degree cap " + std::to_string(c.cap));
    auto rels = read_relations(a.relations, a.gens, f, c.cap);
    auto profile = DegreeProfile::of_relations(rels, a.gens);
    auto dims = hilbert_quotient(rels, a.gens, a.max_degree, f);
    auto lower = gs_min_series(profile, a.max_degree);
    bool gs = gs_check(dims, profile);
    bool attained = dims.c == lower.c;
    auto ent = entropy_estimate(dims, a.entropy_bits);
    Outcome o;
    o.ok = gs;
    o.result = {{"series", dims.to_json()},
                {"profile", profile.to_json()},
                {"gs_min_series", lower.to_json()},
                {"bound_attained", attained},
                {"entropy", {{"window", root_json(ent.window)}, {"at_top", root_json(ent.at_top)}}},
                {"checks", json::array({condition("gs_inequality", gs)})}};
    return o;
}

struct CertifyArgs {
    std::string profile;
    unsigned gens = 2;
    std::vector<std::string> counts;
    unsigned partial_degree = 0;
    SearchParams search;
};

Outcome run_certify(const CertifyArgs& a, const Common&, json& config) {
    DegreeProfile p;
    if (!a.profile.empty()) {
        p = DegreeProfile::from_json(read_json(a.profile));
    } else {
        p.d = a.gens;
        for (const auto& item : a.counts) {
            auto colon = item.find(':');
            if (colon == std::string::npos) throw InvalidArgument("--count expects degree:count, got '" + item + "'");
            unsigned deg = static_cast<unsigned>(parse_big(item.substr(0, colon)).get_ui());
            p.r[deg] += parse_big(item.substr(colon + 1));
        }
    }
    p.validate();
    unsigned m = a.partial_degree;
    if (m == 0) m = p.r.empty() ? 2 : p.r.rbegin()->first;
    config["profile"] = p.to_json();
    config["partial_degree"] = m;
    config["grid"] = a.search.grid;
    config["max_grid"] = a.search.max_grid;
    auto s = certify_infinite(p, m, a.search);
    Outcome o;
    o.ok = s.witness.has_value();
    json r{{"grid_min", q_text(s.grid_min)}, {"grid_argmin", q_text(s.grid_argmin)}, {"grids_scanned", s.grids_scanned}};
    if (s.witness)
        r["witness"] = {{"m", s.witness->m}, {"t", q_text(s.witness->t)}, {"value", q_text(s.witness->value)}};
    else
        r["witness"] = nullptr;
    r["checks"] = json::array({condition("negative_partial_polynomial", o.ok)});
    r["reading"] = o.ok ? "infinite-dimensional: P_m(t) < 0 at a rational t in (0,1)" : "no witness found (inconclusive)";
    o.result = std::move(r);
    return o;
}

struct LadderArgs {
    std::string strategy = "lex-greedy";
    unsigned levels = 3;
    std::string schedule;
    std::string input;
    std::uint64_t default_target = 2;
    unsigned decompose = 0;
    unsigned absorption = 0;
    unsigned e_max = 0;
    std::string relations;
    unsigned q_level = 0;
    std::optional<long> t_n;
    unsigned half_witness = 0;
    std::uint64_t v_bound = 0;
    bool with_ladder = false;
};

Outcome run_ladder(const LadderArgs& a, const Common& c, json& config) {
    Ladder lad;
    if (!a.input.empty()) {
        lad = ladder_from_json(read_json(a.input));
    } else {
        std::optional<ESchedule> sched;
        if (!a.schedule.empty()) sched = ESchedule::from_json(read_json(a.schedule));
        lad = build_ladder(parse_strategy(a.strategy), a.levels, c.seed, sched, a.default_target);
    }
    config["strategy"] = to_string(lad.strategy());
    config["levels"] = lad.top_level();
    config["field"] = "GF(2)";
    if (lad.schedule()) config["schedule"] = lad.schedule()->to_json();

    Outcome o;
    json checks = json::array();
    auto add = [&](const std::string& key, bool ok, json detail = nullptr) {
        o.ok = o.ok && ok;
        checks.push_back(condition(key, ok, std::move(detail)));
    };
    for (const auto& ch : lad.check()) add("ladder." + ch.key, ch.ok, ch.detail.empty() ? json(nullptr) : json(ch.detail));

    json r;
    r["dims_V"] = json::array();
    for (unsigned m = 0; m <= lad.top_level(); ++m) r["dims_V"].push_back(lad.dim_v(m));
    if (a.with_ladder) r["ladder"] = lad.to_json();

    unsigned cap = std::min(kLadderDegreeCap, (2u << lad.top_level()) - 1);
    if (a.decompose) {
        config["decompose"] = a.decompose;
        json d = json::array();
        for (unsigned k = 1; k <= std::min(a.decompose, cap); ++k) {
            auto dec = decompose_binary(lad, k);
            add("binary_direct_sum", dec.direct_sum_lt && dec.direct_sum_gt, json{{"k", k}});
            d.push_back(dec.to_json());
        }
        r["decompositions"] = d;
    }
    if (a.absorption) {
        config["absorption"] = a.absorption;
        unsigned bad = 0, pairs = 0;
        for (unsigned k = 1; k < a.absorption; ++k)
            for (unsigned l = 1; k + l <= std::min(a.absorption, cap); ++l) {
                auto res = absorption_check(lad, k, l);
                ++pairs;
                if (!res.left_ok) {
                    add("absorption_left", false, json{{"k", k}, {"l", l}});
                    ++bad;
                }
                if (!res.right_ok) {
                    add("absorption_right", false, json{{"k", k}, {"l", l}});
                    ++bad;
                }
            }
        if (!bad) add("absorption", true, json{{"pairs", pairs}});
        r["absorption_pairs"] = pairs;
    }
    if (a.e_max) {
        config["e_max"] = a.e_max;
        json es = json::array();
        std::optional<ESpace> prev;
        for (unsigned k = 1; k <= a.e_max; ++k) {
            ESpace E;
            try {
                E = compute_E(lad, k);
            } catch (const CapExceeded& e) {
                es.push_back({{"k", k}, {"status", "infeasible"}, {"reason", e.what()}});
                prev.reset();
                continue;
            }
            auto p1 = quotient_bound_check(lad, E);
            add("quotient_dim_bound", p1.ok, json{{"k", k}});
            json ej{{"k", k}, {"n", E.n}, {"dim_E", E.dim()}, {"constraints_used", E.constraints_used},
                    {"quotient_dim", p1.lhs.get_str()}, {"bound", p1.rhs.get_str()}, {"bound_ok", p1.ok}};
            if (prev) {
                bool step = ideal_step_check(*prev, E);
                add("ideal_step", step, json{{"k", k - 1}});
                ej["ideal_step_from_previous"] = step;
            }
            es.push_back(ej);
            prev = std::move(E);
        }
        r["E"] = es;
    }
    if (a.q_level) {
        Field f = Field::gf2();
        auto rels = read_relations(a.relations, 2, f, c.cap);
        config["q_level"] = a.q_level;
        if (a.t_n) config["t_n"] = *a.t_n;
        auto q = compute_Q(lad, rels, a.q_level, a.t_n);
        add("q_space_bound", q.bound_ok || q.hypothesis == "fails", json{{"n", q.n}, {"hypothesis", q.hypothesis}});
        r["Q"] = {{"n", q.n},
                  {"window", {q.window_lo, q.window_hi}},
                  {"relations_in_window", q.relations_in_window},
                  {"dim_Q", q.dim_q},
                  {"bound", q_text(q.bound)},
                  {"bound_ok", q.bound_ok},
                  {"hypothesis", q.hypothesis}};
    }
    if (a.half_witness) {
        config["half_witness_level"] = a.half_witness;
        auto w = half_monomial_witness(lad, a.half_witness);
        add("half_monomial_witness", w.at_least_half && w.independent, json{{"l", w.l}});
        r["half_monomial_witness"] = {{"l", w.l}, {"letter", std::string(1, w.letter)}, {"p", w.p},
                                      {"dim_V", w.dim_v}, {"at_least_half", w.at_least_half}, {"independent", w.independent}};
    }
    if (a.v_bound) {
        config["v_bound"] = a.v_bound;
        json vb = json::array();
        for (std::uint64_t alpha = 1; alpha <= a.v_bound; ++alpha) {
            auto res = v_bound_check(lad, alpha);
            if (res.applicable()) add("v_bound", res.ok, json{{"alpha", alpha}});
            json v{{"alpha", alpha}, {"dim", res.dim.get_str()}, {"bound", res.bound.get_str()}, {"ok", res.ok},
                   {"applicable", res.applicable()}};
            v["m"] = res.m ? json(*res.m) : json(nullptr);
            vb.push_back(v);
        }
        r["v_bound"] = vb;
    }
    r["checks"] = checks;
    o.result = std::move(r);
    return o;
}

struct PlannerInput {
    std::string profile;
    std::string degrees;
};

DyadicProfile load_profile(const PlannerInput& in, std::optional<DegreeSupport>& degrees, json& config) {
    if (in.profile.empty() && in.degrees.empty()) throw InvalidArgument("give --profile or --degrees");
    if (!in.degrees.empty()) degrees = DegreeSupport::from_json(read_json(in.degrees));
    DyadicProfile p = in.profile.empty() ? dyadic_profile(*degrees) : DyadicProfile::from_json(read_json(in.profile));
    config["profile"] = p.to_json();
    if (degrees) config["degrees"] = degrees->to_json();
    return p;
}

struct ScheduleArgs {
    PlannerInput in;
    std::string r0 = "unit";
    std::string s_reading = "interval";
    bool strict = false;
};

Outcome run_schedule(const ScheduleArgs& a, const Common&, json& config) {
    std::optional<DegreeSupport> degrees;
    auto p = load_profile(a.in, degrees, config);
    R0Convention r0 = a.r0 == "zero" ? R0Convention::zero : R0Convention::unit;
    ScheduleOptions opts{a.s_reading == "pair" ? SReading::pair : SReading::interval, a.strict};
    config["r0_convention"] = to_string(r0);
    config["s_reading"] = to_string(opts.s_reading);
    config["strict"] = a.strict;

    auto v = validate_growth_hypotheses(p, degrees, r0);
    Outcome o;
    o.result["validation"] = v.to_json();
    auto l33 = check_product_chain(p);
    o.result["product_chain"] = l33.report.to_json();
    try {
        auto s = compute_e_schedule(p, opts);
        o.result["schedule"] = s.to_json();
        o.ok = v.ok() && s.ok();
    } catch (const InvalidArgument& e) {
        o.result["schedule"] = {{"status", "not computed"}, {"reason", e.what()}};
        o.ok = false;
    }
    return o;
}

struct BoundsArgs {
    PlannerInput in;
    std::vector<std::string> n;
};

Outcome run_bounds(const BoundsArgs& a, const Common&, json& config) {
    std::optional<DegreeSupport> degrees;
    auto p = load_profile(a.in, degrees, config);
    config["n"] = a.n;
    auto s = compute_e_schedule(p);
    Outcome o;
    o.ok = s.ok();
    o.result["schedule"] = s.to_json();
    json b = json::array();
    for (const auto& text : a.n) {
        auto rep = eval_bounds(s, parse_big(text));
        o.ok = o.ok && rep.consistency.ok();
        b.push_back(rep.to_json());
    }
    o.result["bounds"] = b;
    return o;
}

struct QuotientArgs {
    unsigned gens = 2;
    std::string relations;
    /// Default 8; random dense searches with three or more generators default to 5.
    std::optional<unsigned> precision;
    std::optional<unsigned> precision_cap;
    bool explore_gap = false;
    unsigned trials = 200;
    unsigned max_degree = 4;
};

Outcome run_quotient(const QuotientArgs& a, const Common& c, json& config) {
    const unsigned precision = a.precision.value_or(a.explore_gap && a.gens > 2 ? 5 : 8);
    config["gens"] = a.gens;
    config["precision"] = precision;
    Outcome o;
    if (a.explore_gap) {
        Field f = Field::parse(c.field.empty() ? "gfp:2147483647" : c.field);
        config["field"] = f.to_string();
        config["mode"] = "explore-gap";
        config["trials"] = a.trials;
        config["max_degree"] = a.max_degree;
        unsigned cap = a.precision_cap.value_or(default_precision_cap(a.gens));
        if (precision > cap) throw CapExceeded("precision " + std::to_string(precision) + " exceeds cap " + std::to_string(cap));
        auto g = explore_gap(a.gens, precision, a.trials, c.seed, a.max_degree, f);
        o.result["exploration"] = g.to_json();
        o.result["threshold"] = relation_threshold(a.gens).to_json();
        return o;
    }
    Field f = Field::parse(c.field.empty() ? "rational" : c.field);
    config["field"] = f.to_string();
    config["mode"] = "presentation";
    auto rels = read_relations(a.relations, a.gens, f, c.cap);
    auto ideal = truncated_ideal_basis(rels, a.gens, precision, a.precision_cap);
    o.result = quotient_verdict(ideal);
    json rel = json::array();
    for (const auto& r : rels) rel.push_back(r.to_string());
    o.result["relations"] = rel;
    o.ok = o.result["findim"].value("certified", false);
    bool noncomm = o.result["commutativity"].value("status", "") == "noncommutative";
    o.result["checks"] = json::array({condition("finite_dimensional_certificate", o.ok),
                                      json{{"key", "commutator_outside_ideal"}, {"status", noncomm ? "witness found" : "none at precision"}}});
    return o;
}

struct SubexpArgs {
    unsigned count = 2;
    std::vector<unsigned> growth_log2n{10, 20, 40};
    std::vector<std::string> lower_m;
    unsigned long refutation_log2n = 64;
};

Outcome run_subexp(const SubexpArgs& a, const Common&, json& config) {
    config["count"] = a.count;
    config["growth_log2n"] = a.growth_log2n;
    config["refutation_log2n"] = a.refutation_log2n;
    auto plan = gen_subexp_schedule(a.count);
    Outcome o;
    o.result["plan"] = plan.to_json();
    o.ok = plan.side_conditions.ok() && plan.validation.ok() && plan.schedule.ok();
    ConditionReport growth;
    for (unsigned l : a.growth_log2n) growth.checks.push_back(subexp_upper_growth_check(plan.schedule, parse_big("2^" + std::to_string(l))));
    std::vector<mpz_class> ms;
    for (const auto& m : a.lower_m) ms.push_back(parse_big(m));
    if (ms.empty()) ms.push_back(plan.levels.front());
    config["lower_m"] = json::array();
    for (const auto& m : ms) {
        config["lower_m"].push_back(m.get_str());
        growth.checks.push_back(subexp_lower_growth_check(plan.schedule, m));
    }
    growth.checks.push_back(exponential_growth_refutation(a.refutation_log2n));
    o.ok = o.ok && growth.ok();
    o.result["growth"] = growth.to_json();
    return o;
}

json memory_guard_config() {
    const char* env = std::getenv("GSALG_MEMORY_GUARD_MB");
    return {{"memory_guard_mb", memory_guard_bytes() >> 20}, {"memory_guard_env", env ? json(env) : json(nullptr)}};
}

}  // namespace

std::string flatten_text(const json& j) {
    std::string out;
    auto walk = [&](auto&& self, const json& v, const std::string& path) -> void {
        if (v.is_object() && !v.empty()) {
            for (const auto& [k, x] : v.items()) self(self, x, path.empty() ? k : path + "." + k);
        } else if (v.is_array() && !v.empty() && !std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_primitive(); })) {
            for (std::size_t i = 0; i < v.size(); ++i) self(self, v[i], path + "[" + std::to_string(i) + "]");
        } else {
            out += path + " = " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
        }
    };
    walk(walk, j, "");
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Golod-Shafarevich growth toolkit: Hilbert series, certificates, ladders, schedules and quotients", "gsalg"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* sub, bool field) {
        if (field) sub->add_option("--field", common.field, "gf2 | gfp:<p> | rational");
        sub->add_option("--seed", common.seed, "Seed recorded in the report and used by randomized strategies");
        sub->add_option("--degree-cap", common.cap, "Largest degree accepted in relation files")->check(CLI::Range(1u, 62u));
        sub->add_flag("--text", common.text, "Flattened text output instead of JSON");
        sub->add_flag("--json", [&](std::int64_t) { common.text = false; }, "JSON output (default)");
    };

    HilbertArgs ha;
    auto* hil = app.add_subcommand("hilbert", "Hilbert series of a homogeneous presentation against the minimal series");
    hil->add_option("--gens", ha.gens, "Generator count")->check(CLI::Range(1u, 16u));
    hil->add_option("--relations", ha.relations, "Relation file, one expression per line")->check(CLI::ExistingFile);
    hil->add_option("--max-degree,-N", ha.max_degree, "Series length")->check(CLI::Range(1u, 62u));
    hil->add_option("--entropy-bits", ha.entropy_bits, "Dyadic resolution of the entropy bounds");
    add_common(hil, true);

    CertifyArgs ca;
    auto* cer = app.add_subcommand("certify", "Rational witness with P_m(t) < 0");
    auto* prof_opt = cer->add_option("--profile", ca.profile, "Profile JSON {\"d\": 2, \"degree_counts\": {...}}")->check(CLI::ExistingFile);
    cer->add_option("--gens", ca.gens, "Generator count when no profile file is given");
    cer->add_option("--count", ca.counts, "degree:count, repeatable")->excludes(prof_opt);
    cer->add_option("--partial-degree,-m", ca.partial_degree, "Partial degree m (default: largest relation degree)");
    cer->add_option("--grid", ca.search.grid, "Initial grid resolution");
    cer->add_option("--max-grid", ca.search.max_grid, "Finest grid resolution");
    cer->add_option("--max-denominator", ca.search.max_denominator, "Largest denominator tried near a minimum");
    add_common(cer, false);

    LadderArgs la;
    auto* lad = app.add_subcommand("ladder", "Build and verify a V/U ladder over GF(2); decompositions, E, bounds");
    lad->add_option("--strategy", la.strategy, "trivial | lex-greedy | random");
    lad->add_option("--levels,-L", la.levels, "Top level L")->check(CLI::Range(0u, kMaxLadderLevel));
    lad->add_option("--schedule", la.schedule, "E-schedule JSON {\"e\": {\"n\": e}}")->check(CLI::ExistingFile);
    lad->add_option("--input", la.input, "User ladder JSON")->check(CLI::ExistingFile);
    lad->add_option("--default-target", la.default_target, "dim V per level without a schedule");
    lad->add_option("--decompose", la.decompose, "Binary decompositions for k = 1..K");
    lad->add_option("--absorption", la.absorption, "Absorption for all k + l <= K");
    lad->add_option("--e-max", la.e_max, "E(k), the quotient bound and ideal steps for k = 1..K");
    lad->add_option("--relations", la.relations, "GF(2) relation file for the Q space")->check(CLI::ExistingFile);
    lad->add_option("--q-level", la.q_level, "Level n of the Q space");
    lad->add_option("--t-n", la.t_n, "t_n for the count hypothesis r_n <= 2^t_n");
    lad->add_option("--half-witness", la.half_witness, "Level l of the half-monomial independence witness");
    lad->add_option("--v-bound", la.v_bound, "Check the V^> dimension bound for alpha = 1..A");
    lad->add_flag("--with-ladder", la.with_ladder, "Embed the ladder itself");
    add_common(lad, false);

    ScheduleArgs sa;
    auto* sch = app.add_subcommand("schedule", "Validate growth hypotheses and compute the e-schedule");
    sch->add_option("--profile", sa.in.profile, "Dyadic profile JSON {\"r\": {\"n\": r_n}}")->check(CLI::ExistingFile);
    sch->add_option("--degrees", sa.in.degrees, "Degree support JSON")->check(CLI::ExistingFile);
    sch->add_option("--r0", sa.r0, "unit | zero")->check(CLI::IsMember({"unit", "zero"}));
    sch->add_option("--s-reading", sa.s_reading, "interval | pair")->check(CLI::IsMember({"interval", "pair"}));
    sch->add_flag("--strict", sa.strict, "Stop at the first failed schedule invariant");
    add_common(sch, false);

    BoundsArgs ba;
    auto* bnd = app.add_subcommand("bounds", "Upper and lower bounds on dim R(n)");
    bnd->add_option("--profile", ba.in.profile, "Dyadic profile JSON")->check(CLI::ExistingFile);
    bnd->add_option("--degrees", ba.in.degrees, "Degree support JSON")->check(CLI::ExistingFile);
    bnd->add_option("--n", ba.n, "Degree n (integer or 2^k), repeatable")->required();
    add_common(bnd, false);

    QuotientArgs qa;
    auto* quo = app.add_subcommand("quotient", "Finite-dimensionality and commutativity of a truncated quotient");
    quo->add_option("--gens", qa.gens, "Generator count")->check(CLI::Range(2u, 8u));
    quo->add_option("--relations", qa.relations, "Relation file")->check(CLI::ExistingFile);
    quo->add_option("--precision,-D", qa.precision, "Truncation precision D (default 8; 5 for --explore-gap with more than 2 generators)")->check(CLI::Range(2u, 16u));
    quo->add_option("--precision-cap", qa.precision_cap, "Override the default precision cap");
    quo->add_flag("--explore-gap", qa.explore_gap, "Random search at n(n+1)/2 - 1 relations");
    quo->add_option("--trials", qa.trials, "Random presentations in --explore-gap");
    quo->add_option("--max-degree", qa.max_degree, "Largest relation degree in --explore-gap")->check(CLI::Range(2u, 8u));
    add_common(quo, true);

    SubexpArgs sx;
    auto* subexp = app.add_subcommand("c35", "Generated subexponential-growth schedule and its growth checks");
    subexp->add_option("--count", sx.count, "Number of levels")->check(CLI::Range(1u, 6u));
    subexp->add_option("--growth-log2n", sx.growth_log2n, "log2 n values for the upper growth check");
    subexp->add_option("--lower-m", sx.lower_m, "m values for the lower growth check (default: first level)");
    subexp->add_option("--refutation-log2n", sx.refutation_log2n, "log2 n for the exponential refutation");
    add_common(subexp, false);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kComputed;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kComputed;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return kUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    json config{{"subcommand", sub->get_name()}, {"seed", common.seed}, {"degree_cap", common.cap},
                {"output", common.text ? "text" : "json"}};
    config.update(memory_guard_config());
    Outcome o;
    try {
        if (sub == hil) {
            if (!ha.relations.empty()) config["inputs"] = {ha.relations};
            o = run_hilbert(ha, common, config);
        } else if (sub == cer) {
            if (!ca.profile.empty()) config["inputs"] = {ca.profile};
            o = run_certify(ca, common, config);
        } else if (sub == lad) {
            json in = json::array();
            for (const auto* p : {&la.input, &la.schedule, &la.relations})
                if (!p->empty()) in.push_back(*p);
            if (!in.empty()) config["inputs"] = in;
            o = run_ladder(la, common, config);
        } else if (sub == sch) {
            o = run_schedule(sa, common, config);
        } else if (sub == bnd) {
            o = run_bounds(ba, common, config);
        } else if (sub == quo) {
            if (!qa.relations.empty()) config["inputs"] = {qa.relations};
            o = run_quotient(qa, common, config);
        } else {
            o = run_subexp(sx, common, config);
        }
    } catch (const ParseError& e) {
        err << "input error: " << e.what() << "\n";
        return kUsage;
    } catch (const InvalidArgument& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const CapExceeded& e) {
        err << "limit exceeded: " << e.what() << "\n";
        return kUsage;
    } catch (const PropertyViolation& e) {
        o.result = {{"error", e.what()}, {"checks", json::array({condition("property", false, e.what())})}};
        o.ok = false;
    } catch (const Undecided& e) {
        o.result = {{"error", e.what()}, {"checks", json::array({condition("decidable_comparison", false, e.what())})}};
        o.ok = false;
    } catch (const nlohmann::json::exception& e) {
        err << "input error: " << e.what() << "\n";
        return kUsage;
    }

    std::set<std::string> keys;
    collect_keys(o.result, keys);
    json report{{"schema", kSchema},
                {"config", config},
                {"seed", common.seed},
                {"status", o.ok ? "ok" : "failed"},
                {"conditions", json(std::vector<std::string>(keys.begin(), keys.end()))},
                {"result", o.result}};
    if (common.text)
        out << flatten_text(report);
    else
        out << report.dump(2) << "\n";
    return o.ok ? kComputed : kFailed;
}

}  // namespace gsalg::cli
