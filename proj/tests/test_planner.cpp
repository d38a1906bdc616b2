#include <doctest.h>

#include <random>

#include "gsalg/error.hpp"
#include "gsalg/planner.hpp"
#include "profile_gen.hpp"

using namespace gsalg;

namespace {

Magnitude p2(long e) { return Magnitude::pow2(Exponent(e)); }

DyadicProfile single(long n, const Magnitude& r) {
    DyadicProfile p;
    p.r[n] = r;
    return p;
}

const ConditionCheck* find(const ConditionReport& rep, const std::string& key) {
    for (const auto& c : rep.checks)
        if (c.key == key && !c.ok) return &c;
    return nullptr;
}

/// e with 2^(2^(e-3)) <= r < 2^(2^(e-2)), by direct search on small integers.
long bracket_by_search(const mpz_class& r) {
    for (long e = 3;; ++e) {
        mpz_class lo = mpz_class(1) << (1ul << (e - 3)), hi = mpz_class(1) << (1ul << (e - 2));
        if (lo <= r && r < hi) return e;
    }
}

}  // namespace

TEST_SUITE("planner") {

TEST_CASE("sparse binary matches mpz") {
    std::mt19937_64 rng(11);
    gmp_randclass g(gmp_randinit_default);
    g.seed(5);
    for (int i = 0; i < 300; ++i) {
        mpz_class a = g.get_z_bits(1 + rng() % 300), b = g.get_z_bits(1 + rng() % 300);
        SparseBinary sa(a), sb(b);
        CHECK(*sa.value() == a);
        CHECK(sa.bit_length() == mpz_class(mpz_sizeinbase(a.get_mpz_t(), 2) * (a != 0)));
        CHECK(((sa <=> sb) == 0) == (a == b));
        CHECK(((sa <=> sb) < 0) == (a < b));
        CHECK(SparseBinary::from_json(sa.to_json()) == sa);
    }
    auto huge = SparseBinary::from_bits({mpz_class("1000000000000"), 3});
    CHECK_FALSE(huge.value().has_value());
    CHECK(SparseBinary::from_json(huge.to_json()) == huge);
    CHECK_THROWS_AS(SparseBinary::from_bits({2, 2}), InvalidArgument);
    CHECK_THROWS_AS(SparseBinary(mpz_class(-1)), InvalidArgument);
}

TEST_CASE("dyadic levels and profiles") {
    for (long d = 2; d < 3000; ++d) {
        long n = 0;
        while (!((1L << n) < d && d <= (2L << n))) ++n;
        CHECK(dyadic_level(SparseBinary(d)) == n);

        std::optional<long> w;
        for (long k = 0; k < 14 && !w; ++k)
            if (8 * d >= 7 * (1L << k) && 8 * d <= 10 * (1L << k)) w = k;
        auto got = forbidden_window_level(SparseBinary(d));
        CHECK(got.has_value() == w.has_value());
        if (got && w) CHECK(*got == *w);
    }
    // Sparse path: 2^m + 2^(m-1) lies strictly between the windows of m and m + 1.
    mpz_class m("123456789012345");
    CHECK_FALSE(forbidden_window_level(SparseBinary::from_bits({m, m - 1})).has_value());
    CHECK(*forbidden_window_level(SparseBinary::from_bits({m, m - 2})) == m);
    CHECK(*forbidden_window_level(SparseBinary::from_bits({m, m - 1, m - 2})) == m + 1);
    CHECK(dyadic_level(SparseBinary::from_bits({m})) == m - 1);
    CHECK_THROWS_AS(dyadic_level(SparseBinary(1)), InvalidArgument);

    DegreeSupport d1;
    d1.add(SparseBinary(3));
    CHECK(dyadic_profile(d1).r == std::map<mpz_class, Magnitude>{{1, Magnitude(1)}});
    DegreeSupport d2;
    d2.add(SparseBinary(256));
    CHECK(dyadic_profile(d2).support() == std::vector<mpz_class>{7});
    DegreeSupport d3;
    for (long d : {257, 300, 512}) d3.add(SparseBinary(d));
    CHECK(dyadic_profile(d3).r.at(8) == Magnitude(3));
    CHECK(DegreeSupport::from_json(d3.to_json()).degrees.size() == 3);
}

TEST_CASE("profile JSON") {
    auto p = DyadicProfile::from_json(nlohmann::json::parse(R"({"r": {"8": 65536, "20": "2^600", "30": 0}})"));
    CHECK(p.support() == std::vector<mpz_class>{8, 20});
    CHECK(p.r.at(20) == p2(600));
    CHECK(DyadicProfile::from_json(p.to_json()).r == p.r);
    CHECK_THROWS_AS(DyadicProfile::from_json(nlohmann::json::parse(R"({"r": {"x": 1}})")), ParseError);
    CHECK_THROWS_AS(DyadicProfile::from_json(nlohmann::json::parse(R"({"r": {"9": "1/2"}})")), ParseError);
}

TEST_CASE("hypothesis validation examples") {
    DyadicProfile p;
    p.r[8] = p2(16);
    p.r[20] = p2(600);
    auto rep = validate_growth_hypotheses(p);
    bool lower_ok = false;
    for (const auto& c : rep.checks)
        if (c.key == "chain_lower" && c.n == 20 && c.m == 8) lower_ok = c.ok;
    CHECK(lower_ok);  // 2^64 * 2^528 < 2^600
    const ConditionCheck* up = nullptr;
    for (const auto& c : rep.checks)
        if (c.key == "chain_upper" && c.n == 20 && c.m == 8) up = &c;
    REQUIRE(up);
    CHECK_FALSE(up->ok);  // 600 >= 2^9
    CHECK_FALSE(rep.ok());

    CHECK(validate_growth_hypotheses(DyadicProfile{}).ok());
    CHECK_FALSE(validate_growth_hypotheses(single(7, p2(200))).ok());

    DegreeSupport bad;
    bad.add(SparseBinary(260), Magnitude(1));  // 2^8 + 2^2 lies in the window of level 8
    auto wrep = validate_growth_hypotheses(dyadic_profile(bad), bad);
    CHECK(find(wrep, "degrees_avoid_forbidden_windows"));
}

TEST_CASE("bracketing exponent") {
    CHECK(bracket_exponent(Magnitude(2)) == 3);
    CHECK(bracket_exponent(Magnitude(256)) == 6);
    CHECK(bracket_exponent(p2(1024)) == 13);
    CHECK(bracket_exponent(Magnitude::tower2(mpz_class(40))) == 43);
    CHECK(bracket_exponent(Magnitude::power(40, Exponent(8242408))) == 28);
    for (long r = 2; r < 70000; r += 1 + r / 64) CHECK(bracket_exponent(Magnitude(r)) == bracket_by_search(r));
    // Boundaries: r = 2^(2^j) opens a bracket, r = 2^(2^j) - 1 closes the previous one.
    for (long j = 0; j < 5; ++j) {
        mpz_class t = mpz_class(1) << (1ul << j);
        CHECK(bracket_exponent(Magnitude(t)) == j + 3);
        if (t > 2) CHECK(bracket_exponent(Magnitude(mpz_class(t - 1))) == j + 2);
    }
    CHECK_THROWS_AS(bracket_exponent(Magnitude(1)), InvalidArgument);
}

TEST_CASE("schedule invariants re-derived in exponent arithmetic") {
    std::mt19937_64 rng(2024);
    int feasible = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto pp = testgen::random_power_profile(rng, 1 + trial % 3);
        Schedule s = compute_e_schedule(pp.profile());
        mpz_class prior = 0;
        bool all = true;
        for (const auto& [n, a] : pp.a) {
            long e = 3;
            while (!(a < testgen::pow2z(e - 2))) ++e;
            CHECK(testgen::pow2z(e - 3) <= a);
            CHECK(s.e.at(n) == e);
            bool master = a + 3 * n + 4 + prior <= testgen::pow2z(e - 1);
            bool fourth = testgen::pow2z(e) >= 4 * a;
            bool range = 2 * (e + 1) <= n;
            CHECK(fourth);
            all = all && master && range;
            if (s.t.count(n)) CHECK(s.t.at(n) == testgen::pow2z(e - 1) - 3 * n - 4 - prior);
            prior += testgen::pow2z(e + 2);
        }
        bool disjoint = true;
        for (auto i = pp.a.begin(); i != pp.a.end(); ++i)
            for (auto j = std::next(i); j != pp.a.end(); ++j)
                if (j->first - 1 - s.e.at(j->first) <= i->first - 1) disjoint = false;
        all = all && disjoint;
        CHECK(s.ok() == all);
        feasible += all;
    }
    MESSAGE("schedules passing every invariant: " << feasible << " / 60");
}

TEST_CASE("small counts cannot satisfy the master inequality") {
    for (long n = 8; n < 200; ++n) {
        CHECK(find(compute_e_schedule(single(n, Magnitude(2))).report, "master_inequality"));
        CHECK(find(compute_e_schedule(single(n, Magnitude(256))).report, "master_inequality"));
    }
    // e = 13 leaves 2^12 - 1024 for 3n + 4; e <= n/2 - 1 needs n >= 28.
    for (long n = 20; n < 1100; n += 7) {
        Schedule s = compute_e_schedule(single(n, p2(1024)));
        bool master = 1024 + 3 * n + 4 <= 4096;
        CHECK((find(s.report, "master_inequality") == nullptr) == master);
        CHECK(s.ok() == (master && n >= 28));
    }
    CHECK_THROWS_AS(compute_e_schedule(single(30, Magnitude(2)), {SReading::interval, true}), PropertyViolation);
    CHECK_THROWS_AS(compute_e_schedule(single(30, Magnitude(1))), InvalidArgument);
}

TEST_CASE("interval and pair readings of S") {
    DyadicProfile p;
    p.r[30] = p2(1024);   // e = 13, S = {16..29}
    p.r[40] = p2(1024);   // e = 13, S = {26..39}
    CHECK(find(compute_e_schedule(p).report, "S_disjoint"));
    CHECK_FALSE(find(compute_e_schedule(p, {SReading::pair, false}).report, "S_disjoint"));
}

TEST_CASE("growth bounds") {
    Schedule s = compute_e_schedule(single(8, p2(16)));
    CHECK(s.e.at(8) == 7);
    BoundsReport b = eval_bounds(s, 1024);
    REQUIRE(b.k);
    CHECK(*b.k == 8);
    CHECK(b.upper == p2(571));
    REQUIRE(b.lower_relations);
    CHECK(*b.lower_relations == p2(63));
    CHECK(*b.lower_schedule == p2(127));
    CHECK(b.upper_degree == p2(3 + 30 + 512));
    CHECK(b.consistency.ok());

    Schedule empty = compute_e_schedule(DyadicProfile{});
    BoundsReport be = eval_bounds(empty, 1000);
    CHECK_FALSE(be.k);
    CHECK(be.upper_degree == Magnitude(8) * Magnitude(1000).pow(3));
    CHECK_FALSE(be.lower_relations);

    BoundsReport small = eval_bounds(s, 4);
    CHECK_FALSE(small.k);
    CHECK(small.to_json()["k"] == "inapplicable");
    // k = 8 needs 2^8 <= n^2.
    CHECK_FALSE(eval_bounds(s, 15).k);
    CHECK(eval_bounds(s, 16).k);
    CHECK_THROWS_AS(eval_bounds(s, 0), InvalidArgument);
}

TEST_CASE("product chain follows from the hypotheses") {
    std::mt19937_64 rng(77);
    int passed = 0;
    for (int trial = 0; trial < 150; ++trial) {
        auto pp = testgen::random_power_profile(rng, 1 + trial % 4);
        // Perturb some exponents out of range so the implication is also exercised on rejects.
        if (trial % 3 == 0) {
            auto it = std::next(pp.a.begin(), static_cast<long>(rng() % pp.a.size()));
            it->second += (rng() % 2 ? 1 : -1) * static_cast<long>(1 + rng() % 64);
            if (it->second < 1) it->second = 1;
        }
        auto prof = pp.profile();
        bool valid = validate_growth_hypotheses(prof).ok();
        bool chain = check_product_chain(prof).ok;
        mpz_class sum = 0;
        bool oracle = true;
        for (const auto& [n, a] : pp.a) {
            oracle = oracle && 3 * n + 4 + 32 * sum < a;
            sum += a;
        }
        CHECK(chain == oracle);
        if (valid) {
            ++passed;
            CHECK(chain);
        }
        if (trial % 3 != 0) CHECK(valid);
    }
    CHECK(passed >= 100);
}

TEST_CASE("the r_0 = 0 reading breaks the product chain") {
    DyadicProfile p = single(10, Magnitude(2));
    CHECK(validate_growth_hypotheses(p, std::nullopt, R0Convention::zero).ok());
    CHECK_FALSE(validate_growth_hypotheses(p, std::nullopt, R0Convention::unit).ok());
    CHECK_FALSE(check_product_chain(p).ok);
}

TEST_CASE("generated subexponential schedule") {
    auto none = gen_subexp_schedule(0);
    CHECK(none.levels.empty());
    CHECK(none.validation.ok());

    auto one = gen_subexp_schedule(1);
    CHECK(one.levels == std::vector<mpz_class>{101});
    CHECK(one.profile.r.at(101) == Magnitude::power(40, Exponent(8242408)));
    CHECK(one.side_conditions.ok());

    auto two = gen_subexp_schedule(2);
    CHECK(two.levels == std::vector<mpz_class>{101, 206060201});
    CHECK(two.side_conditions.ok());
    CHECK(two.validation.ok());
    CHECK(check_product_chain(two.profile).ok);
    CHECK(two.schedule.ok());
    // Degrees 2^m + 2^(m-1) sit at level m.
    CHECK(two.profile.support() == two.levels);

    for (unsigned long l : {10ul, 20ul, 40ul}) CHECK(subexp_upper_growth_check(two.schedule, mpz_class(1) << l).ok);
    CHECK(subexp_lower_growth_check(two.schedule, 101).ok);
    CHECK(exponential_growth_refutation(64).ok);
}

}  // TEST_SUITE
