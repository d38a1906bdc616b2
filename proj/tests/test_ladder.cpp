#include <doctest.h>

#include <set>

#include "gsalg/error.hpp"
#include "gsalg/ladder.hpp"
#include "gsalg/parser.hpp"
#include "oracle_gf2.hpp"

using namespace gsalg;
using oracle::Bits;

namespace {

// w + pi(w) for every word outside V at level m.
std::vector<Bits> u_rows(const Ladder& lad, unsigned m) {
    const auto& l = lad.level(m);
    std::vector<Bits> rows;
    for (std::uint64_t w = 0; w < l.words(); ++w) {
        if (l.in_v(w)) continue;
        Bits b = oracle::zeros(l.words());
        oracle::flip(b, w);
        for (auto p : l.image[w]) oracle::flip(b, l.v_monomials[p]);
        rows.push_back(b);
    }
    return rows;
}

// Rows of A(pre) * rows * A(post) in A(pre + len + post).
void sandwich(const std::vector<Bits>& rows, unsigned len, unsigned pre, unsigned post, oracle::Span& out) {
    unsigned total = pre + len + post;
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << pre); ++a)
        for (std::uint64_t b = 0; b < (std::uint64_t{1} << post); ++b)
            for (const auto& r : rows) {
                Bits v = oracle::zeros(std::uint64_t{1} << total);
                for (std::uint64_t w = 0; w < (std::uint64_t{1} << len); ++w)
                    if ((r[w >> 6] >> (w & 63)) & 1u) oracle::flip(v, (((a << len) | w) << post) | b);
                out.insert(v);
            }
}

std::vector<unsigned> bits_of(unsigned k, bool ascending) {
    std::vector<unsigned> p;
    for (unsigned b = 0; b < 32; ++b)
        if ((k >> b) & 1u) p.push_back(b);
    if (!ascending) std::reverse(p.begin(), p.end());
    return p;
}

// Monomials of V(2^p1) V(2^p2) ... in block order.
std::vector<std::uint64_t> v_block_words(const Ladder& lad, const std::vector<unsigned>& blocks) {
    std::vector<std::uint64_t> words{0};
    for (unsigned p : blocks) {
        std::vector<std::uint64_t> next;
        for (auto w : words)
            for (auto v : lad.level(p).v_monomials) next.push_back((w << (1u << p)) | v);
        words = next;
    }
    return words;
}

struct BlockSpaces {
    oracle::Span U, V;
};

BlockSpaces block_spaces(const Ladder& lad, unsigned k, bool ascending) {
    auto blocks = bits_of(k, ascending);
    BlockSpaces s{oracle::Span(std::uint64_t{1} << k), oracle::Span(std::uint64_t{1} << k)};
    unsigned pre = 0;
    for (unsigned p : blocks) {
        unsigned len = 1u << p;
        sandwich(u_rows(lad, p), len, pre, k - pre - len, s.U);
        pre += len;
    }
    for (auto w : v_block_words(lad, blocks)) {
        Bits b = oracle::zeros(std::uint64_t{1} << k);
        oracle::flip(b, w);
        s.V.insert(b);
    }
    return s;
}

// dim E(k) by enumerating all of A(k), k <= 3.
std::size_t brute_dim_E(const Ladder& lad, unsigned k) {
    unsigned n = 0;
    while ((1u << n) <= k) ++n;
    unsigned half = 1u << n, N = 2 * half;
    oracle::Span W(std::uint64_t{1} << N);
    auto U = u_rows(lad, n);
    sandwich(U, half, 0, half, W);
    sandwich(U, half, half, 0, W);
    std::uint64_t members = 0;
    for (std::uint64_t r = 0; r < (std::uint64_t{1} << (1u << k)); ++r) {
        bool ok = true;
        for (unsigned j = 0; j + k <= N && ok; ++j) {
            unsigned rest = N - k - j;
            for (std::uint64_t u = 0; u < (std::uint64_t{1} << j) && ok; ++u)
                for (std::uint64_t v = 0; v < (std::uint64_t{1} << rest) && ok; ++v) {
                    Bits prod = oracle::zeros(std::uint64_t{1} << N);
                    for (std::uint64_t w = 0; w < (std::uint64_t{1} << k); ++w)
                        if ((r >> w) & 1u) oracle::flip(prod, (((u << k) | w) << rest) | v);
                    ok = W.contains(prod);
                }
        }
        members += ok;
    }
    std::size_t d = 0;
    while ((std::uint64_t{1} << d) < members) ++d;
    return d;
}

mpz_class sum_of_products(const Ladder& lad, unsigned k) {
    auto dv = [&](unsigned m) {
        mpz_class p = 1;
        for (unsigned b = 0; b < 32; ++b)
            if ((m >> b) & 1u) p *= static_cast<unsigned long>(lad.dim_v(b));
        return p;
    };
    mpz_class s = 0;
    for (unsigned j = 0; j <= k; ++j) s += dv(k - j) * dv(j);
    return s;
}

}  // namespace

TEST_SUITE("ladder") {

TEST_CASE("trivial ladder keeps every monomial") {
    Ladder lad = build_ladder(LadderStrategy::trivial, 4);
    for (unsigned m = 0; m <= 4; ++m) CHECK(lad.dim_v(m) == (std::size_t{1} << (1u << m)));
    for (const auto& c : lad.check()) CHECK_MESSAGE(c.ok, c.key);
    auto dec = decompose_binary(lad, 6);
    CHECK(dec.dim_v_lt == 64);
    CHECK(dec.dim_u_lt == 0);
    for (unsigned k = 1; k <= 7; ++k) {
        CHECK(compute_E(lad, k).dim() == 0);
        auto p = quotient_bound_check(lad, k);
        CHECK(p.lhs == mpz_class(1) << k);
        CHECK(p.ok);
    }
    CHECK(quotient_bound_check(lad, 3).rhs == 32);
}

TEST_CASE("lex-greedy ladder at L=2") {
    Ladder lad = build_ladder(LadderStrategy::lex_greedy, 2);
    const auto& v2 = lad.level(1).v_monomials;
    CHECK(v2 == std::vector<std::uint64_t>{parse_word_text("xx"), parse_word_text("xy")});
    // U(2) = span{yx, yy}: both project to zero.
    CHECK(lad.project(1, parse_word_text("yx")).empty());
    CHECK(lad.project(1, parse_word_text("yy")).empty());
    auto dec = decompose_binary(lad, 2);
    CHECK(dec.dim_v_lt == 2);
    CHECK(dec.dim_u_lt == 2);
    CHECK(compute_E(lad, 1).dim() == 0);
    CHECK(absorption_check(lad, 2, 2).ok());
    auto w = half_monomial_witness(lad, 2);
    CHECK(w.letter == 'x');
    CHECK(w.p == 1);
    CHECK(w.at_least_half);
    CHECK(w.independent);
}

TEST_CASE("E matches brute-force enumeration for k <= 3") {
    std::vector<Ladder> ladders{build_ladder(LadderStrategy::trivial, 2), build_ladder(LadderStrategy::lex_greedy, 3)};
    for (std::uint64_t seed = 0; seed < 6; ++seed) ladders.push_back(build_ladder(LadderStrategy::random, 3, seed));
    for (const auto& lad : ladders)
        for (unsigned k = 1; k <= 3; ++k) {
            CAPTURE(k);
            CAPTURE(lad.seed());
            CHECK(compute_E(lad, k).dim() == brute_dim_E(lad, k));
        }
}

TEST_CASE("binary decompositions match explicit spans") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        Ladder lad = build_ladder(LadderStrategy::random, 3, seed);
        for (unsigned k = 1; k <= 10; ++k) {
            CAPTURE(seed);
            CAPTURE(k);
            auto dec = decompose_binary(lad, k);
            for (bool asc : {true, false}) {
                auto s = block_spaces(lad, k, asc);
                std::uint64_t du = asc ? dec.dim_u_lt : dec.dim_u_gt, dv = asc ? dec.dim_v_lt : dec.dim_v_gt;
                CHECK(s.U.rank() == du);
                CHECK(s.V.rank() == dv);
                oracle::Span sum = s.U;
                for (const auto& r : s.V.rows()) sum.insert(r);
                CHECK(sum.rank() == (std::size_t{1} << k));
                CHECK(du + dv == (std::uint64_t{1} << k));
            }
            CHECK(dec.direct_sum_lt);
            CHECK(dec.direct_sum_gt);
            CHECK(dim_v_binary(lad, k) == static_cast<unsigned long>(dec.dim_v_lt));
        }
    }
}

TEST_CASE("absorption matches explicit containment") {
    for (std::uint64_t seed = 10; seed < 13; ++seed) {
        Ladder lad = build_ladder(LadderStrategy::random, 3, seed);
        for (unsigned k = 1; k <= 5; ++k)
            for (unsigned l = 1; k + l <= 8; ++l) {
                auto sl = block_spaces(lad, l, true), big = block_spaces(lad, k + l, true);
                bool left = true;
                sandwich(sl.U.rows(), l, k, 0, big.U);  // rank grows iff containment fails
                left = big.U.rank() == block_spaces(lad, k + l, true).U.rank();
                auto sr = block_spaces(lad, k, false), bigr = block_spaces(lad, k + l, false);
                std::size_t before = bigr.U.rank();
                sandwich(sr.U.rows(), k, 0, l, bigr.U);
                bool right = bigr.U.rank() == before;
                auto res = absorption_check(lad, k, l);
                CHECK(res.left_ok == left);
                CHECK(res.right_ok == right);
                CHECK(res.ok());
            }
    }
}

TEST_CASE("E is an ideal and the quotient bound holds on random ladders") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        Ladder lad = build_ladder(LadderStrategy::random, 4, seed);
        std::optional<ESpace> prev;
        for (unsigned k = 1; k <= 7; ++k) {
            ESpace E = compute_E(lad, k);
            auto p = quotient_bound_check(lad, E);
            CHECK(p.lhs == (mpz_class(1) << k) - static_cast<unsigned long>(E.dim()));
            CHECK(p.rhs == sum_of_products(lad, k));
            CHECK(p.ok);
            CHECK(p.lhs >= 1);
            if (prev) CHECK(ideal_step_check(*prev, E));
            prev = std::move(E);
        }
    }
}

TEST_CASE("lex-greedy E dimensions are pinned") {
    Ladder lad = build_ladder(LadderStrategy::lex_greedy, 3);
    std::vector<std::size_t> dims;
    for (unsigned k = 1; k <= 7; ++k) dims.push_back(compute_E(lad, k).dim());
    CHECK(dims == std::vector<std::size_t>{0, 1, 4, 11, 26, 57, 120});
}

TEST_CASE("a broken level is detected") {
    Ladder lad = build_ladder(LadderStrategy::lex_greedy, 3);
    Ladder bad = lad.with_broken_level(3);
    bool any_failed = false;
    for (const auto& c : bad.check()) any_failed = any_failed || !c.ok;
    CHECK(any_failed);
    CHECK_THROWS_AS(bad.verify(), PropertyViolation);
    bool absorbed = true;
    for (unsigned k = 1; k < 8; ++k) absorbed = absorbed && absorption_check(bad, k, 8 - k).ok();
    CHECK_FALSE(absorbed);
}

TEST_CASE("user ladders are validated") {
    auto good = nlohmann::json::parse(R"({"levels": [{"V": ["x", "y"]}, {"V": ["xx", "xy"], "U": ["yx", "yy+xy"]},
                                                     {"V": ["xxxx"], "U": "complete"}]})");
    Ladder lad = ladder_from_json(good);
    CHECK(lad.dim_v(2) == 1);
    CHECK(lad.project(1, parse_word_text("yy")) == std::vector<std::uint32_t>{1});
    // xx*yx must lie in U(4), but this row sends it to xxxx.
    auto broken = nlohmann::json::parse(R"({"levels": [{"V": ["x", "y"]}, {"V": ["xx", "xy"], "U": ["yx", "yy"]},
        {"V": ["xxxx"], "U": ["xxxy", "xyxx", "xyxy", "xxyx+xxxx", "xxyy", "xyyx", "xyyy", "yxxx", "yxxy", "yxyx", "yxyy",
                              "yyxx", "yyxy", "yyyx", "yyyy"]}]})");
    CHECK_THROWS_AS(ladder_from_json(broken), PropertyViolation);
    auto not_in_vv = nlohmann::json::parse(R"({"levels": [{"V": ["x", "y"]}, {"V": ["xx"], "U": "complete"}, {"V": ["yyyy"]}]})");
    CHECK_THROWS_AS(ladder_from_json(not_in_vv), PropertyViolation);
    auto not_complement = nlohmann::json::parse(R"({"levels": [{"V": ["x", "y"]}, {"V": ["xx", "xy"], "U": ["yx"]}]})");
    CHECK_THROWS_AS(ladder_from_json(not_complement), PropertyViolation);
}

TEST_CASE("scheduled targets and the V bound") {
    ESchedule s;
    s.e[3] = 1;
    CHECK(s.target(1) == 2u);
    CHECK(s.target(2) == 4u);
    CHECK(s.target(3) == 2u);
    Ladder lad = build_ladder(LadderStrategy::lex_greedy, 3, 0, s);
    CHECK(lad.dim_v(1) == 2);
    CHECK(lad.dim_v(2) == 4);
    auto r = v_bound_check(lad, 6);
    REQUIRE(r.m);
    CHECK(*r.m == 3);
    CHECK(r.dim == 8);
    CHECK(r.bound == 2 * 6 * 16);
    CHECK(r.ok);
    auto one = v_bound_check(lad, 1);
    CHECK_FALSE(one.applicable());
    CHECK(one.dim == 2);
    CHECK(one.bound == 2);
    Ladder trivial_targets = build_ladder(LadderStrategy::lex_greedy, 3);
    CHECK_THROWS_AS(v_bound_check(trivial_targets, 3), InvalidArgument);
    for (std::uint64_t a = 2; a < 16; ++a) CHECK(v_bound_check(lad, a).ok);
}

TEST_CASE("Q space over the degree window") {
    Ladder lad = build_ladder(LadderStrategy::lex_greedy, 3);
    auto empty = compute_Q(lad, {}, 3);
    CHECK(empty.window_lo == 10);
    CHECK(empty.window_hi == 14);
    CHECK(empty.dim_q == 0);
    CHECK(empty.bound_ok);
    auto outside = compute_Q(lad, {parse_element("(x*y)^4", 2, Field::gf2())}, 3);
    CHECK(outside.relations_in_window == 0);
    CHECK(outside.dim_q == 0);

    Element f = parse_element("(x*y)^5", 2, Field::gf2());
    auto q = compute_Q(lad, {f}, 3, 2);
    CHECK(q.relations_in_window == 1);
    // Q is spanned by the distinct words v1 f v2, v1 in V^>(i), v2 in V^<(j), i + j = 6.
    std::set<std::uint64_t> words;
    std::uint64_t fw = f.component(10).terms().begin()->first;
    for (unsigned i = 0; i <= 6; ++i)
        for (auto a : v_block_words(lad, bits_of(i, false)))
            for (auto b : v_block_words(lad, bits_of(6 - i, true))) words.insert((((a << 10) | fw) << (6 - i)) | b);
    CHECK(q.dim_q == words.size());
    CHECK(q.hypothesis == "holds");
    CHECK(compute_Q(lad, {f}, 3).hypothesis == "not evaluated");
    CHECK(compute_Q(lad, {f}, 3, -1).hypothesis == "fails");
    CHECK(compute_Q(lad, {f}, 3, 0).hypothesis == "holds");
}

TEST_CASE("binary blocks") {
    CHECK(binary_blocks(6, BlockOrder::ascending) == std::vector<unsigned>{1, 2});
    CHECK(binary_blocks(6, BlockOrder::descending) == std::vector<unsigned>{2, 1});
    CHECK(binary_blocks(13, BlockOrder::ascending) == std::vector<unsigned>{0, 2, 3});
}

TEST_CASE("ladder json round trip") {
    Ladder lad = build_ladder(LadderStrategy::random, 3, 5);
    Ladder back = ladder_from_json(lad.to_json(3));
    for (unsigned m = 0; m <= 3; ++m) {
        CHECK(back.level(m).v_monomials == lad.level(m).v_monomials);
        CHECK(back.level(m).image == lad.level(m).image);
    }
}

}  // TEST_SUITE
