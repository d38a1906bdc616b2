#include <doctest.h>

#include <map>
#include <random>

#include "gsalg/error.hpp"
#include "gsalg/gs_series.hpp"
#include "gsalg/parser.hpp"
#include "gsalg/quotient.hpp"

using namespace gsalg;

namespace {

std::uint64_t ipow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

/// Dense echelon form of span{trunc_D(u f v)} over GF(p), columns in degree-ascending order.
struct DenseIdeal {
    unsigned n, D;
    std::uint64_t p;
    std::vector<std::uint64_t> offset;  // offset[k-1] = first column of degree k
    std::map<std::uint64_t, std::vector<std::uint64_t>> pivots;

    DenseIdeal(unsigned n_, unsigned D_, std::uint64_t p_) : n(n_), D(D_), p(p_) {
        offset.push_back(0);
        for (unsigned k = 1; k <= D; ++k) offset.push_back(offset.back() + ipow(n, k));
    }

    std::uint64_t inv(std::uint64_t a) const {
        std::uint64_t r = 1, e = p - 2;
        for (; e; e >>= 1, a = a * a % p)
            if (e & 1) r = r * a % p;
        return r;
    }

    void insert(std::vector<std::uint64_t> row) {
        for (std::uint64_t c = 0; c < row.size(); ++c) {
            if (!row[c]) continue;
            auto it = pivots.find(c);
            if (it == pivots.end()) {
                std::uint64_t s = inv(row[c]);
                for (auto& x : row) x = x * s % p;
                pivots.emplace(c, std::move(row));
                return;
            }
            std::uint64_t f = row[c];
            for (std::uint64_t j = c; j < row.size(); ++j) row[j] = (row[j] + (p - f) * it->second[j]) % p;
        }
    }

    void add(const Element& f) {
        for (unsigned lu = 0; lu + *f.order() <= D; ++lu)
            for (unsigned lv = 0; lu + lv + *f.order() <= D; ++lv)
                for (std::uint64_t u = 0; u < ipow(n, lu); ++u)
                    for (std::uint64_t v = 0; v < ipow(n, lv); ++v) {
                        std::vector<std::uint64_t> row(offset.back(), 0);
                        for (const auto& [deg, h] : f.components()) {
                            unsigned total = lu + deg + lv;
                            if (total > D) continue;
                            for (const auto& [t, c] : h.terms()) {
                                std::uint64_t w = (u * ipow(n, deg) + t) * ipow(n, lv) + v;
                                row[offset[total - 1] + w] = (row[offset[total - 1] + w] + c.residue()) % p;
                            }
                        }
                        insert(std::move(row));
                    }
    }

    std::vector<std::uint64_t> quotient_dims() const {
        std::vector<std::uint64_t> d;
        for (unsigned k = 1; k <= D; ++k) {
            std::uint64_t lead = 0;
            for (const auto& [c, r] : pivots) lead += c >= offset[k - 1] && c < offset[k];
            d.push_back(ipow(n, k) - lead);
        }
        return d;
    }
};

std::vector<Element> rels(const std::string& text, unsigned n = 2, Field f = Field::rational()) { return parse_relations(text, n, f); }

}  // namespace

TEST_SUITE("quotient") {

TEST_CASE("truncated layout") {
    TruncatedLayout l(3, 4);
    CHECK(l.ncols() == 3 + 9 + 27 + 81);
    for (unsigned k = 1; k <= 4; ++k) {
        CHECK(l.degree_of(l.column(k, 0)) == k);
        CHECK(l.degree_of(l.column(k, ipow(3, k) - 1)) == k);
    }
    CHECK(default_precision_cap(2) == 10);
    CHECK(default_precision_cap(3) == 8);
    CHECK(default_precision_cap(8) == 4);
}

TEST_CASE("commutator ideal dimensions") {
    auto ideal = truncated_ideal_basis(rels("x*y - y*x"), 2, 8);
    auto dims = ideal.quotient_dims();
    for (unsigned k = 1; k <= 8; ++k) {
        CHECK(dims[k - 1] == k + 1);
        CHECK(ipow(2, k) - dims[k - 1] == ipow(2, k) - (k + 1));
    }
    CHECK(ideal.contains(parse_element("x*(x*y - y*x)", 2)));
    CHECK(ideal.contains(parse_element("(x*y - y*x)*x", 2)));
    CHECK_FALSE(ideal.contains(parse_element("x*y", 2)));
    CHECK_FALSE(certify_finite_dimensional(ideal).certified);
}

TEST_CASE("empty and inhomogeneous relations") {
    auto none = truncated_ideal_basis({}, 2, 5);
    CHECK(none.dim() == 62);
    CHECK(none.quotient_dims() == std::vector<std::uint64_t>{2, 4, 8, 16, 32});
    auto cs = commutativity_status(none);
    CHECK(cs.noncommutative);
    CHECK(cs.witness == std::pair<unsigned, unsigned>{1, 2});

    // x(x^2 + x^3) truncates to x^3 at D = 3, which then isolates x^2.
    auto t = truncated_ideal_basis(rels("x^2 + x^3"), 2, 3);
    CHECK(t.contains(parse_element("x^3", 2)));
    CHECK(t.contains(parse_element("x^2", 2)));
    CHECK_FALSE(t.contains(parse_element("x*y", 2)));
    // x^2 + x^3 = x^2 (1 + x) with 1 + x a unit of the power series ring.
    CHECK(truncated_ideal_basis(rels("x^2 + x^3"), 2, 6).contains(parse_element("x^2", 2)));

    CHECK_THROWS_AS(truncated_ideal_basis(rels("x + y^2"), 2, 4), InvalidArgument);
    CHECK_THROWS_AS(truncated_ideal_basis(rels("x^2"), 2, 11), CapExceeded);
    CHECK_NOTHROW(truncated_ideal_basis(rels("x^2"), 2, 11, 11));
    CHECK_THROWS_AS(t.embed(parse_element("1 + x^2", 2)), InvalidArgument);
}

TEST_CASE("finite-dimensional certificates") {
    auto c2 = certify_finite_dimensional(commutative_construction(2, Field::rational()), 2, 8);
    CHECK(c2.certified);
    CHECK(c2.k == 3u);
    CHECK(c2.dims == std::vector<std::uint64_t>{2, 1, 0, 0, 0, 0, 0, 0});
    auto s2 = commutativity_status(commutative_construction(2, Field::rational()), 2, 8);
    CHECK_FALSE(s2.noncommutative);
    CHECK(s2.status() == "commutative-at-precision-8");

    auto c3 = certify_finite_dimensional(commutative_construction(3, Field::rational()), 3, 6);
    CHECK(c3.k == 4u);
    CHECK(c3.dims == std::vector<std::uint64_t>{3, 3, 1, 0, 0, 0});
    CHECK_FALSE(commutativity_status(commutative_construction(3, Field::rational()), 3, 6).noncommutative);

    auto sq = certify_finite_dimensional(rels("x^2\ny^2\nx*y\ny*x"), 2, 4);
    CHECK(sq.k == 2u);
    CHECK(sq.dims == std::vector<std::uint64_t>{2, 0, 0, 0});

    auto nc = commutativity_status(rels("x^2\ny^2"), 2, 6);
    CHECK(nc.noncommutative);
    CHECK(nc.witness == std::pair<unsigned, unsigned>{1, 2});
    CHECK(nc.to_json()["witness"] == nlohmann::json{1, 2});
    CHECK_FALSE(certify_finite_dimensional(rels("x^2\ny^2"), 2, 6).certified);
}

TEST_CASE("relation threshold") {
    CHECK(relation_threshold(2).threshold == 2);
    CHECK(relation_threshold(3).threshold == 4);
    CHECK(relation_threshold(5).threshold == 13);
    CHECK(relation_threshold(4).construction_size == 10);
    CHECK(relation_threshold(4).open_gap == 9);
    CHECK(relation_threshold(2).open_gap == 2);
    CHECK_THROWS_AS(relation_threshold(1), InvalidArgument);
    CHECK(commutative_construction(4, Field::gf2()).size() == 10);
}

TEST_CASE("truncated ideal against dense elimination") {
    std::mt19937_64 rng(808);
    const std::uint32_t p = 10007;
    Field f = Field::prime(p);
    for (int trial = 0; trial < 40; ++trial) {
        unsigned n = 2 + trial % 2, D = n == 2 ? 6 : 4;
        auto r = random_presentation(rng, n, 1 + trial % 3, 2, 4, f);
        DenseIdeal dense(n, D, p);
        for (const auto& e : r) dense.add(e);
        auto ideal = truncated_ideal_basis(r, n, D);
        CHECK(ideal.quotient_dims() == dense.quotient_dims());
        CHECK(ideal.dim() == dense.offset.back() - dense.pivots.size());
    }
}

TEST_CASE("random presentations respect their shape") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        auto r = random_presentation(rng, 3, 4, 2, 4, Field::rational());
        REQUIRE(r.size() == 4);
        for (const auto& e : r) {
            CHECK(*e.order() >= 2);
            CHECK(*e.top_degree() <= 4);
            for (const auto& [deg, h] : e.components())
                for (const auto& [w, c] : h.terms()) CHECK((c.rational() == 1 || c.rational() == -1));
        }
    }
}

TEST_CASE("truncation coherence") {
    std::mt19937_64 rng(31337);
    Field f = Field::prime(10007);
    for (int trial = 0; trial < 20; ++trial) {
        auto r = random_presentation(rng, 2, 2, 2, 3, f);
        auto lo = truncated_ideal_basis(r, 2, 5), hi = truncated_ideal_basis(r, 2, 6);
        auto dl = lo.quotient_dims(), dh = hi.quotient_dims();
        for (unsigned k = 0; k < 5; ++k) CHECK(dl[k] <= dh[k]);
        // Ideal elements and their perturbations by degree-6 words.
        for (int s = 0; s < 10; ++s) {
            Element e = r[rng() % r.size()];
            e = parse_element(rng() % 2 ? "x" : "y", 2, f) * e + e * parse_element(rng() % 2 ? "x*x" : "y", 2, f);
            if (s % 2) e = e + parse_element("x^3*y^3", 2, f);
            if (hi.contains(e)) CHECK(lo.contains(e));
            CHECK(lo.contains(e));
        }
    }
}

TEST_CASE("certified quotients are noncommutative") {
    std::mt19937_64 rng(4242);
    Field f = Field::prime(2147483647);
    int certified = 0;
    for (int trial = 0; trial < 40; ++trial) {
        auto r = random_presentation(rng, 2, 2, 2, 4, f);
        auto ideal = truncated_ideal_basis(r, 2, 6);
        if (certify_finite_dimensional(ideal).certified) {
            ++certified;
            CHECK(commutativity_status(ideal).noncommutative);
        }
    }
    MESSAGE("certified presentations: " << certified << " / 40");
}

TEST_CASE("homogeneous presentations agree with the Hilbert series") {
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 20; ++trial) {
        Field f = trial % 2 ? Field::gf2() : Field::prime(101);
        std::vector<Element> r;
        for (unsigned i = 0, c = rng() % 4; i < c; ++i) {
            unsigned k = 2 + rng() % 3;
            HomogeneousElement h(f, 2, k);
            while (h.is_zero()) h.add_term(rng() % (1u << k), Scalar(f, static_cast<long>(1 + rng() % 3)));
            r.push_back(Element::from_homogeneous(h));
        }
        auto series = hilbert_quotient(r, 2, 7, f);
        auto dims = truncated_ideal_basis(r, 2, 7).quotient_dims();
        for (unsigned k = 1; k <= 7; ++k) CHECK(series.c[k] == dims[k - 1]);
    }
}

TEST_CASE("gap exploration is reproducible") {
    auto a = explore_gap(2, 6, 10, 17, 3, Field::prime(2147483647));
    auto b = explore_gap(2, 6, 10, 17, 3, Field::prime(2147483647));
    CHECK(a.to_json() == b.to_json());
    CHECK(a.relations == 2);
    CHECK(a.certified_commutative == 0);
    auto t = relation_threshold(2).to_json();
    CHECK(t["open_gap_status"].get<std::string>().rfind("closed", 0) == 0);
    CHECK(relation_threshold(3).to_json()["open_gap_status"] == "undecided");
}

}  // TEST_SUITE
