#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsalg/bitvec.hpp"
#include "gsalg/element.hpp"
#include "gsalg/row_space.hpp"

namespace gsalg {

/// Largest ladder level: V(2^4), U(2^4) live in A(16).
inline constexpr unsigned kMaxLadderLevel = 4;
/// Degree cap for decompositions, E and Q (A(16) has 65536 columns).
inline constexpr unsigned kLadderDegreeCap = 16;

/// Exponents e(n) for n in Y. Level n-e(n)-1+j gets dim V = 2^(2^j), 0 <= j <= e(n);
/// every other level gets dim V = 2.
struct ESchedule {
    std::map<unsigned, unsigned> e;

    /// Target dim V(2^level); 2 outside every interval {n-e(n)-1, ..., n-1}.
    std::optional<std::uint64_t> target(unsigned level) const;
    nlohmann::json to_json() const;
    static ESchedule from_json(const nlohmann::json& j);
};

/// One rung of the ladder: V(2^m) as a sorted monomial list and the projection
/// pi_m : A(2^m) -> V(2^m) along U(2^m). U(2^m) = ker pi_m, spanned by w - pi_m(w), w not in V.
struct LadderLevel {
    unsigned m = 0;
    std::vector<std::uint64_t> v_monomials;
    /// Position of each word in v_monomials, -1 for words outside V.
    std::vector<std::int32_t> v_position;
    /// pi_m(w) as sorted V positions, for every word w of length 2^m.
    std::vector<std::vector<std::uint32_t>> image;
    /// Optional F(2^m) and F'(2^m), GF(2) elements given as sorted word lists.
    std::vector<std::vector<std::uint64_t>> F;
    std::vector<std::vector<std::uint64_t>> F_prime;

    unsigned length() const { return 1u << m; }
    std::size_t dim_v() const { return v_monomials.size(); }
    std::uint64_t words() const { return std::uint64_t{1} << length(); }
    bool in_v(std::uint64_t w) const { return v_position[w] >= 0; }
};

enum class LadderStrategy { trivial, lex_greedy, random, user };

std::string to_string(LadderStrategy s);
LadderStrategy parse_strategy(const std::string& s);

struct LadderCheck {
    std::string key;
    bool ok = true;
    std::string detail;
};

/// Ladder of complementary pairs (V(2^m), U(2^m)), m = 0..L, over GF(2), two generators.
class Ladder {
public:
    Ladder() = default;

    unsigned top_level() const { return static_cast<unsigned>(levels_.size()) - 1; }
    const LadderLevel& level(unsigned m) const;
    const std::vector<std::uint32_t>& project(unsigned m, std::uint64_t w) const { return levels_[m].image[w]; }
    std::size_t dim_v(unsigned m) const { return level(m).dim_v(); }

    LadderStrategy strategy() const { return strategy_; }
    std::uint64_t seed() const { return seed_; }
    const std::optional<ESchedule>& schedule() const { return schedule_; }

    /// Structural checks: V monomial and nested in V V, pi a projection onto V,
    /// A U + U A inside the next U, schedule targets, F inside U, F' containment.
    std::vector<LadderCheck> check() const;
    /// Throws PropertyViolation naming the first failed check.
    void verify() const;

    /// Per level: V words, U rows "w+v1+v2" (omitted above `max_u_level`), F data.
    nlohmann::json to_json(unsigned max_u_level = 3) const;

    /// Corrupts pi at `level` (>= 1) on one word with both halves outside V,
    /// breaking A U + U A inside U. Regression fixture for absorption and verification.
    Ladder with_broken_level(unsigned level) const;

private:
    friend Ladder build_ladder(LadderStrategy, unsigned, std::uint64_t, const std::optional<ESchedule>&, std::uint64_t);
    friend Ladder ladder_from_json(const nlohmann::json&);

    std::vector<LadderLevel> levels_;
    LadderStrategy strategy_ = LadderStrategy::trivial;
    std::uint64_t seed_ = 0;
    std::optional<ESchedule> schedule_;
};

/// Builds and verifies a ladder with levels 0..L.
/// lex-greedy takes the lexicographically first monomials of V V (target from the
/// schedule, else `default_target`) with monomial completion; random draws dims in
/// [1, min(|V V|, 6)] and non-monomial complements from `seed`.
Ladder build_ladder(LadderStrategy strategy, unsigned L, std::uint64_t seed = 0,
                    const std::optional<ESchedule>& targets = std::nullopt, std::uint64_t default_target = 2);

/// User-supplied ladder: {"levels": [{"V": ["xx","xy"], "U": ["yx", "yy+xy"] | "complete",
/// "F": [...], "F_prime": [...]}, ...], "schedule": {"e": {"3": 1}}}. Level 0 must be {x, y}.
Ladder ladder_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------- binary decompositions

enum class BlockOrder { ascending, descending };

/// Exponents p of the binary expansion of k, left to right: ascending for the
/// "<" spaces, descending for ">".
std::vector<unsigned> binary_blocks(std::uint64_t k, BlockOrder order);

/// pi^<_k or pi^>_k = tensor product of the block projections; V^<(k) is indexed
/// by tuples of V positions (leftmost block most significant).
class BlockProjector {
public:
    BlockProjector(const Ladder& ladder, unsigned k, BlockOrder order);

    unsigned degree() const { return k_; }
    std::uint64_t dim_v() const { return dim_v_; }
    const std::vector<unsigned>& blocks() const { return blocks_; }

    /// XORs pi(w) into acc (acc.size() == dim_v()).
    void project_into(std::uint64_t w, BitVec& acc) const;
    BitVec project(std::uint64_t w) const;
    /// The V^< (or V^>) monomial for a tuple index.
    std::uint64_t monomial(std::uint64_t tuple) const;
    /// pi(w) as a list of monomials.
    std::vector<std::uint64_t> project_monomials(std::uint64_t w) const;

private:
    void project_rec(std::uint64_t w, std::size_t block, std::uint64_t base, BitVec& acc) const;

    const Ladder* ladder_;
    unsigned k_;
    std::vector<unsigned> blocks_;
    std::vector<unsigned> shifts_;
    std::vector<std::uint64_t> strides_;
    std::uint64_t dim_v_ = 1;
};

struct BinaryDecomposition {
    unsigned k = 0;
    std::vector<unsigned> blocks_lt, blocks_gt;
    std::uint64_t dim_v_lt = 0, dim_u_lt = 0, dim_v_gt = 0, dim_u_gt = 0;
    bool direct_sum_lt = false, direct_sum_gt = false;
    /// "explicit" (spans materialized) or "projection" (spanning products annihilated, pi = id on V).
    std::string method;
    std::vector<std::uint64_t> v_lt, v_gt;

    nlohmann::json to_json(bool with_bases = false) const;
};

/// A(k) = U^<(k) + V^<(k) = U^>(k) + V^>(k), both direct. Materialized for k <= 10.
BinaryDecomposition decompose_binary(const Ladder& ladder, unsigned k);

struct AbsorptionResult {
    bool left_ok = true;   ///< A(k) U^<(l) inside U^<(k+l)
    bool right_ok = true;  ///< U^>(k) A(l) inside U^>(k+l)
    bool ok() const { return left_ok && right_ok; }
};

AbsorptionResult absorption_check(const Ladder& ladder, unsigned k, unsigned l);

// ---------------------------------------------------------------- the ideal E

struct ESpace {
    unsigned k = 0;
    /// 2^(n-1) <= k < 2^n; constraints live in A(2^(n+1)).
    unsigned n = 0;
    RowSpace basis{Field::gf2(), 1};
    std::uint64_t constraints_used = 0;

    std::size_t dim() const { return basis.rank(); }
};

/// E(k) = { r in A(k) : u r v in U(2^n)A(2^n) + A(2^n)U(2^n) for all words u, v with |u r v| = 2^(n+1) }.
ESpace compute_E(const Ladder& ladder, unsigned k);

/// x E(k), E(k) x, y E(k), E(k) y all inside E(k+1).
bool ideal_step_check(const ESpace& lower, const ESpace& upper);

/// dim V^<(m) = dim V^>(m) = product of dim V(2^p) over the bits p of m; 1 for m = 0.
mpz_class dim_v_binary(const Ladder& ladder, std::uint64_t m);

struct QuotientBoundResult {
    unsigned k = 0;
    mpz_class lhs;  ///< dim A(k)/E(k)
    mpz_class rhs;  ///< sum_j dim V^<(k-j) dim V^>(j)
    bool ok = false;
};

QuotientBoundResult quotient_bound_check(const Ladder& ladder, unsigned k);
QuotientBoundResult quotient_bound_check(const Ladder& ladder, const ESpace& E);

struct QResult {
    unsigned n = 0;
    unsigned window_lo = 0, window_hi = 0;
    std::size_t relations_in_window = 0;
    std::size_t dim_q = 0;
    /// Bound (dim V(2^(n-1))^2 / 2 - 2) / 4, compared as 8 dim Q <= dim V^2 - 4.
    mpq_class bound;
    bool bound_ok = false;
    /// "holds", "fails" or "not evaluated": the count condition r_n <= 2^t_n.
    std::string hypothesis;
};

/// Q = sum over relations f with degree in [2^n + 2^(n-2), 2^n + 2^(n-1) + 2^(n-2)] of
/// V^>(i) f V^<(j), i + j = 2^(n+1) - deg f. Relations must be homogeneous over GF(2).
QResult compute_Q(const Ladder& ladder, const std::vector<Element>& relations, unsigned n,
                  std::optional<long> t_n = std::nullopt);

struct VBoundResult {
    std::uint64_t alpha = 0;
    std::optional<unsigned> m;  ///< largest m in Y with a bit of alpha in {m-e(m)-1, ..., m-1}
    mpz_class dim;
    mpz_class bound;  ///< 2 alpha prod_{i <= m, i in Y} 2^(2^(e(i)+1))
    /// dim < bound, evaluated even when no m exists.
    bool ok = false;
    /// The bound presupposes m; without it the comparison is only reported.
    bool applicable() const { return m.has_value(); }
};

VBoundResult v_bound_check(const Ladder& ladder, std::uint64_t alpha);

struct HalfMonomialWitness {
    unsigned l = 0;
    char letter = 'x';
    std::size_t p = 0;
    std::size_t dim_v = 0;
    bool at_least_half = false;
    bool independent = false;
};

/// Among V(2^(l-1)) monomials, those ending in the majority letter (x on ties), stripped
/// of it, are tested for independence modulo E(2^(l-1) - 1).
HalfMonomialWitness half_monomial_witness(const Ladder& ladder, unsigned l);

}  // namespace gsalg
