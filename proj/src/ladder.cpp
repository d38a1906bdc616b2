#include "gsalg/ladder.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "gsalg/error.hpp"
#include "gsalg/monomial.hpp"

namespace gsalg {

// ---------------------------------------------------------------- schedule targets

std::optional<std::uint64_t> ESchedule::target(unsigned level) const {
    for (const auto& [n, e] : this->e) {
        if (e + 1 > n) continue;
        unsigned first = n - e - 1;
        if (level >= first && level <= n - 1) {
            unsigned j = level - first;
            if (j >= 6) return ~std::uint64_t{0};
            return std::uint64_t{1} << (1u << j);
        }
    }
    return 2;
}

nlohmann::json ESchedule::to_json() const {
    nlohmann::json m = nlohmann::json::object();
    for (const auto& [n, v] : e) m[std::to_string(n)] = v;
    return {{"e", m}};
}

ESchedule ESchedule::from_json(const nlohmann::json& j) {
    ESchedule s;
    const auto& m = j.contains("e") ? j.at("e") : j;
    for (const auto& [key, val] : m.items()) {
        unsigned n = static_cast<unsigned>(std::stoul(key));
        unsigned e = val.get<unsigned>();
        if (e < 1 || e > n - 1 || n < 2) throw ParseError("schedule entry e(" + key + ") must satisfy 1 <= e <= n-1");
        s.e[n] = e;
    }
    return s;
}

std::string to_string(LadderStrategy s) {
    switch (s) {
    case LadderStrategy::trivial: return "trivial";
    case LadderStrategy::lex_greedy: return "lex-greedy";
    case LadderStrategy::random: return "random";
    case LadderStrategy::user: return "user";
    }
    return "?";
}

LadderStrategy parse_strategy(const std::string& s) {
    if (s == "trivial") return LadderStrategy::trivial;
    if (s == "lex-greedy" || s == "lex_greedy") return LadderStrategy::lex_greedy;
    if (s == "random") return LadderStrategy::random;
    if (s == "user") return LadderStrategy::user;
    throw InvalidArgument("unknown ladder strategy '" + s + "' (trivial, lex-greedy, random, user)");
}

// ---------------------------------------------------------------- level construction

namespace {

LadderLevel base_level() {
    LadderLevel l;
    l.m = 0;
    l.v_monomials = {0, 1};
    l.v_position = {0, 1};
    l.image = {{0}, {1}};
    return l;
}

/// Products V V of the previous level, in increasing word order.
std::vector<std::uint64_t> vv_products(const LadderLevel& prev) {
    std::vector<std::uint64_t> out;
    out.reserve(prev.dim_v() * prev.dim_v());
    for (auto a : prev.v_monomials)
        for (auto b : prev.v_monomials) out.push_back((a << prev.length()) | b);
    return out;
}

void index_v(LadderLevel& l) {
    l.v_position.assign(l.words(), -1);
    for (std::size_t i = 0; i < l.v_monomials.size(); ++i) l.v_position[l.v_monomials[i]] = static_cast<std::int32_t>(i);
}

std::vector<std::uint32_t> odd_positions(std::vector<std::uint8_t>& parity) {
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < parity.size(); ++i)
        if (parity[i]) {
            out.push_back(static_cast<std::uint32_t>(i));
            parity[i] = 0;
        }
    return out;
}

/// Positions occurring an odd number of times in `hits`, sorted.
std::vector<std::uint32_t> odd_positions(std::vector<std::uint32_t>& hits) {
    std::sort(hits.begin(), hits.end());
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < hits.size();) {
        std::size_t j = i;
        while (j < hits.size() && hits[j] == hits[i]) ++j;
        if ((j - i) % 2) out.push_back(hits[i]);
        i = j;
    }
    return out;
}

/// Level m from level m-1: pi_m = rho o (pi_{m-1} (x) pi_{m-1}), with rho(vv) given on V V
/// (V words map to themselves).
LadderLevel extend_level(const LadderLevel& prev, std::vector<std::uint64_t> v,
                         const std::map<std::uint64_t, std::vector<std::uint32_t>>& rho) {
    LadderLevel l;
    l.m = prev.m + 1;
    l.v_monomials = std::move(v);
    index_v(l);
    std::size_t dp = prev.dim_v();
    unsigned half = prev.length();
    std::vector<std::vector<std::uint32_t>> by_pair(dp * dp);
    for (std::size_t i = 0; i < dp; ++i)
        for (std::size_t j = 0; j < dp; ++j) {
            std::uint64_t vv = (prev.v_monomials[i] << half) | prev.v_monomials[j];
            if (l.in_v(vv))
                by_pair[i * dp + j] = {static_cast<std::uint32_t>(l.v_position[vv])};
            else if (auto it = rho.find(vv); it != rho.end())
                by_pair[i * dp + j] = it->second;
        }
    l.image.resize(l.words());
    std::uint64_t mask = (std::uint64_t{1} << half) - 1;
    std::vector<std::uint32_t> hits;
    for (std::uint64_t w = 0; w < l.words(); ++w) {
        hits.clear();
        for (auto i : prev.image[w >> half])
            for (auto j : prev.image[w & mask])
                for (auto t : by_pair[i * dp + j]) hits.push_back(t);
        l.image[w] = odd_positions(hits);
    }
    return l;
}

std::vector<std::uint64_t> parse_row(const std::string& text, unsigned length) {
    std::vector<std::uint64_t> words;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, '+')) {
        tok.erase(std::remove_if(tok.begin(), tok.end(), [](unsigned char c) { return std::isspace(c); }), tok.end());
        if (tok.empty()) throw ParseError("empty term in row '" + text + "'");
        if (tok.size() != length) throw ParseError("word '" + tok + "' should have length " + std::to_string(length));
        words.push_back(parse_word_text(tok));
    }
    std::sort(words.begin(), words.end());
    // GF(2): repeated words cancel in pairs.
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < words.size();) {
        std::size_t j = i;
        while (j < words.size() && words[j] == words[i]) ++j;
        if ((j - i) % 2) out.push_back(words[i]);
        i = j;
    }
    return out;
}

std::string row_text(const std::vector<std::uint64_t>& words, unsigned length) {
    if (words.empty()) return "0";
    std::string s;
    for (auto w : words) {
        if (!s.empty()) s += "+";
        s += word_text(w, length);
    }
    return s;
}

}  // namespace

const LadderLevel& Ladder::level(unsigned m) const {
    if (m >= levels_.size()) throw InvalidArgument("ladder level " + std::to_string(m) + " not built (top level " + std::to_string(top_level()) + ")");
    return levels_[m];
}

Ladder build_ladder(LadderStrategy strategy, unsigned L, std::uint64_t seed, const std::optional<ESchedule>& targets,
                    std::uint64_t default_target) {
    if (L < 1 || L > kMaxLadderLevel) throw InvalidArgument("ladder levels must be in [1, " + std::to_string(kMaxLadderLevel) + "]");
    if (strategy == LadderStrategy::user) throw InvalidArgument("user ladders are loaded with ladder_from_json");
    Ladder lad;
    lad.strategy_ = strategy;
    lad.seed_ = seed;
    lad.schedule_ = targets;
    lad.levels_.push_back(base_level());
    std::mt19937_64 rng(seed);
    for (unsigned m = 1; m <= L; ++m) {
        const LadderLevel& prev = lad.levels_.back();
        std::vector<std::uint64_t> vv = vv_products(prev);
        std::vector<std::uint64_t> v;
        std::map<std::uint64_t, std::vector<std::uint32_t>> rho;
        if (strategy == LadderStrategy::trivial) {
            if (prev.dim_v() != (std::uint64_t{1} << prev.length())) throw PropertyViolation("trivial ladder lost a monomial");
            v = vv;
        } else {
            std::uint64_t target = default_target;
            if (targets) target = *targets->target(m);
            if (strategy == LadderStrategy::random && !targets) {
                std::uint64_t hi = std::min<std::uint64_t>(vv.size(), 6);
                target = std::uniform_int_distribution<std::uint64_t>(1, hi)(rng);
            }
            if (target == 0 || target > vv.size())
                throw InvalidArgument("target dim V(2^" + std::to_string(m) + ") = " + std::to_string(target) + " is not achievable inside V V of dimension " +
                                      std::to_string(vv.size()));
            if (strategy == LadderStrategy::lex_greedy) {
                v.assign(vv.begin(), vv.begin() + static_cast<std::ptrdiff_t>(target));
            } else {
                std::vector<std::uint64_t> pool = vv;
                std::shuffle(pool.begin(), pool.end(), rng);
                v.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(target));
                std::sort(v.begin(), v.end());
                std::bernoulli_distribution coin(0.5);
                for (auto w : vv) {
                    if (std::binary_search(v.begin(), v.end(), w)) continue;
                    std::vector<std::uint32_t> img;
                    for (std::uint32_t t = 0; t < v.size(); ++t)
                        if (coin(rng)) img.push_back(t);
                    rho[w] = std::move(img);
                }
            }
        }
        lad.levels_.push_back(extend_level(prev, std::move(v), rho));
    }
    lad.verify();
    return lad;
}

Ladder ladder_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("levels") || !j.at("levels").is_array()) throw ParseError("ladder JSON needs a \"levels\" array");
    const auto& levels = j.at("levels");
    if (levels.size() < 2 || levels.size() > kMaxLadderLevel + 1) throw InvalidArgument("ladder must have between 2 and 5 levels");
    Ladder lad;
    lad.strategy_ = LadderStrategy::user;
    if (j.contains("schedule")) lad.schedule_ = ESchedule::from_json(j.at("schedule"));
    for (std::size_t m = 0; m < levels.size(); ++m) {
        const auto& lj = levels[m];
        unsigned len = 1u << m;
        std::vector<std::uint64_t> v;
        for (const auto& w : lj.at("V")) {
            auto words = parse_row(w.get<std::string>(), len);
            if (words.size() != 1) throw ParseError("V entries must be single words");
            v.push_back(words.front());
        }
        std::sort(v.begin(), v.end());
        if (std::adjacent_find(v.begin(), v.end()) != v.end()) throw PropertyViolation("level " + std::to_string(m) + ": repeated V monomial");
        LadderLevel l;
        if (m == 0) {
            if (v != std::vector<std::uint64_t>{0, 1}) throw PropertyViolation("level 0 must have V = {x, y}");
            l = base_level();
        } else {
            const LadderLevel& prev = lad.levels_.back();
            for (auto w : v) {
                std::uint64_t mask = (std::uint64_t{1} << prev.length()) - 1;
                if (!prev.in_v(w >> prev.length()) || !prev.in_v(w & mask))
                    throw PropertyViolation("level " + std::to_string(m) + ": V monomial " + word_text(w, len) + " is not in V V of the previous level");
            }
            const auto& uj = lj.contains("U") ? lj.at("U") : nlohmann::json("complete");
            if (uj.is_string() && uj.get<std::string>() == "complete") {
                l = extend_level(prev, v, {});
            } else {
                l.m = static_cast<unsigned>(m);
                l.v_monomials = v;
                index_v(l);
                // Column order: words outside V first, so echelon pivots land there.
                std::vector<std::uint64_t> col(l.words());
                std::vector<std::uint64_t> word_of_col(l.words());
                std::uint64_t outside = l.words() - v.size(), next_out = 0;
                for (std::uint64_t w = 0; w < l.words(); ++w) {
                    col[w] = l.in_v(w) ? outside + static_cast<std::uint64_t>(l.v_position[w]) : next_out++;
                    word_of_col[col[w]] = w;
                }
                RowSpace U(Field::gf2(), l.words());
                for (const auto& row : uj) {
                    BitVec b(l.words());
                    for (auto w : parse_row(row.get<std::string>(), len)) b.flip(col[w]);
                    U.insert(b);
                }
                auto piv = U.pivot_columns();
                if (U.rank() != outside || (!piv.empty() && piv.back() >= outside))
                    throw PropertyViolation("level " + std::to_string(m) + ": U is not a complement of V (dim U = " + std::to_string(U.rank()) +
                                            ", codim V = " + std::to_string(outside) + ")");
                l.image.resize(l.words());
                for (std::size_t i = 0; i < v.size(); ++i) l.image[v[i]] = {static_cast<std::uint32_t>(i)};
                for (const auto& row : U.basis_bits()) {
                    std::uint64_t lead = row.find_first();
                    std::vector<std::uint32_t> img;
                    row.for_each_set([&](std::uint64_t c) {
                        if (c >= outside) img.push_back(static_cast<std::uint32_t>(c - outside));
                    });
                    l.image[word_of_col[lead]] = std::move(img);
                }
            }
        }
        for (const char* key : {"F", "F_prime"}) {
            if (!lj.contains(key)) continue;
            auto& dst = std::string(key) == "F" ? l.F : l.F_prime;
            for (const auto& row : lj.at(key)) dst.push_back(parse_row(row.get<std::string>(), len));
        }
        lad.levels_.push_back(std::move(l));
    }
    lad.verify();
    return lad;
}

// ---------------------------------------------------------------- verification

std::vector<LadderCheck> Ladder::check() const {
    std::vector<LadderCheck> out;
    auto fail = [&](const std::string& key, const std::string& detail) { out.push_back({key, false, detail}); };
    std::vector<std::string> failed_keys;
    for (unsigned m = 0; m < levels_.size(); ++m) {
        const LadderLevel& l = levels_[m];
        std::string at = "level " + std::to_string(m);
        std::size_t before = out.size();
        if (m == 0 && l.v_monomials != std::vector<std::uint64_t>{0, 1}) fail("v_base_is_generators", at + ": V(1) must be {x, y}");
        if (!std::is_sorted(l.v_monomials.begin(), l.v_monomials.end()) || std::adjacent_find(l.v_monomials.begin(), l.v_monomials.end()) != l.v_monomials.end())
            fail("v_spanned_by_monomials", at + ": V words must be distinct and sorted");
        for (std::size_t i = 0; i < l.dim_v(); ++i)
            if (l.image[l.v_monomials[i]] != std::vector<std::uint32_t>{static_cast<std::uint32_t>(i)}) {
                fail("v_u_complementary", at + ": projection does not fix V word " + word_text(l.v_monomials[i], l.length()));
                break;
            }
        for (std::uint64_t w = 0; w < l.words(); ++w) {
            const auto& img = l.image[w];
            if (!std::is_sorted(img.begin(), img.end()) || (!img.empty() && img.back() >= l.dim_v())) {
                fail("v_u_complementary", at + ": malformed projection of " + word_text(w, l.length()));
                break;
            }
        }
        if (m >= 1) {
            const LadderLevel& p = levels_[m - 1];
            unsigned half = p.length();
            std::uint64_t mask = (std::uint64_t{1} << half) - 1;
            for (auto v : l.v_monomials)
                if (!p.in_v(v >> half) || !p.in_v(v & mask)) {
                    fail("v_nested_in_vv", at + ": " + word_text(v, l.length()) + " is not in V V");
                    break;
                }
            // A U + U A inside U: pi_m(a u) = pi_m(u a) = 0 for u = w + pi(w), w outside V.
            std::vector<std::uint8_t> parity(l.dim_v(), 0);
            bool ok = true;
            for (std::uint64_t w = 0; w < p.words() && ok; ++w) {
                if (p.in_v(w)) continue;
                for (std::uint64_t a = 0; a < p.words() && ok; ++a) {
                    for (int side = 0; side < 2 && ok; ++side) {
                        auto join = [&](std::uint64_t x) { return side == 0 ? (a << half) | x : (x << half) | a; };
                        for (auto t : l.image[join(w)]) parity[t] ^= 1;
                        for (auto s : p.image[w])
                            for (auto t : l.image[join(p.v_monomials[s])]) parity[t] ^= 1;
                        if (!odd_positions(parity).empty()) {
                            ok = false;
                            fail("u_absorbs_products", at + ": " + std::string(side == 0 ? "A U" : "U A") + " not inside U at word " +
                                                           word_text(w, half) + ", factor " + word_text(a, half));
                        }
                    }
                }
            }
        }
        if (schedule_) {
            auto t = schedule_->target(m);
            if (m >= 1 && t && *t != l.dim_v())
                fail("schedule_dimension_targets", at + ": dim V = " + std::to_string(l.dim_v()) + ", schedule wants " + std::to_string(*t));
        }
        std::vector<std::uint8_t> parity(l.dim_v(), 0);
        for (const auto& f : l.F) {
            for (auto w : f)
                for (auto t : l.image[w]) parity[t] ^= 1;
            if (!odd_positions(parity).empty()) {
                fail("f_inside_u", at + ": F element " + row_text(f, l.length()) + " is not in U");
                break;
            }
        }
        if (!l.F_prime.empty()) {
            if (m == 0) {
                fail("f_prime_containment", "level 0 cannot carry F'");
            } else {
                const LadderLevel& p = levels_[m - 1];
                unsigned half = p.length();
                std::uint64_t mask = (std::uint64_t{1} << half) - 1;
                std::size_t dp = p.dim_v();
                auto phi = [&](const std::vector<std::uint64_t>& g) {
                    BitVec b(dp * dp);
                    for (auto w : g)
                        for (auto i : p.image[w >> half])
                            for (auto j : p.image[w & mask]) b.flip(i * dp + j);
                    return b;
                };
                RowSpace span(Field::gf2(), dp * dp);
                for (const auto& f : l.F) span.insert(phi(f));
                for (const auto& g : l.F_prime)
                    if (!span.contains(phi(g))) {
                        fail("f_prime_containment", at + ": F' element " + row_text(g, l.length()) + " is outside F + U A + A U");
                        break;
                    }
            }
        }
        if (out.size() == before) out.push_back({at, true, ""});
    }
    return out;
}

void Ladder::verify() const {
    for (const auto& c : check())
        if (!c.ok) throw PropertyViolation(c.key + ": " + c.detail);
}

nlohmann::json Ladder::to_json(unsigned max_u_level) const {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& l : levels_) {
        nlohmann::json lj;
        lj["level"] = l.m;
        lj["degree"] = l.length();
        nlohmann::json v = nlohmann::json::array();
        for (auto w : l.v_monomials) v.push_back(word_text(w, l.length()));
        lj["V"] = v;
        lj["dim_V"] = l.dim_v();
        lj["dim_U"] = l.words() - l.dim_v();
        if (l.m >= 1 && l.m <= max_u_level) {
            nlohmann::json u = nlohmann::json::array();
            for (std::uint64_t w = 0; w < l.words(); ++w) {
                if (l.in_v(w)) continue;
                std::vector<std::uint64_t> row{w};
                for (auto t : l.image[w]) row.push_back(l.v_monomials[t]);
                std::sort(row.begin(), row.end());
                u.push_back(row_text(row, l.length()));
            }
            lj["U"] = u;
        }
        for (const char* key : {"F", "F_prime"}) {
            const auto& src = std::string(key) == "F" ? l.F : l.F_prime;
            if (src.empty()) continue;
            nlohmann::json a = nlohmann::json::array();
            for (const auto& f : src) a.push_back(row_text(f, l.length()));
            lj[key] = a;
        }
        levels.push_back(lj);
    }
    nlohmann::json j{{"strategy", to_string(strategy_)}, {"seed", seed_}, {"levels", levels}};
    if (schedule_) j["schedule"] = schedule_->to_json();
    return j;
}

Ladder Ladder::with_broken_level(unsigned level) const {
    if (level == 0 || level > top_level()) throw InvalidArgument("can only break levels 1..top");
    Ladder out = *this;
    LadderLevel& l = out.levels_[level];
    const LadderLevel& p = levels_[level - 1];
    unsigned half = p.length();
    std::uint64_t mask = (std::uint64_t{1} << half) - 1;
    for (std::uint64_t w = 0; w < l.words(); ++w) {
        if (p.in_v(w >> half) || p.in_v(w & mask)) continue;
        auto& img = l.image[w];
        if (!img.empty() && img.front() == 0)
            img.erase(img.begin());
        else
            img.insert(img.begin(), 0);
        return out;
    }
    throw InvalidArgument("level " + std::to_string(level) + " has no word with both halves outside V");
}

// ---------------------------------------------------------------- binary decompositions

std::vector<unsigned> binary_blocks(std::uint64_t k, BlockOrder order) {
    std::vector<unsigned> out;
    for (unsigned p = 0; p < 64; ++p)
        if ((k >> p) & 1u) out.push_back(p);
    if (order == BlockOrder::descending) std::reverse(out.begin(), out.end());
    return out;
}

BlockProjector::BlockProjector(const Ladder& ladder, unsigned k, BlockOrder order) : ladder_(&ladder), k_(k), blocks_(binary_blocks(k, order)) {
    if (k > kLadderDegreeCap) throw CapExceeded("degree " + std::to_string(k) + " exceeds the ladder cap " + std::to_string(kLadderDegreeCap));
    for (auto p : blocks_)
        if (p > ladder.top_level()) throw CapExceeded("degree " + std::to_string(k) + " needs ladder level " + std::to_string(p));
    shifts_.resize(blocks_.size());
    strides_.resize(blocks_.size());
    unsigned shift = 0;
    for (std::size_t b = blocks_.size(); b-- > 0;) {
        shifts_[b] = shift;
        shift += 1u << blocks_[b];
        strides_[b] = dim_v_;
        dim_v_ *= ladder.dim_v(blocks_[b]);
    }
}

void BlockProjector::project_into(std::uint64_t w, BitVec& acc) const { project_rec(w, 0, 0, acc); }

void BlockProjector::project_rec(std::uint64_t w, std::size_t block, std::uint64_t base, BitVec& acc) const {
    if (block == blocks_.size()) {
        acc.flip(base);
        return;
    }
    unsigned p = blocks_[block];
    std::uint64_t mask = (std::uint64_t{1} << (1u << p)) - 1;
    for (auto pos : ladder_->project(p, (w >> shifts_[block]) & mask)) project_rec(w, block + 1, base + pos * strides_[block], acc);
}

BitVec BlockProjector::project(std::uint64_t w) const {
    BitVec acc(dim_v_);
    project_into(w, acc);
    return acc;
}

std::uint64_t BlockProjector::monomial(std::uint64_t tuple) const {
    std::uint64_t w = 0;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const LadderLevel& l = ladder_->level(blocks_[b]);
        std::uint64_t pos = (tuple / strides_[b]) % l.dim_v();
        w = (w << l.length()) | l.v_monomials[pos];
    }
    return w;
}

std::vector<std::uint64_t> BlockProjector::project_monomials(std::uint64_t w) const {
    std::vector<std::uint64_t> out;
    project(w).for_each_set([&](std::uint64_t t) { out.push_back(monomial(t)); });
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

void clear_bits(BitVec& b) { std::fill(b.words().begin(), b.words().end(), 0); }

/// Adds the spanning products A(left) (w + pi(w)) A(right) of one block to `rows`, or,
/// with `projector`, checks that the projector annihilates each of them.
struct BlockSpan {
    const Ladder& ladder;
    unsigned k;
    const std::vector<unsigned>& blocks;

    template <class F>
    void for_each_row(F&& f) const {
        unsigned left = 0;
        std::vector<std::uint64_t> row;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const LadderLevel& l = ladder.level(blocks[b]);
            unsigned len = l.length();
            unsigned right = k - left - len;
            for (std::uint64_t w = 0; w < l.words(); ++w) {
                if (l.in_v(w)) continue;
                for (std::uint64_t a = 0; a < (std::uint64_t{1} << left); ++a)
                    for (std::uint64_t c = 0; c < (std::uint64_t{1} << right); ++c) {
                        row.clear();
                        std::uint64_t prefix = a << (len + right);
                        row.push_back(prefix | (w << right) | c);
                        for (auto t : l.image[w]) row.push_back(prefix | (l.v_monomials[t] << right) | c);
                        if (!f(row)) return;
                    }
            }
            left += len;
        }
    }
};

struct SideResult {
    std::uint64_t dim_v = 0, dim_u = 0;
    bool direct = false;
    std::vector<std::uint64_t> v_basis;
};

SideResult decompose_side(const Ladder& ladder, unsigned k, BlockOrder order, bool materialize) {
    BlockProjector proj(ladder, k, order);
    SideResult r;
    r.dim_v = proj.dim_v();
    for (std::uint64_t t = 0; t < proj.dim_v(); ++t) r.v_basis.push_back(proj.monomial(t));
    std::uint64_t total = std::uint64_t{1} << k;
    BlockSpan span{ladder, k, proj.blocks()};
    if (materialize) {
        RowSpace rows(Field::gf2(), total);
        span.for_each_row([&](const std::vector<std::uint64_t>& row) {
            BitVec b(total);
            for (auto w : row) b.flip(w);
            rows.insert(b);
            return true;
        });
        r.dim_u = rows.rank();
        for (auto v : r.v_basis) {
            BitVec b(total);
            b.set(v);
            rows.insert(b);
        }
        r.direct = rows.rank() == r.dim_u + r.dim_v && rows.rank() == total;
        return r;
    }
    // ker pi = U: each w - pi(w) telescopes into the spanning products, and those are annihilated.
    bool ok = true;
    BitVec acc(proj.dim_v());
    span.for_each_row([&](const std::vector<std::uint64_t>& row) {
        for (auto w : row) proj.project_into(w, acc);
        if (acc.any()) ok = false;
        return ok;
    });
    for (std::uint64_t t = 0; t < proj.dim_v() && ok; ++t) {
        clear_bits(acc);
        proj.project_into(r.v_basis[t], acc);
        if (acc.popcount() != 1 || !acc.test(t)) ok = false;
    }
    r.direct = ok;
    r.dim_u = total - r.dim_v;
    return r;
}

}  // namespace

BinaryDecomposition decompose_binary(const Ladder& ladder, unsigned k) {
    if (k > kLadderDegreeCap) throw CapExceeded("degree " + std::to_string(k) + " exceeds the ladder cap " + std::to_string(kLadderDegreeCap));
    constexpr unsigned kExplicitLimit = 10;
    bool materialize = k <= kExplicitLimit;
    BinaryDecomposition d;
    d.k = k;
    d.blocks_lt = binary_blocks(k, BlockOrder::ascending);
    d.blocks_gt = binary_blocks(k, BlockOrder::descending);
    d.method = materialize ? "explicit" : "projection";
    SideResult lt = decompose_side(ladder, k, BlockOrder::ascending, materialize);
    SideResult gt = decompose_side(ladder, k, BlockOrder::descending, materialize);
    d.dim_v_lt = lt.dim_v;
    d.dim_u_lt = lt.dim_u;
    d.direct_sum_lt = lt.direct;
    d.v_lt = std::move(lt.v_basis);
    d.dim_v_gt = gt.dim_v;
    d.dim_u_gt = gt.dim_u;
    d.direct_sum_gt = gt.direct;
    d.v_gt = std::move(gt.v_basis);
    return d;
}

nlohmann::json BinaryDecomposition::to_json(bool with_bases) const {
    nlohmann::json j{{"k", k},
                     {"blocks_ascending", blocks_lt},
                     {"blocks_descending", blocks_gt},
                     {"method", method},
                     {"dim_V_lt", dim_v_lt},
                     {"dim_U_lt", dim_u_lt},
                     {"dim_V_gt", dim_v_gt},
                     {"dim_U_gt", dim_u_gt},
                     {"direct_sum_lt", direct_sum_lt},
                     {"direct_sum_gt", direct_sum_gt}};
    if (with_bases) {
        nlohmann::json a = nlohmann::json::array(), b = nlohmann::json::array();
        for (auto w : v_lt) a.push_back(word_text(w, k));
        for (auto w : v_gt) b.push_back(word_text(w, k));
        j["V_lt"] = a;
        j["V_gt"] = b;
    }
    return j;
}

AbsorptionResult absorption_check(const Ladder& ladder, unsigned k, unsigned l) {
    if (k + l > kLadderDegreeCap) throw CapExceeded("k + l = " + std::to_string(k + l) + " exceeds the ladder cap " + std::to_string(kLadderDegreeCap));
    AbsorptionResult r;
    // A(k) U^<(l) inside U^<(k+l)  <=>  pi^<(a w) = pi^<(a pi^<(w)) for words a, w.
    {
        BlockProjector inner(ladder, l, BlockOrder::ascending), outer(ladder, k + l, BlockOrder::ascending);
        BitVec acc(outer.dim_v());
        for (std::uint64_t w = 0; w < (std::uint64_t{1} << l) && r.left_ok; ++w) {
            auto img = inner.project_monomials(w);
            if (img.size() == 1 && img.front() == w) continue;
            for (std::uint64_t a = 0; a < (std::uint64_t{1} << k); ++a) {
                std::uint64_t pre = a << l;
                outer.project_into(pre | w, acc);
                for (auto v : img) outer.project_into(pre | v, acc);
                if (acc.any()) {
                    r.left_ok = false;
                    break;
                }
            }
        }
    }
    // U^>(k) A(l) inside U^>(k+l)  <=>  pi^>(w a) = pi^>(pi^>(w) a).
    {
        BlockProjector inner(ladder, k, BlockOrder::descending), outer(ladder, k + l, BlockOrder::descending);
        BitVec acc(outer.dim_v());
        for (std::uint64_t w = 0; w < (std::uint64_t{1} << k) && r.right_ok; ++w) {
            auto img = inner.project_monomials(w);
            if (img.size() == 1 && img.front() == w) continue;
            for (std::uint64_t a = 0; a < (std::uint64_t{1} << l); ++a) {
                outer.project_into((w << l) | a, acc);
                for (auto v : img) outer.project_into((v << l) | a, acc);
                if (acc.any()) {
                    r.right_ok = false;
                    break;
                }
            }
        }
    }
    return r;
}

// ---------------------------------------------------------------- E

ESpace compute_E(const Ladder& ladder, unsigned k) {
    if (k == 0) throw InvalidArgument("E(k) needs k >= 1");
    unsigned n = 0;
    while ((1u << n) <= k) ++n;
    unsigned big = 1u << (n + 1);
    if (big > kLadderDegreeCap) throw CapExceeded("E(" + std::to_string(k) + ") lives in A(" + std::to_string(big) + "), above the cap " + std::to_string(kLadderDegreeCap));
    if (n > ladder.top_level()) throw InvalidArgument("E(" + std::to_string(k) + ") needs ladder level " + std::to_string(n));
    const LadderLevel& lv = ladder.level(n);
    unsigned half = lv.length();
    std::uint64_t mask = (std::uint64_t{1} << half) - 1;
    std::size_t dv = lv.dim_v();
    std::uint64_t D = dv * dv;
    std::uint64_t width = std::uint64_t{1} << k;

    // Phi(ab) = pi_n(a) (x) pi_n(b); its kernel is U(2^n)A(2^n) + A(2^n)U(2^n).
    auto phi_into = [&](std::uint64_t word, BitVec& acc) {
        for (auto i : lv.image[word >> half])
            for (auto j : lv.image[word & mask]) acc.flip(i * dv + j);
    };

    std::vector<BitVec> K;
    for (std::uint64_t m = 0; m < width; ++m) {
        BitVec e(width);
        e.set(m);
        K.push_back(std::move(e));
    }
    ESpace out;
    out.k = k;
    out.n = n;
    std::vector<BitVec> images(width, BitVec(D));
    std::vector<std::int64_t> pivot(D, -1);
    for (unsigned j = 0; j + k <= big && !K.empty(); ++j) {
        unsigned rest = big - j - k;
        for (std::uint64_t u = 0; u < (std::uint64_t{1} << j) && !K.empty(); ++u)
            for (std::uint64_t v = 0; v < (std::uint64_t{1} << rest) && !K.empty(); ++v) {
                ++out.constraints_used;
                for (std::uint64_t m = 0; m < width; ++m) {
                    clear_bits(images[m]);
                    phi_into((u << (k + rest)) | (m << rest) | v, images[m]);
                }
                // Kernel of r -> Phi(u r v) restricted to span K, tracking combinations.
                std::vector<std::pair<BitVec, BitVec>> piv_rows;
                std::vector<BitVec> next;
                for (auto& comb : K) {
                    BitVec img(D);
                    comb.for_each_set([&](std::uint64_t m) { img ^= images[m]; });
                    for (std::uint64_t c = img.find_first(); c != BitVec::npos; c = img.find_next(c + 1)) {
                        auto r = pivot[c];
                        if (r < 0) continue;
                        img ^= piv_rows[static_cast<std::size_t>(r)].first;
                        comb ^= piv_rows[static_cast<std::size_t>(r)].second;
                    }
                    std::uint64_t lead = img.find_first();
                    if (lead == BitVec::npos) {
                        next.push_back(std::move(comb));
                    } else {
                        pivot[lead] = static_cast<std::int64_t>(piv_rows.size());
                        piv_rows.emplace_back(std::move(img), std::move(comb));
                    }
                }
                for (const auto& pr : piv_rows) pivot[pr.first.find_first()] = -1;
                K = std::move(next);
            }
    }
    out.basis = RowSpace(Field::gf2(), width);
    for (const auto& b : K) out.basis.insert(b);
    return out;
}

bool ideal_step_check(const ESpace& lower, const ESpace& upper) {
    if (upper.k != lower.k + 1) throw InvalidArgument("ideal step needs consecutive degrees");
    std::uint64_t width = std::uint64_t{1} << upper.k;
    std::uint64_t shift = std::uint64_t{1} << lower.k;
    for (const auto& e : lower.basis.basis_bits()) {
        for (std::uint64_t a = 0; a < 2; ++a) {
            BitVec left(width), right(width);
            e.for_each_set([&](std::uint64_t w) {
                left.set(a * shift + w);
                right.set(w * 2 + a);
            });
            if (!upper.basis.contains(left) || !upper.basis.contains(right)) return false;
        }
    }
    return true;
}

mpz_class dim_v_binary(const Ladder& ladder, std::uint64_t m) {
    mpz_class d = 1;
    for (auto p : binary_blocks(m, BlockOrder::ascending)) {
        if (p > ladder.top_level()) throw CapExceeded("dim V^<(" + std::to_string(m) + ") needs ladder level " + std::to_string(p));
        d *= static_cast<unsigned long>(ladder.dim_v(p));
    }
    return d;
}

QuotientBoundResult quotient_bound_check(const Ladder& ladder, const ESpace& E) {
    QuotientBoundResult r;
    r.k = E.k;
    r.lhs = (mpz_class(1) << E.k) - static_cast<unsigned long>(E.dim());
    r.rhs = 0;
    for (unsigned j = 0; j <= E.k; ++j) r.rhs += dim_v_binary(ladder, E.k - j) * dim_v_binary(ladder, j);
    r.ok = r.lhs <= r.rhs;
    return r;
}

QuotientBoundResult quotient_bound_check(const Ladder& ladder, unsigned k) { return quotient_bound_check(ladder, compute_E(ladder, k)); }

// ---------------------------------------------------------------- Q

QResult compute_Q(const Ladder& ladder, const std::vector<Element>& relations, unsigned n, std::optional<long> t_n) {
    if (n < 2) throw InvalidArgument("Q needs n >= 2");
    unsigned big = 1u << (n + 1);
    if (big > kLadderDegreeCap) throw CapExceeded("Q lives in A(" + std::to_string(big) + "), above the cap " + std::to_string(kLadderDegreeCap));
    QResult q;
    q.n = n;
    q.window_lo = (1u << n) + (1u << (n - 2));
    q.window_hi = (1u << n) + (1u << (n - 1)) + (1u << (n - 2));
    std::size_t r_n = 0;
    RowSpace rows(Field::gf2(), std::uint64_t{1} << big);
    for (const auto& f : relations) {
        if (f.is_zero()) continue;
        if (!(f.field() == Field::gf2()) || f.gens() != 2) throw DegreeMismatch("Q needs relations over GF(2) in two generators");
        if (!f.is_homogeneous()) throw InvalidArgument("Q needs homogeneous relations");
        unsigned deg = *f.order();
        if (deg > (1u << n) && deg <= big) ++r_n;
        if (deg < q.window_lo || deg > q.window_hi) continue;
        ++q.relations_in_window;
        std::vector<std::uint64_t> fw;
        HomogeneousElement top = f.component(deg);
        for (const auto& [idx, c] : top.terms()) fw.push_back(idx);
        unsigned s = big - deg;
        for (unsigned i = 0; i <= s; ++i) {
            unsigned j = s - i;
            BlockProjector left(ladder, i, BlockOrder::descending), right(ladder, j, BlockOrder::ascending);
            for (std::uint64_t a = 0; a < left.dim_v(); ++a)
                for (std::uint64_t b = 0; b < right.dim_v(); ++b) {
                    std::uint64_t pre = left.monomial(a) << (deg + j), post = right.monomial(b);
                    BitVec row(std::uint64_t{1} << big);
                    for (auto w : fw) row.flip(pre | (w << j) | post);
                    rows.insert(row);
                }
        }
    }
    q.dim_q = rows.rank();
    mpz_class dv = static_cast<unsigned long>(ladder.dim_v(n - 1));
    q.bound = (mpq_class(dv * dv) / 2 - 2) / 4;
    q.bound_ok = 8 * mpz_class(static_cast<unsigned long>(q.dim_q)) <= dv * dv - 4;
    if (!t_n)
        q.hypothesis = "not evaluated";
    else if (*t_n < 0)
        q.hypothesis = r_n == 0 ? "holds" : "fails";
    else
        q.hypothesis = (*t_n >= 63 || r_n <= (std::uint64_t{1} << *t_n)) ? "holds" : "fails";
    return q;
}

// ---------------------------------------------------------------- V^> bound

VBoundResult v_bound_check(const Ladder& ladder, std::uint64_t alpha) {
    if (!ladder.schedule()) throw InvalidArgument("v_bound_check needs a ladder built from an e-schedule");
    const auto& e = ladder.schedule()->e;
    VBoundResult r;
    r.alpha = alpha;
    for (const auto& [m, em] : e) {
        for (unsigned p = m - em - 1; p <= m - 1; ++p)
            if (p < 64 && ((alpha >> p) & 1u)) r.m = m;
    }
    r.dim = dim_v_binary(ladder, alpha);
    r.bound = 2 * mpz_class(static_cast<unsigned long>(alpha));
    if (r.m)
        for (const auto& [i, ei] : e)
            if (i <= *r.m) r.bound <<= (1ul << (ei + 1));
    r.ok = r.dim < r.bound;
    return r;
}

// ---------------------------------------------------------------- independence witness

HalfMonomialWitness half_monomial_witness(const Ladder& ladder, unsigned l) {
    if (l < 2) throw InvalidArgument("the witness needs l >= 2");
    const LadderLevel& lv = ladder.level(l - 1);
    HalfMonomialWitness r;
    r.l = l;
    r.dim_v = lv.dim_v();
    std::size_t ends_x = 0;
    for (auto v : lv.v_monomials)
        if ((v & 1u) == 0) ++ends_x;
    bool use_x = 2 * ends_x >= lv.dim_v();
    r.letter = use_x ? 'x' : 'y';
    unsigned k = lv.length() - 1;
    ESpace E = compute_E(ladder, k);
    RowSpace span = E.basis;
    std::size_t before = span.rank();
    for (auto v : lv.v_monomials) {
        if ((v & 1u) != (use_x ? 0u : 1u)) continue;
        ++r.p;
        BitVec b(std::uint64_t{1} << k);
        b.set(v >> 1);
        span.insert(b);
    }
    r.independent = span.rank() == before + r.p;
    r.at_least_half = 2 * r.p >= r.dim_v;
    return r;
}

}  // namespace gsalg
