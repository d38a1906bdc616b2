#include "gsalg/row_space.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <variant>

#include "gsalg/error.hpp"

namespace gsalg {

namespace {

/// Leading-column lookup: a flat table for moderate widths, a hash map beyond.
class PivotIndex {
public:
    explicit PivotIndex(std::uint64_t ncols) : dense_(ncols <= (std::uint64_t{1} << 24)) {
        if (dense_) table_.assign(ncols, -1);
    }
    std::int64_t find(std::uint64_t col) const {
        if (dense_) return table_[col];
        auto it = map_.find(col);
        return it == map_.end() ? -1 : it->second;
    }
    void set(std::uint64_t col, std::int64_t row) {
        if (dense_)
            table_[col] = row;
        else
            map_[col] = row;
    }

private:
    bool dense_;
    std::vector<std::int64_t> table_;
    std::unordered_map<std::uint64_t, std::int64_t> map_;
};

class Gf2Engine {
public:
    explicit Gf2Engine(std::uint64_t ncols) : ncols_(ncols), pivot_(ncols) {}

    std::size_t rank() const { return rows_.size(); }

    void reduce(BitVec& v) const {
        for (std::uint64_t c = v.find_first(); c != BitVec::npos; c = v.find_next(c + 1)) {
            auto r = pivot_.find(c);
            if (r >= 0) v.xor_from(rows_[static_cast<std::size_t>(r)], c >> 6);
        }
    }

    bool insert(BitVec v) {
        reduce(v);
        std::uint64_t lead = v.find_first();
        if (lead == BitVec::npos) return false;
        pivot_.set(lead, static_cast<std::int64_t>(rows_.size()));
        leads_.push_back(lead);
        rows_.push_back(std::move(v));
        return true;
    }

    std::vector<BitVec> rref() const {
        std::vector<std::size_t> order(rows_.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return leads_[a] > leads_[b]; });
        std::vector<BitVec> rows = rows_;
        for (auto i : order) {
            BitVec& row = rows[i];
            for (std::uint64_t c = row.find_next(leads_[i] + 1); c != BitVec::npos; c = row.find_next(c + 1)) {
                auto r = pivot_.find(c);
                if (r >= 0) row.xor_from(rows[static_cast<std::size_t>(r)], c >> 6);
            }
        }
        std::reverse(order.begin(), order.end());
        std::vector<BitVec> out;
        out.reserve(rows.size());
        for (auto i : order) out.push_back(std::move(rows[i]));
        return out;
    }

    std::vector<std::uint64_t> leads() const {
        auto l = leads_;
        std::sort(l.begin(), l.end());
        return l;
    }

    std::uint64_t ncols_;

private:
    PivotIndex pivot_;
    std::vector<BitVec> rows_;
    std::vector<std::uint64_t> leads_;
};

struct FpOps {
    using Value = std::uint32_t;
    std::uint32_t p;
    bool is_zero(Value v) const { return v == 0; }
    Value mul(Value a, Value b) const { return static_cast<Value>(std::uint64_t{a} * b % p); }
    /// a - f*b
    Value axpy(Value a, Value f, Value b) const {
        std::uint64_t t = std::uint64_t{f} * b % p;
        return static_cast<Value>((a + p - t) % p);
    }
    Value neg(Value a) const { return a == 0 ? 0 : p - a; }
    Value inv(Value a) const {
        std::uint64_t r = 1, b = a, e = p - 2;
        while (e) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return static_cast<Value>(r);
    }
    Value from(const Scalar& s) const { return s.residue(); }
    Scalar to(Value v, const Field& f) const { return Scalar(f, static_cast<long>(v)); }
};

struct QOps {
    using Value = mpq_class;
    bool is_zero(const Value& v) const { return v == 0; }
    Value mul(const Value& a, const Value& b) const { return a * b; }
    Value axpy(const Value& a, const Value& f, const Value& b) const { return a - f * b; }
    Value neg(const Value& a) const { return -a; }
    Value inv(const Value& a) const { return 1 / a; }
    Value from(const Scalar& s) const { return s.rational(); }
    Scalar to(const Value& v, const Field& f) const { return Scalar(f, v); }
};

template <class Ops>
class SparseEngine {
public:
    using Value = typename Ops::Value;
    using Row = std::vector<std::pair<std::uint64_t, Value>>;

    SparseEngine(std::uint64_t ncols, Ops ops) : ncols_(ncols), ops_(ops), pivot_(ncols) {}

    std::size_t rank() const { return rows_.size(); }

    /// Full reduction against `rows` (indexed through pivot_).
    Row reduce(Row v, const std::vector<Row>& rows) const {
        Row out;
        std::size_t start = 0;
        Row scratch;
        while (start < v.size()) {
            auto [col, val] = v[start];
            auto r = pivot_.find(col);
            if (r < 0) {
                out.emplace_back(col, std::move(val));
                ++start;
                continue;
            }
            const Row& piv = rows[static_cast<std::size_t>(r)];
            Value f = val;
            // v[start..] - f * piv, both sorted; the leading entries cancel.
            scratch.clear();
            std::size_t i = start + 1, j = 1;
            while (i < v.size() || j < piv.size()) {
                if (j == piv.size() || (i < v.size() && v[i].first < piv[j].first)) {
                    scratch.push_back(std::move(v[i++]));
                } else if (i == v.size() || piv[j].first < v[i].first) {
                    scratch.emplace_back(piv[j].first, ops_.axpy(Value(0), f, piv[j].second));
                    ++j;
                } else {
                    Value nv = ops_.axpy(v[i].second, f, piv[j].second);
                    if (!ops_.is_zero(nv)) scratch.emplace_back(v[i].first, std::move(nv));
                    ++i;
                    ++j;
                }
            }
            std::swap(v, scratch);
            start = 0;
        }
        return out;
    }

    bool insert(Row v) {
        Row red = reduce(std::move(v), rows_);
        if (red.empty()) return false;
        Value inv = ops_.inv(red.front().second);
        for (auto& e : red) e.second = ops_.mul(e.second, inv);
        pivot_.set(red.front().first, static_cast<std::int64_t>(rows_.size()));
        leads_.push_back(red.front().first);
        rows_.push_back(std::move(red));
        return true;
    }

    Row reduce(Row v) const { return reduce(std::move(v), rows_); }

    std::vector<Row> rref() const {
        std::vector<std::size_t> order(rows_.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return leads_[a] > leads_[b]; });
        std::vector<Row> rows = rows_;
        for (auto i : order) {
            Row tail(std::make_move_iterator(rows[i].begin() + 1), std::make_move_iterator(rows[i].end()));
            Row red = reduce(std::move(tail), rows);
            Row full;
            full.reserve(red.size() + 1);
            full.emplace_back(leads_[i], Value(1));
            for (auto& e : red) full.push_back(std::move(e));
            rows[i] = std::move(full);
        }
        std::reverse(order.begin(), order.end());
        std::vector<Row> out;
        out.reserve(rows.size());
        for (auto i : order) out.push_back(std::move(rows[i]));
        return out;
    }

    std::vector<std::uint64_t> leads() const {
        auto l = leads_;
        std::sort(l.begin(), l.end());
        return l;
    }

    std::uint64_t ncols_;
    Ops ops_;

private:
    PivotIndex pivot_;
    std::vector<Row> rows_;
    std::vector<std::uint64_t> leads_;
};

}  // namespace

struct RowSpace::Impl {
    Field field;
    std::variant<Gf2Engine, SparseEngine<FpOps>, SparseEngine<QOps>> engine;

    static decltype(engine) make(const Field& f, std::uint64_t ncols) {
        switch (f.kind()) {
        case Field::Kind::gf2: return Gf2Engine(ncols);
        case Field::Kind::prime: return SparseEngine<FpOps>(ncols, FpOps{f.characteristic()});
        case Field::Kind::rational: break;
        }
        return SparseEngine<QOps>(ncols, QOps{});
    }

    Impl(const Field& f, std::uint64_t ncols) : field(f), engine(make(f, ncols)) {}

    std::uint64_t ncols() const {
        return std::visit([](const auto& e) { return e.ncols_; }, engine);
    }

    void check(const SparseVec& v) const {
        std::uint64_t prev = 0;
        bool first = true;
        for (const auto& [c, s] : v) {
            if (c >= ncols()) throw DegreeMismatch("column " + std::to_string(c) + " outside a space of width " + std::to_string(ncols()));
            if (!first && c <= prev) throw InvalidArgument("sparse vector columns must increase strictly");
            if (!(s.field() == field)) throw DegreeMismatch("vector over " + s.field().to_string() + " inserted into a space over " + field.to_string());
            prev = c;
            first = false;
        }
    }

    BitVec to_bits(const SparseVec& v) const {
        BitVec b(ncols());
        for (const auto& [c, s] : v)
            if (!s.is_zero()) b.set(c);
        return b;
    }

    SparseVec from_bits(const BitVec& b) const {
        SparseVec out;
        b.for_each_set([&](std::uint64_t c) { out.emplace_back(c, Scalar::one(field)); });
        return out;
    }

    template <class Ops>
    typename SparseEngine<Ops>::Row to_row(const SparseEngine<Ops>& e, const SparseVec& v) const {
        typename SparseEngine<Ops>::Row r;
        r.reserve(v.size());
        for (const auto& [c, s] : v)
            if (!s.is_zero()) r.emplace_back(c, e.ops_.from(s));
        return r;
    }

    template <class Ops>
    SparseVec from_row(const SparseEngine<Ops>& e, const typename SparseEngine<Ops>::Row& r) const {
        SparseVec out;
        out.reserve(r.size());
        for (const auto& [c, v] : r) out.emplace_back(c, e.ops_.to(v, field));
        return out;
    }
};

RowSpace::RowSpace(Field field, std::uint64_t ncols) : impl_(std::make_unique<Impl>(field, ncols)) {}
RowSpace::~RowSpace() = default;
RowSpace::RowSpace(const RowSpace& o) : impl_(std::make_unique<Impl>(*o.impl_)) {}
RowSpace& RowSpace::operator=(const RowSpace& o) {
    if (this != &o) impl_ = std::make_unique<Impl>(*o.impl_);
    return *this;
}
RowSpace::RowSpace(RowSpace&&) noexcept = default;
RowSpace& RowSpace::operator=(RowSpace&&) noexcept = default;

const Field& RowSpace::field() const noexcept { return impl_->field; }
std::uint64_t RowSpace::ncols() const noexcept { return impl_->ncols(); }
std::size_t RowSpace::rank() const noexcept {
    return std::visit([](const auto& e) { return e.rank(); }, impl_->engine);
}

bool RowSpace::insert(const SparseVec& v) {
    impl_->check(v);
    return std::visit(
        [&](auto& e) -> bool {
            using E = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<E, Gf2Engine>)
                return e.insert(impl_->to_bits(v));
            else
                return e.insert(impl_->to_row(e, v));
        },
        impl_->engine);
}

bool RowSpace::insert(const BitVec& v) {
    auto* e = std::get_if<Gf2Engine>(&impl_->engine);
    if (!e) throw DegreeMismatch("bit rows require GF(2)");
    if (v.size() != ncols()) throw DegreeMismatch("bit row width mismatch");
    return e->insert(v);
}

SparseVec RowSpace::reduce(const SparseVec& v) const {
    impl_->check(v);
    return std::visit(
        [&](const auto& e) -> SparseVec {
            using E = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<E, Gf2Engine>) {
                BitVec b = impl_->to_bits(v);
                e.reduce(b);
                return impl_->from_bits(b);
            } else {
                return impl_->from_row(e, e.reduce(impl_->to_row(e, v)));
            }
        },
        impl_->engine);
}

bool RowSpace::contains(const SparseVec& v) const { return reduce(v).empty(); }

BitVec RowSpace::reduce(const BitVec& v) const {
    auto* e = std::get_if<Gf2Engine>(&impl_->engine);
    if (!e) throw DegreeMismatch("bit rows require GF(2)");
    if (v.size() != ncols()) throw DegreeMismatch("bit row width mismatch");
    BitVec b = v;
    e->reduce(b);
    return b;
}

bool RowSpace::contains(const BitVec& v) const { return !reduce(v).any(); }

std::vector<std::uint64_t> RowSpace::pivot_columns() const {
    return std::visit([](const auto& e) { return e.leads(); }, impl_->engine);
}

std::vector<SparseVec> RowSpace::basis() const {
    return std::visit(
        [&](const auto& e) -> std::vector<SparseVec> {
            using E = std::decay_t<decltype(e)>;
            std::vector<SparseVec> out;
            if constexpr (std::is_same_v<E, Gf2Engine>) {
                for (const auto& b : e.rref()) out.push_back(impl_->from_bits(b));
            } else {
                for (const auto& r : e.rref()) out.push_back(impl_->from_row(e, r));
            }
            return out;
        },
        impl_->engine);
}

std::vector<BitVec> RowSpace::basis_bits() const {
    auto* e = std::get_if<Gf2Engine>(&impl_->engine);
    if (!e) throw DegreeMismatch("bit rows require GF(2)");
    return e->rref();
}

}  // namespace gsalg
