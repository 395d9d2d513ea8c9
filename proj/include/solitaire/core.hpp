#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "policy.hpp"

namespace solitaire {

// Errors that the CLI maps to exit code 1.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IllegalMove : DomainError {
    using DomainError::DomainError;
};
struct InfiniteFilling : DomainError {
    using DomainError::DomainError;
};
struct SizeLimit : DomainError {
    using DomainError::DomainError;
};

// Finite set with a canonical sorted layout.
template <class E>
class Pattern {
public:
    Pattern() = default;
    Pattern(std::initializer_list<E> xs) : cells_(xs) { normalize(); }
    explicit Pattern(std::vector<E> xs) : cells_(std::move(xs)) { normalize(); }
    template <class It>
    Pattern(It b, It e) : cells_(b, e) { normalize(); }

    bool contains(const E& x) const { return std::binary_search(cells_.begin(), cells_.end(), x); }
    bool insert(const E& x) {
        auto it = std::lower_bound(cells_.begin(), cells_.end(), x);
        if (it != cells_.end() && *it == x) return false;
        cells_.insert(it, x);
        return true;
    }
    bool erase(const E& x) {
        auto it = std::lower_bound(cells_.begin(), cells_.end(), x);
        if (it == cells_.end() || !(*it == x)) return false;
        cells_.erase(it);
        return true;
    }
    std::size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }
    auto begin() const { return cells_.begin(); }
    auto end() const { return cells_.end(); }
    const std::vector<E>& cells() const { return cells_; }

    bool subset_of(const Pattern& o) const {
        return std::includes(o.cells_.begin(), o.cells_.end(), cells_.begin(), cells_.end());
    }
    Pattern unite(const Pattern& o) const {
        std::vector<E> r;
        std::set_union(cells_.begin(), cells_.end(), o.cells_.begin(), o.cells_.end(), std::back_inserter(r));
        return from_sorted(std::move(r));
    }
    Pattern minus(const Pattern& o) const {
        std::vector<E> r;
        std::set_difference(cells_.begin(), cells_.end(), o.cells_.begin(), o.cells_.end(), std::back_inserter(r));
        return from_sorted(std::move(r));
    }
    Pattern intersect(const Pattern& o) const {
        std::vector<E> r;
        std::set_intersection(cells_.begin(), cells_.end(), o.cells_.begin(), o.cells_.end(),
                              std::back_inserter(r));
        return from_sorted(std::move(r));
    }
    static Pattern from_sorted(std::vector<E> v) {
        Pattern p;
        p.cells_ = std::move(v);
        return p;
    }

    auto operator<=>(const Pattern&) const = default;
    bool operator==(const Pattern&) const = default;

private:
    void normalize() {
        std::sort(cells_.begin(), cells_.end());
        cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
    }
    std::vector<E> cells_;
};

template <class E, class H>
struct PatternHash {
    std::size_t operator()(const Pattern<E>& p) const {
        std::size_t h = p.size();
        for (auto& c : p) h = hash_mix(h, H()(c));
        return h;
    }
};

template <class E>
struct Shape {
    std::vector<E> S;  // sorted
    std::vector<E> C;  // sorted, subset of S

    Shape() = default;
    Shape(std::vector<E> s, std::vector<E> c) : S(std::move(s)), C(std::move(c)) {
        std::sort(S.begin(), S.end());
        S.erase(std::unique(S.begin(), S.end()), S.end());
        std::sort(C.begin(), C.end());
        C.erase(std::unique(C.begin(), C.end()), C.end());
        if (S.empty() || C.empty()) throw ContractViolation("shape needs nonempty S and C");
        if (!std::includes(S.begin(), S.end(), C.begin(), C.end()))
            throw ContractViolation("C must be a subset of S");
    }
    static Shape full(std::vector<E> s) { return Shape(s, s); }
    bool in_C(const E& x) const { return std::binary_search(C.begin(), C.end(), x); }
    bool operator==(const Shape&) const = default;
};

template <class E>
struct MoveRecord {
    E g, vacated, filled;
    bool operator==(const MoveRecord&) const = default;
};

template <class E>
MoveRecord<E> reversed(const MoveRecord<E>& m) {
    return {m.g, m.filled, m.vacated};
}

template <class E>
using MoveTrace = std::vector<MoveRecord<E>>;

template <class E>
struct FillStep {
    E g;
    std::vector<E> added;
};

template <class E>
struct FillTrace {
    std::vector<FillStep<E>> steps;
};

template <class E>
struct FillResult {
    Pattern<E> closure;
    FillTrace<E> trace;
};

struct FillOptions {
    std::optional<std::size_t> step_cap;      // overrides the default cap
    std::optional<std::uint64_t> shuffle_seed;  // random pick order instead of lexicographic
};

namespace detail {

template <class G>
std::vector<typename G::element> translate(const G& grp, const typename G::element& g,
                                           const std::vector<typename G::element>& xs) {
    std::vector<typename G::element> out;
    out.reserve(xs.size());
    for (auto& x : xs) out.push_back(grp.mul(g, x));
    return out;
}

// All g with gS meeting P, i.e. {p s^-1}.
template <class G>
std::vector<typename G::element> candidate_translates(const G& grp, const Shape<typename G::element>& shape,
                                                      const Pattern<typename G::element>& P) {
    std::vector<typename G::element> out;
    std::vector<typename G::element> sinv;
    for (auto& s : shape.S) sinv.push_back(grp.inv(s));
    for (auto& p : P)
        for (auto& si : sinv) out.push_back(grp.mul(p, si));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace detail

template <class G>
std::vector<MoveRecord<typename G::element>> legal_moves(const G& grp, const Shape<typename G::element>& shape,
                                                          const Pattern<typename G::element>& P) {
    using E = typename G::element;
    if (shape.S.size() < 2) throw ContractViolation("moves need |S| >= 2");
    std::vector<MoveRecord<E>> out;
    for (auto& g : detail::candidate_translates(grp, shape, P)) {
        std::size_t missing = 0;
        std::optional<E> hole;
        std::vector<E> inC;
        for (auto& s : shape.S) {
            E x = grp.mul(g, s);
            if (P.contains(x)) {
                if (shape.in_C(s)) inC.push_back(x);
            } else {
                ++missing;
                if (shape.in_C(s)) hole = x;
            }
        }
        if (missing != 1 || !hole) continue;
        for (auto& v : inC) out.push_back({g, v, *hole});
    }
    return out;
}

// Returns an explanation if m is not a legal move on P, nothing otherwise.
template <class G>
std::optional<std::string> move_error(const G& grp, const Shape<typename G::element>& shape,
                                      const Pattern<typename G::element>& P,
                                      const MoveRecord<typename G::element>& m) {
    if (shape.S.size() < 2) return "shape has |S| < 2";
    if (m.vacated == m.filled) return "vacated and filled cells coincide";
    auto ginv = grp.inv(m.g);
    auto sv = grp.mul(ginv, m.vacated), sf = grp.mul(ginv, m.filled);
    if (!shape.in_C(sv)) return "vacated cell " + to_string(m.vacated) + " is not in gC";
    if (!shape.in_C(sf)) return "filled cell " + to_string(m.filled) + " is not in gC";
    if (!P.contains(m.vacated)) return "vacated cell " + to_string(m.vacated) + " is not in P";
    if (P.contains(m.filled)) return "filled cell " + to_string(m.filled) + " is already occupied";
    std::size_t present = 0;
    for (auto& s : shape.S) present += P.contains(grp.mul(m.g, s));
    if (present != shape.S.size() - 1)
        return "|P ∩ gS| = " + std::to_string(present) + ", expected " + std::to_string(shape.S.size() - 1);
    return std::nullopt;
}

template <class G>
Pattern<typename G::element> apply_move(const G& grp, const Shape<typename G::element>& shape,
                                        Pattern<typename G::element> P,
                                        const MoveRecord<typename G::element>& m) {
    if (auto err = move_error(grp, shape, P, m))
        throw IllegalMove("illegal move at g=" + to_string(m.g) + ": " + *err);
    P.erase(m.vacated);
    P.insert(m.filled);
    return P;
}

// Replays a trace; throws at the first illegal step with its index.
template <class G>
Pattern<typename G::element> replay(const G& grp, const Shape<typename G::element>& shape,
                                    Pattern<typename G::element> P,
                                    const MoveTrace<typename G::element>& trace) {
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (auto err = move_error(grp, shape, P, trace[i]))
            throw IllegalMove("step " + std::to_string(i) + " at g=" + to_string(trace[i].g) + ": " + *err);
        P.erase(trace[i].vacated);
        P.insert(trace[i].filled);
    }
    return P;
}

// The unique translate making (vacated -> filled) legal on P, if any.
template <class G>
std::optional<MoveRecord<typename G::element>> find_move(const G& grp, const Shape<typename G::element>& shape,
                                                         const Pattern<typename G::element>& P,
                                                         const typename G::element& vacated,
                                                         const typename G::element& filled) {
    for (auto& c : shape.C) {
        MoveRecord<typename G::element> m{grp.mul(vacated, grp.inv(c)), vacated, filled};
        if (!move_error(grp, shape, P, m)) return m;
    }
    return std::nullopt;
}

template <class G>
std::size_t default_step_cap(const Shape<typename G::element>& shape, std::size_t p) {
    std::size_t t = p + shape.S.size();
    return 10 * t * t;
}

template <class G>
FillResult<typename G::element> filling_closure(const G& grp, const Shape<typename G::element>& shape,
                                                const Pattern<typename G::element>& P,
                                                const FillOptions& opt = {}) {
    using E = typename G::element;
    FillResult<E> res;
    if (shape.S.size() < 2) {
        res.closure = P;
        return res;
    }
    std::optional<std::string> witness = grp.linear_witness(shape.S);
    std::optional<std::size_t> cap = opt.step_cap;
    if (!cap && (witness || !grp.finite_filling())) cap = default_step_cap<G>(shape, P.size());

    std::unordered_set<E, typename G::hasher> cur(P.begin(), P.end());
    std::vector<E> sinv;
    for (auto& s : shape.S) sinv.push_back(grp.inv(s));

    std::set<E> pending;  // lexicographic pick order
    std::vector<E> pool;  // random pick order
    std::unordered_set<E, typename G::hasher> in_pool;
    std::mt19937_64 rng(opt.shuffle_seed.value_or(0));
    auto push = [&](const E& x) {
        for (auto& si : sinv) {
            E g = grp.mul(x, si);
            if (opt.shuffle_seed) {
                if (in_pool.insert(g).second) pool.push_back(g);
            } else {
                pending.insert(g);
            }
        }
    };
    for (auto& p : P) push(p);

    auto next = [&](E& g) {
        if (opt.shuffle_seed) {
            if (pool.empty()) return false;
            std::size_t i = std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng);
            std::swap(pool[i], pool.back());
            g = pool.back();
            pool.pop_back();
            in_pool.erase(g);
            return true;
        }
        if (pending.empty()) return false;
        g = *pending.begin();
        pending.erase(pending.begin());
        return true;
    };

    E g;
    while (next(g)) {
        std::optional<E> hole;
        bool ok = true;
        for (auto& s : shape.S) {
            E x = grp.mul(g, s);
            if (cur.count(x)) continue;
            if (hole || !shape.in_C(s)) {
                ok = false;
                break;
            }
            hole = x;
        }
        if (!ok || !hole) continue;
        if (cap && res.trace.steps.size() >= *cap) {
            std::string msg = "possibly infinite filling: step cap " + std::to_string(*cap) + " exceeded";
            msg += witness ? " (linear shape: " + *witness + ")" : " (no linearity witness found)";
            throw InfiniteFilling(msg);
        }
        cur.insert(*hole);
        res.trace.steps.push_back({g, {*hole}});
        push(*hole);
    }
    res.closure = Pattern<E>(std::vector<E>(cur.begin(), cur.end()));
    return res;
}

template <class G>
Pattern<typename G::element> fill(const G& grp, const Shape<typename G::element>& shape,
                                  const Pattern<typename G::element>& P) {
    return filling_closure(grp, shape, P).closure;
}

struct ExcessLimits {
    std::size_t max_closure = 22;  // rank search over subsets of the closure
    std::size_t max_pattern = 20;  // excess-set enumeration over subsets of P
};

template <class G>
std::size_t rank_exact(const G& grp, const Shape<typename G::element>& shape,
                       const Pattern<typename G::element>& P, const ExcessLimits& lim = {}) {
    using E = typename G::element;
    auto F = fill(grp, shape, P);
    if (F.size() > lim.max_closure)
        throw SizeLimit("closure has " + std::to_string(F.size()) + " cells, over the limit of " +
                        std::to_string(lim.max_closure) + "; use shape-specific rank");
    const auto& cells = F.cells();
    std::size_t n = cells.size();
    for (std::size_t r = 0; r <= n; ++r) {
        // walk all r-subsets of the closure in lexicographic index order
        std::vector<std::size_t> idx(r);
        for (std::size_t i = 0; i < r; ++i) idx[i] = i;
        while (true) {
            std::vector<E> sub;
            for (auto i : idx) sub.push_back(cells[i]);
            if (fill(grp, shape, Pattern<E>::from_sorted(sub)) == F) return r;
            std::size_t k = r;
            while (k > 0 && idx[k - 1] == n - r + k - 1) --k;
            if (k == 0) break;
            ++idx[k - 1];
            for (std::size_t j = k; j < r; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return n;
}

template <class G>
std::size_t excess(const G& grp, const Shape<typename G::element>& shape, const Pattern<typename G::element>& P,
                   const ExcessLimits& lim = {}) {
    return P.size() - rank_exact(grp, shape, P, lim);
}

// Maximal excess sets: maximal Q subset of P with fill(P \ Q) = fill(P).
template <class G>
std::vector<Pattern<typename G::element>> excess_sets(const G& grp, const Shape<typename G::element>& shape,
                                                      const Pattern<typename G::element>& P,
                                                      const ExcessLimits& lim = {}) {
    using E = typename G::element;
    if (P.size() > lim.max_pattern)
        throw SizeLimit("pattern has " + std::to_string(P.size()) + " cells, over the limit of " +
                        std::to_string(lim.max_pattern));
    const auto F = fill(grp, shape, P);
    const auto& cells = P.cells();
    std::size_t n = cells.size();
    auto remove = [&](std::uint32_t mask) {
        std::vector<E> keep;
        for (std::size_t i = 0; i < n; ++i)
            if (!(mask >> i & 1)) keep.push_back(cells[i]);
        return Pattern<E>::from_sorted(keep);
    };
    // level-wise search; a set is tested only if all its one-smaller subsets are excess
    std::set<std::uint32_t> level{0}, maximal;
    while (!level.empty()) {
        std::set<std::uint32_t> nxt;
        for (auto m : level) {
            bool extended = false;
            for (std::size_t i = 0; i < n; ++i) {
                if (m >> i & 1) continue;
                std::uint32_t m2 = m | (1u << i);
                if (nxt.count(m2)) {
                    extended = true;
                    continue;
                }
                bool subsets_ok = true;
                for (std::size_t j = 0; j < n && subsets_ok; ++j)
                    if ((m2 >> j & 1) && j != i) subsets_ok = level.count(m2 & ~(1u << j)) > 0;
                if (!subsets_ok) continue;
                if (fill(grp, shape, remove(m2)) == F) {
                    nxt.insert(m2);
                    extended = true;
                }
            }
            if (!extended) maximal.insert(m);
        }
        level = std::move(nxt);
    }
    std::vector<Pattern<E>> out;
    for (auto m : maximal) {
        std::vector<E> q;
        for (std::size_t i = 0; i < n; ++i)
            if (m >> i & 1) q.push_back(cells[i]);
        out.push_back(Pattern<E>::from_sorted(q));
    }
    std::sort(out.begin(), out.end());
    return out;
}

template <class G>
std::size_t visible_excess(const G& grp, const Shape<typename G::element>& shape,
                           const Pattern<typename G::element>& P, const ExcessLimits& lim = {}) {
    std::size_t best = 0;
    for (auto& q : excess_sets(grp, shape, P, lim)) best = std::max(best, q.size());
    return best;
}

template <class E>
struct ReplayResult {
    Pattern<E> pattern;                          // final P ∪ extra
    Pattern<E> plain;                            // plain replay of P
    std::vector<std::pair<E, E>> displacement;  // extra cell: start -> end
};

// Replays a trace valid on P over P ∪ extra. When the filled cell is held by an
// extra marble the two marbles swap places, so the set is unchanged.
template <class G>
ReplayResult<typename G::element> monotone_replay(const G& grp, const Shape<typename G::element>& shape,
                                                  const Pattern<typename G::element>& P,
                                                  const MoveTrace<typename G::element>& trace,
                                                  const Pattern<typename G::element>& extra) {
    using E = typename G::element;
    if (!P.intersect(extra).empty()) throw ContractViolation("extra must be disjoint from P");
    Pattern<E> cur = P;
    std::map<E, E> where;  // current position -> start position of each extra
    for (auto& x : extra) where[x] = x;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& m = trace[i];
        if (auto err = move_error(grp, shape, cur, m))
            throw IllegalMove("step " + std::to_string(i) + " at g=" + to_string(m.g) + ": " + *err);
        cur.erase(m.vacated);
        cur.insert(m.filled);
        auto it = where.find(m.filled);
        if (it != where.end()) {
            E start = it->second;
            where.erase(it);
            where[m.vacated] = start;
        }
    }
    ReplayResult<E> r;
    r.plain = cur;
    std::vector<E> all(cur.begin(), cur.end());
    for (auto& [pos, start] : where) {
        all.push_back(pos);
        r.displacement.push_back({start, pos});
    }
    std::sort(r.displacement.begin(), r.displacement.end());
    r.pattern = Pattern<E>(all);
    return r;
}

// Apply a trace computed for a subpattern to a superset: moves whose target is
// already occupied become no-ops. Returns the emitted legal moves.
template <class G>
MoveTrace<typename G::element> lift_trace(const G& grp, const Shape<typename G::element>& shape,
                                          Pattern<typename G::element>& P,
                                          const MoveTrace<typename G::element>& trace) {
    MoveTrace<typename G::element> out;
    for (auto& m : trace) {
        if (P.contains(m.filled)) continue;
        if (auto err = move_error(grp, shape, P, m))
            throw std::logic_error("lift_trace: " + *err + " at g=" + to_string(m.g));
        P.erase(m.vacated);
        P.insert(m.filled);
        out.push_back(m);
    }
    return out;
}

}  // namespace solitaire
