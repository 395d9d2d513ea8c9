#pragma once

// TEP rules on Z^2: local validity, deduction along fillings, exhaustive
// independence and spanning checks inside a finite convex domain, and the
// translation of a solitaire trace into simple permutations.

#include <functional>
#include <numeric>
#include <random>
#include <unordered_map>

#include "contour.hpp"

namespace solitaire {

using Symbols = std::vector<int>;

// Allowed S-patterns over the alphabet {0..q-1}, tuples indexed in shape.S order.
struct TepRule {
    Shape2 shape;
    int q = 2;
    std::vector<char> allowed;  // by base-q code, S[0] least significant
    std::string name;

    std::size_t code(const Symbols& t) const {
        std::size_t c = 0;
        for (std::size_t i = t.size(); i-- > 0;) c = c * q + t[i];
        return c;
    }
    Symbols decode(std::size_t c) const {
        Symbols t(shape.S.size());
        for (auto& v : t) v = int(c % q), c /= q;
        return t;
    }
    std::size_t tuples() const {
        std::size_t n = 1;
        for (std::size_t i = 0; i < shape.S.size(); ++i) n *= q;
        return n;
    }
    bool ok(const Symbols& t) const { return allowed[code(t)]; }
    std::size_t position(Vec2 s) const {
        auto it = std::find(shape.S.begin(), shape.S.end(), s);
        if (it == shape.S.end()) throw ContractViolation("cell " + to_string(s) + " is not in S");
        return std::size_t(it - shape.S.begin());
    }

    // unique symbol at pos completing t; the rule guarantees it for pos in C
    int complete(Symbols t, std::size_t pos) const {
        int found = -1;
        for (int a = 0; a < q; ++a) {
            t[pos] = a;
            if (ok(t)) {
                if (found >= 0) throw std::logic_error("rule table corrupt: completion not unique");
                found = a;
            }
        }
        if (found < 0) throw std::logic_error("rule table corrupt: no completion");
        return found;
    }

    // each corner of C is determined by the rest of S
    void validate() const {
        if (q < 2) throw ContractViolation("alphabet needs at least 2 symbols");
        if (allowed.size() != tuples()) throw ContractViolation("rule table has the wrong size");
        for (auto c : shape.C) {
            std::size_t pos = position(c);
            for (std::size_t code0 = 0; code0 < tuples(); ++code0) {
                auto t = decode(code0);
                if (t[pos] != 0) continue;
                int hits = 0;
                for (int a = 0; a < q; ++a) t[pos] = a, hits += ok(t);
                if (hits != 1)
                    throw ContractViolation("not TEP at " + to_string(c) + ": " + std::to_string(hits) +
                                            " completions");
            }
        }
    }

    static TepRule from_predicate(Shape2 shape, int q, const std::function<bool(const Symbols&)>& pred,
                                  std::string name) {
        if (q < 2 || q > 64) throw ContractViolation("alphabet size must be in 2..64");
        double sz = std::pow(double(q), double(shape.S.size()));
        if (sz > double(1 << 24)) throw SizeLimit("rule table over 2^24 entries");
        TepRule r{std::move(shape), q, {}, std::move(name)};
        r.allowed.assign(r.tuples(), 0);
        for (std::size_t c = 0; c < r.tuples(); ++c) r.allowed[c] = pred(r.decode(c));
        r.validate();
        return r;
    }

    static TepRule abelian_sum(Shape2 shape, int q, int target) {
        return from_predicate(std::move(shape), q, [&](const Symbols& t) {
            return std::accumulate(t.begin(), t.end(), 0) % q == ((target % q) + q) % q;
        }, "abelian_sum");
    }

    static TepRule explicit_table(Shape2 shape, int q, const std::vector<Symbols>& rows) {
        std::set<Symbols> allow(rows.begin(), rows.end());
        for (auto& t : allow) {
            if (t.size() != shape.S.size()) throw ContractViolation("table row has the wrong length");
            for (auto v : t)
                if (v < 0 || v >= q) throw ContractViolation("table symbol out of range");
        }
        double want = std::pow(double(q), double(shape.S.size() - 1));
        if (shape.C == shape.S && double(allow.size()) != want)
            throw ContractViolation("explicit table needs |A|^(|S|-1) rows");
        return from_predicate(std::move(shape), q, [&](const Symbols& t) { return allow.count(t) > 0; },
                              "explicit_table");
    }

    // sum over C equals f of the cells outside C
    static TepRule sum_with_f(Shape2 shape, int q, const std::function<int(const Symbols&)>& f) {
        std::vector<std::size_t> inC, outC;
        for (std::size_t i = 0; i < shape.S.size(); ++i) (shape.in_C(shape.S[i]) ? inC : outC).push_back(i);
        return from_predicate(std::move(shape), q, [&](const Symbols& t) {
            int s = 0;
            for (auto i : inC) s += t[i];
            Symbols rest;
            for (auto i : outC) rest.push_back(t[i]);
            return s % q == ((f(rest) % q) + q) % q;
        }, "sum_with_f");
    }
};

// Triangle sum-zero rule; q = 2 is the XOR spacetime subshift.
inline TepRule ledrappier(int q = 2) {
    auto r = TepRule::abelian_sum(triangle_shape(), q, 0);
    r.name = q == 2 ? "ledrappier" : "sum_zero_mod_" + std::to_string(q);
    return r;
}

// Permutations of {0,1,2} in lexicographic order.
inline const std::vector<std::array<int, 3>>& s3_elements() {
    static const std::vector<std::array<int, 3>> els = [] {
        std::vector<std::array<int, 3>> v;
        std::array<int, 3> p{0, 1, 2};
        do v.push_back(p);
        while (std::next_permutation(p.begin(), p.end()));
        return v;
    }();
    return els;
}

// index of a o b, (a o b)(i) = a(b(i))
inline int s3_compose(int a, int b) {
    auto& e = s3_elements();
    std::array<int, 3> c{};
    for (int i = 0; i < 3; ++i) c[i] = e[a][e[b][i]];
    return int(std::find(e.begin(), e.end(), c) - e.begin());
}

// Triangle rule over S_3: x(0,1) = x(1,0) o x(0,0).
inline TepRule s3_triangle_rule() {
    auto sh = triangle_shape();
    auto tmp = TepRule{sh, 6, {}, ""};
    std::size_t p00 = tmp.position({0, 0}), p10 = tmp.position({1, 0}), p01 = tmp.position({0, 1});
    auto r = TepRule::from_predicate(sh, 6, [&](const Symbols& t) { return t[p01] == s3_compose(t[p10], t[p00]); },
                                     "s3_triangle");
    return r;
}

struct LocalPattern {
    P2 domain;
    Symbols values;  // aligned with the sorted domain

    int at(Vec2 c) const {
        auto it = std::lower_bound(domain.begin(), domain.end(), c);
        if (it == domain.end() || *it != c) throw ContractViolation("cell " + to_string(c) + " not in the domain");
        return values[std::size_t(it - domain.begin())];
    }
};

inline LocalPattern make_local(const std::map<Vec2, int>& m) {
    LocalPattern p;
    std::vector<Vec2> cells;
    for (auto& [c, v] : m) cells.push_back(c), p.values.push_back(v);
    p.domain = P2::from_sorted(cells);
    return p;
}

inline bool locally_valid(const TepRule& rule, const LocalPattern& p) {
    if (p.values.size() != p.domain.size()) throw ContractViolation("pattern values do not match its domain");
    for (auto v : p.values)
        if (v < 0 || v >= rule.q) throw ContractViolation("symbol out of range");
    for (auto g : inner_translates(rule.shape, p.domain)) {
        Symbols t;
        for (auto s : rule.shape.S) t.push_back(p.at(g + s));
        if (!rule.ok(t)) return false;
    }
    return true;
}

// Extends p over fill(domain), one filled cell at a time.
inline LocalPattern deduce_closure(const TepRule& rule, const LocalPattern& p, std::uint64_t shuffle_seed = 0) {
    if (!locally_valid(rule, p)) throw DomainError("deduce_closure needs a locally valid pattern");
    FillOptions opt;
    opt.shuffle_seed = shuffle_seed;
    auto fr = filling_closure(Z2{}, rule.shape, p.domain, opt);
    std::map<Vec2, int> val;
    for (std::size_t i = 0; i < p.domain.size(); ++i) val[*(p.domain.begin() + i)] = p.values[i];
    for (auto& st : fr.trace.steps)
        for (auto& c : st.added) {
            Symbols t;
            std::size_t pos = 0;
            for (std::size_t i = 0; i < rule.shape.S.size(); ++i) {
                Vec2 x = st.g + rule.shape.S[i];
                if (x == c)
                    pos = i, t.push_back(0);
                else
                    t.push_back(val.at(x));
            }
            val[c] = rule.complete(t, pos);
        }
    return make_local(val);
}

// All locally valid patterns on D, rows aligned with the sorted cells of D.
struct Enumeration {
    P2 domain;
    std::vector<std::vector<std::uint8_t>> rows;

    std::size_t index(Vec2 c) const {
        auto it = std::lower_bound(domain.begin(), domain.end(), c);
        if (it == domain.end() || *it != c) throw ContractViolation("cell " + to_string(c) + " not in the domain");
        return std::size_t(it - domain.begin());
    }
};

constexpr std::size_t default_tep_budget = std::size_t(1) << 20;

// Backtracking over the cells of D in (y, x) order; each translate inside D
// is checked once its last cell is set.
inline Enumeration enumerate_valid(const TepRule& rule, const P2& D, std::size_t budget = default_tep_budget) {
    Enumeration out{D, {}};
    std::vector<Vec2> cells(D.begin(), D.end());
    std::vector<std::size_t> order(cells.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::pair{cells[a].y, cells[a].x} < std::pair{cells[b].y, cells[b].x};
    });
    std::vector<std::size_t> rank(cells.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
    std::vector<std::vector<std::vector<std::size_t>>> checks(cells.size());  // by step
    for (auto g : inner_translates(rule.shape, D)) {
        std::vector<std::size_t> ids;
        std::size_t last = 0;
        for (auto s : rule.shape.S) {
            ids.push_back(out.index(g + s));
            last = std::max(last, rank[ids.back()]);
        }
        checks[last].push_back(ids);
    }
    std::vector<std::uint8_t> cur(cells.size());
    Symbols t(rule.shape.S.size());
    std::function<void(std::size_t)> rec = [&](std::size_t step) {
        if (step == cells.size()) {
            if (out.rows.size() >= budget)
                throw SizeLimit("more than " + std::to_string(budget) + " valid patterns on the domain");
            out.rows.push_back(cur);
            return;
        }
        for (int a = 0; a < rule.q; ++a) {
            cur[order[step]] = std::uint8_t(a);
            bool good = true;
            for (auto& ids : checks[step]) {
                for (std::size_t i = 0; i < ids.size(); ++i) t[i] = cur[ids[i]];
                if (!rule.ok(t)) {
                    good = false;
                    break;
                }
            }
            if (good) rec(step + 1);
        }
    };
    if (rule.q > 255) throw ContractViolation("alphabet too large for enumeration");
    rec(0);
    return out;
}

inline std::vector<std::size_t> indices_of(const Enumeration& en, const P2& T) {
    std::vector<std::size_t> ids;
    for (auto c : T) ids.push_back(en.index(c));
    return ids;
}

inline std::vector<std::uint8_t> project(const std::vector<std::uint8_t>& row, const std::vector<std::size_t>& ids) {
    std::vector<std::uint8_t> k;
    for (auto i : ids) k.push_back(row[i]);
    return k;
}

// every assignment on T occurs
inline bool is_independent(const Enumeration& en, int q, const P2& T) {
    if (!T.subset_of(en.domain)) throw ContractViolation("T must lie inside D");
    auto ids = indices_of(en, T);
    std::set<std::vector<std::uint8_t>> seen;
    for (auto& r : en.rows) seen.insert(project(r, ids));
    double want = std::pow(double(q), double(T.size()));
    return double(seen.size()) == want;
}

inline bool is_independent(const TepRule& rule, const P2& T, const P2& D, std::size_t budget = default_tep_budget) {
    return is_independent(enumerate_valid(rule, D, budget), rule.q, T);
}

// cells of D whose content is a function of the content on P
inline P2 spanned_set(const Enumeration& en, const P2& P) {
    if (!P.subset_of(en.domain)) throw ContractViolation("P must lie inside D");
    auto ids = indices_of(en, P);
    std::map<std::vector<std::uint8_t>, std::size_t> first;
    std::vector<char> det(en.domain.size(), 1);
    for (std::size_t r = 0; r < en.rows.size(); ++r) {
        auto [it, fresh] = first.emplace(project(en.rows[r], ids), r);
        if (fresh) continue;
        auto& a = en.rows[it->second];
        for (std::size_t i = 0; i < det.size(); ++i)
            if (a[i] != en.rows[r][i]) det[i] = 0;
    }
    std::vector<Vec2> out;
    std::size_t i = 0;
    for (auto c : en.domain) {
        if (det[i++]) out.push_back(c);
    }
    return P2::from_sorted(out);
}

inline P2 spanned_set(const TepRule& rule, const P2& P, const P2& D, std::size_t budget = default_tep_budget) {
    return spanned_set(enumerate_valid(rule, D, budget), P);
}

inline bool is_filling_basis(const TepRule& rule, const P2& T, const P2& D, std::size_t budget = default_tep_budget) {
    return fill(Z2{}, rule.shape, T) == D && is_independent(rule, T, D, budget);
}

inline std::vector<P2> subsets_of(const P2& P) {
    if (P.size() > 20) throw SizeLimit("subset enumeration needs |P| <= 20");
    std::vector<Vec2> c(P.begin(), P.end());
    std::vector<P2> out;
    for (std::uint32_t m = 0; m < (1u << c.size()); ++m) {
        std::vector<Vec2> s;
        for (std::size_t i = 0; i < c.size(); ++i)
            if (m >> i & 1) s.push_back(c[i]);
        out.push_back(P2::from_sorted(s));
    }
    return out;
}

// largest Q inside P whose projection is onto
inline std::size_t rank_indep(const Enumeration& en, int q, const P2& P) {
    std::size_t best = 0;
    for (auto& Q : subsets_of(P))
        if (Q.size() > best && is_independent(en, q, Q)) best = Q.size();
    return best;
}

// smallest R inside P determining all of P
inline std::size_t rank_span(const Enumeration& en, const P2& P) {
    std::size_t best = P.size();
    for (auto& R : subsets_of(P))
        if (R.size() < best && P.subset_of(spanned_set(en, R))) best = R.size();
    return best;
}

inline std::size_t encode_values(const std::vector<std::uint8_t>& v, int q) {
    std::size_t c = 0;
    for (std::size_t i = v.size(); i-- > 0;) c = c * q + v[i];
    return c;
}

// Natural bijection X|_P -> X|_Q for bases P, Q of D, on base-q codes of the
// values in sorted cell order (first cell least significant).
inline std::vector<std::size_t> base_change_bijection(const TepRule& rule, const P2& P, const P2& Q, const P2& D,
                                                      std::size_t budget = default_tep_budget) {
    if (P.size() != Q.size()) throw DomainError("bases of one domain have equal size");
    auto en = enumerate_valid(rule, D, budget);
    if (!is_independent(en, rule.q, P) || !is_independent(en, rule.q, Q)) throw DomainError("P and Q must be independent");
    auto pi = indices_of(en, P), qi = indices_of(en, Q);
    std::size_t n = 1;
    for (std::size_t i = 0; i < P.size(); ++i) n *= rule.q;
    std::vector<std::size_t> f(n, SIZE_MAX);
    for (auto& r : en.rows) {
        auto a = encode_values(project(r, pi), rule.q), b = encode_values(project(r, qi), rule.q);
        if (f[a] != SIZE_MAX && f[a] != b) throw DomainError("P does not span Q inside D");
        f[a] = b;
    }
    std::vector<char> hit(n, 0);
    for (auto b : f) {
        if (b == SIZE_MAX || hit[b]) throw DomainError("restriction is not a bijection");
        hit[b] = 1;
    }
    return f;
}

// Permutation of the contents of a few slots, identity on the others.
struct SimplePermStep {
    std::vector<int> cells;
    std::vector<std::size_t> table;  // on base-q codes of the listed cells
};

inline void apply_step(const SimplePermStep& s, int q, std::vector<int>& x) {
    std::size_t c = 0;
    for (std::size_t i = s.cells.size(); i-- > 0;) c = c * q + x[s.cells[i]];
    std::size_t d = s.table.at(c);
    for (auto i : s.cells) x[i] = int(d % q), d /= q;
}

// Each move rewrites the slot of the vacated cell with the value of the filled
// cell, reading the other present cells of the translate. A final series of
// slot swaps brings the slots into the sorted order of the end pattern.
inline std::vector<SimplePermStep> compile_simple_perms(const TepRule& rule, const P2& P, const Trace2& trace) {
    std::map<Vec2, int> slot;
    int i = 0;
    for (auto c : P) slot[c] = i++;
    std::vector<SimplePermStep> steps;
    P2 cur = P;
    for (auto& m : trace) {
        if (auto err = move_error(Z2{}, rule.shape, cur, m)) throw IllegalMove("trace invalid: " + *err);
        if (!rule.shape.in_C(m.filled - m.g) || !rule.shape.in_C(m.vacated - m.g))
            throw IllegalMove("trace invalid: move outside C");
        SimplePermStep st;
        std::vector<Vec2> present;
        for (auto s : rule.shape.S) {
            Vec2 x = m.g + s;
            if (x != m.filled) present.push_back(x), st.cells.push_back(slot.at(x));
        }
        std::size_t k = st.cells.size();
        std::size_t n = 1;
        for (std::size_t j = 0; j < k; ++j) n *= rule.q;
        std::size_t vpos = std::size_t(std::find(present.begin(), present.end(), m.vacated) - present.begin());
        std::size_t fpos = rule.position(m.filled - m.g);
        st.table.resize(n);
        for (std::size_t c = 0; c < n; ++c) {
            Symbols vals(k);
            std::size_t d = c;
            for (auto& v : vals) v = int(d % rule.q), d /= rule.q;
            Symbols t(rule.shape.S.size());
            std::size_t j = 0;
            for (std::size_t si = 0; si < t.size(); ++si)
                if (si != fpos) t[si] = vals[j++];
            int filled = rule.complete(t, fpos);
            vals[vpos] = filled;
            std::size_t e = 0;
            for (std::size_t jj = k; jj-- > 0;) e = e * rule.q + vals[jj];
            st.table[c] = e;
        }
        int s0 = slot.at(m.vacated);
        slot.erase(m.vacated);
        slot[m.filled] = s0;
        cur.erase(m.vacated);
        cur.insert(m.filled);
        steps.push_back(std::move(st));
    }
    // swap slots until sorted cell j sits in slot j
    std::vector<int> at(slot.size());  // slot -> rank of its cell
    int r = 0;
    for (auto& [c, s] : slot) at[s] = r++;
    std::size_t q2 = std::size_t(rule.q) * rule.q;
    for (int s = 0; s < (int)at.size(); ++s)
        while (at[s] != s) {
            int t = at[s];
            SimplePermStep sw;
            sw.cells = {s, t};
            sw.table.resize(q2);
            for (std::size_t c = 0; c < q2; ++c) sw.table[c] = (c % rule.q) * rule.q + c / rule.q;
            steps.push_back(sw);
            std::swap(at[s], at[t]);
        }
    return steps;
}

inline std::size_t max_cells_touched(const std::vector<SimplePermStep>& steps) {
    std::size_t m = 0;
    for (auto& s : steps) m = std::max(m, s.cells.size());
    return m;
}

}  // namespace solitaire
