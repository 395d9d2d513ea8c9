#pragma once

// Triangle solitaire: fill decomposition, orbit normal forms and explicit move
// sequences to them, line-orbit tests and stack patterns.

#include <deque>
#include <functional>

#include "board.hpp"
#include "contour.hpp"

namespace solitaire {

struct TriangleComponent {
    Vec2 v;
    int n = 0;
    int k = 0;
    auto operator<=>(const TriangleComponent&) const = default;
};

inline bool in_triangle(Vec2 v, int m, Vec2 p) {
    return p.x >= v.x && p.y >= v.y && (p.x - v.x) + (p.y - v.y) <= m - 1;
}

// Components of phi(P) as (anchor, size), sorted by anchor.
inline std::vector<std::pair<Vec2, int>> fill_decomposition(const P2& P) {
    auto F = fill(Z2{}, triangle_shape(), P);
    std::unordered_set<Vec2, Vec2Hash> left(F.begin(), F.end());
    static const Vec2 nbr[6] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}};
    std::vector<std::pair<Vec2, int>> out;
    for (auto s : F) {
        if (!left.count(s)) continue;
        std::vector<Vec2> comp{s}, stack{s};
        left.erase(s);
        while (!stack.empty()) {
            auto c = stack.back();
            stack.pop_back();
            for (auto d : nbr)
                if (left.erase(c + d)) comp.push_back(c + d), stack.push_back(c + d);
        }
        Vec2 v = comp.front();
        int xmax = v.x;
        for (auto c : comp) v.x = std::min(v.x, c.x), v.y = std::min(v.y, c.y), xmax = std::max(xmax, c.x);
        int n = xmax - v.x + 1;
        if ((int)comp.size() != n * (n + 1) / 2 || P2(comp) != triangle_cells(n, v))
            throw std::logic_error("fill component is not a triangle");
        out.push_back({v, n});
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Line L_n plus the first k cells of T_n \ L_n, rows nearest the line first,
// each row left to right.
inline P2 normal_cells(int n, int k, Vec2 v = {}) {
    if (n < 1 || k < 0 || k > n * (n - 1) / 2) throw ContractViolation("normal form out of range");
    std::vector<Vec2> c;
    for (int b = 0; b < n; ++b)
        for (int a = 0; a + b < n; ++a)
            if (b == 0 || k-- > 0) c.push_back(v + Vec2{a, b});
    return P2(c);
}

inline std::vector<TriangleComponent> identify_orbit(const P2& P) {
    std::vector<TriangleComponent> out;
    for (auto [v, n] : fill_decomposition(P)) {
        int cnt = 0;
        for (auto p : P) cnt += in_triangle(v, n, p);
        out.push_back({v, n, cnt - n});
    }
    return out;
}

inline P2 normal_form(const std::vector<TriangleComponent>& comps) {
    P2 out;
    for (auto& c : comps) out = out.unite(normal_cells(c.n, c.k, c.v));
    return out;
}

inline bool line_orbit_member(const P2& P) {
    if (P.empty()) return false;
    auto d = fill_decomposition(P);
    return d.size() == 1 && d[0].second == (int)P.size();
}

// At most j points in the j right-most columns of T_n, for every j.
inline bool a_n_condition(const P2& P, int n) {
    if ((int)P.size() != n) throw ContractViolation("a_n_condition expects |P| = n");
    for (auto p : P)
        if (!in_triangle({}, n, p)) throw ContractViolation("a_n_condition expects P inside T_n");
    for (int j = 1; j <= n; ++j) {
        int cnt = 0;
        for (auto p : P) cnt += p.x >= n - j;
        if (cnt > j) return false;
    }
    return true;
}

enum class StackKind { Horizontal, Vertical, Diagonal };

// One point on each column (horizontal), row (vertical) or anti-diagonal
// (diagonal) of T_n; n! patterns per kind.
inline void for_each_stack(int n, StackKind kind, const std::function<void(const P2&)>& f) {
    std::vector<Vec2> cells(n);
    std::function<void(int)> rec = [&](int line) {
        if (line == n) {
            f(P2(cells));
            return;
        }
        int len = n - line;
        for (int i = 0; i < len; ++i) {
            switch (kind) {
                case StackKind::Horizontal: cells[line] = {line, i}; break;
                case StackKind::Vertical: cells[line] = {i, line}; break;
                case StackKind::Diagonal: cells[line] = {i, n - 1 - line - i}; break;
            }
            rec(line + 1);
        }
    };
    rec(0);
}

inline std::vector<P2> stacks(int n, StackKind kind) {
    if (n > 9) throw SizeLimit("stacks: n! patterns, n must be at most 9");
    std::vector<P2> out;
    for_each_stack(n, kind, [&](const P2& p) { out.push_back(p); });
    return out;
}

// Translate of S containing both cells.
inline Vec2 move_between(const Shape2& shape, Vec2 from, Vec2 to) {
    for (auto s1 : shape.S)
        for (auto s2 : shape.S)
            if (s2 - s1 == to - from) return from - s1;
    throw ContractViolation("cells " + to_string(from) + " and " + to_string(to) + " share no translate");
}

namespace detail {

enum class Edge { Bottom, Left, Diag };

inline Vec2 edge_corner(Edge e) {
    switch (e) {
        case Edge::Bottom: return {0, 1};
        case Edge::Left: return {1, 0};
        default: return {0, 0};
    }
}

struct Line {
    Vec2 v;
    int m = 1;
    Edge e = Edge::Bottom;

    Vec2 cell(int i) const {
        switch (e) {
            case Edge::Bottom: return v + Vec2{i, 0};
            case Edge::Left: return v + Vec2{0, i};
            default: return v + Vec2{i, m - 1 - i};
        }
    }
    std::vector<Vec2> cells() const {
        std::vector<Vec2> c;
        for (int i = 0; i < m; ++i) c.push_back(cell(i));
        return c;
    }
    bool contains(Vec2 p) const { return in_triangle(v, m, p); }
};

// Which side of v + T_m the outside cell p touches: r = 0 below, 1 diagonal,
// 2 left, with the zipper position k.
struct Side {
    int r, k;
};

inline std::optional<Side> touching_side(Vec2 v, int m, Vec2 p) {
    Vec2 q = p - v;
    if (q.y == -1 && q.x >= 0 && q.x <= m) return Side{0, q.x};
    if (q.x >= 0 && q.y >= 0 && q.x + q.y == m) return Side{1, q.y};
    if (q.x == -1 && q.y >= 0 && q.y <= m) return Side{2, m - q.y};
    return std::nullopt;
}

inline Edge side_edge(int r) { return r == 0 ? Edge::Bottom : r == 1 ? Edge::Diag : Edge::Left; }

inline Line extended(const Line& L, int r) {
    Vec2 shift = r == 0 ? Vec2{0, -1} : r == 2 ? Vec2{-1, 0} : Vec2{0, 0};
    return {L.v + shift, L.m + 1, side_edge(r)};
}

// rotation of T_m onto itself: bottom -> diagonal -> left
inline Vec2 rot(int m, Vec2 p) { return {m - 1 - p.x - p.y, p.x}; }

inline void convert_edge(Board& B, Line& L, Edge to) {
    if (L.e == to || L.m == 1) {
        L.e = to;
        return;
    }
    auto sh = triangle_shape();
    Vec2 lo = edge_corner(L.e), hi = edge_corner(to);
    auto ord = swap_order(sh.S, lo, hi);
    B.lift(sweep_swap(sh, triangle_cells(L.m, L.v), lo, hi, *ord));
    L.e = to;
}

// Adds the touching cell p to the line's triangle.
inline void extend_line(Board& B, Line& L, Vec2 p) {
    auto side = touching_side(L.v, L.m, p);
    if (!side) throw std::logic_error("extend_line: cell does not touch the triangle");
    convert_edge(B, L, side_edge(side->r));
    int m = L.m, k = side->k;
    auto frame = [&](Vec2 q) {
        for (int i = 0; i < side->r; ++i) q = rot(m, q);
        return L.v + q;
    };
    for (int j = k - 1; j >= 0; --j) B.lift(frame({j, 0}), frame({j, -1}));
    for (int j = k; j < m; ++j) B.lift(frame({j, 0}), frame({j + 1, -1}));
    L = extended(L, side->r);
}

inline bool triangles_touch(const Line& a, const Line& b) {
    const Line& s = a.m <= b.m ? a : b;
    const Line& t = a.m <= b.m ? b : a;
    static const Vec2 around[7] = {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}};
    for (auto c : triangle_cells(s.m, s.v))
        for (auto d : around)
            if (t.contains(c + d)) return true;
    return false;
}

// Maximal runs of the line's cells outside the triangle (v, m), as lines.
inline std::vector<Line> pieces_outside(const Line& L, const Line& region) {
    std::vector<Line> out;
    int start = -1;
    auto close = [&](int end) {
        if (start < 0) return;
        int len = end - start;
        Line p;
        p.m = len;
        p.e = L.e;
        Vec2 a = L.cell(start), b = L.cell(end - 1);
        if (L.e == Edge::Diag)
            p.v = {std::min(a.x, b.x), std::min(a.y, b.y)};
        else
            p.v = a;
        out.push_back(p);
        start = -1;
    };
    for (int i = 0; i < L.m; ++i) {
        if (region.contains(L.cell(i)))
            close(i);
        else if (start < 0)
            start = i;
    }
    close(L.m);
    return out;
}

struct LineSet {
    Board& B;
    std::vector<Line> lines;

    // Lines other than ai, bi that meet the region are replaced by their
    // outside pieces; ai and bi are updated to the new indices.
    void split_by(const Line& region, std::size_t& ai, std::size_t& bi) {
        std::vector<Line> next;
        std::size_t na = ai, nb = bi;
        for (std::size_t i = 0; i < lines.size(); ++i) {
            if (i == ai) na = next.size();
            if (i == bi) nb = next.size();
            bool cut = false;
            if (i != ai && i != bi)
                for (auto c : lines[i].cells()) cut |= region.contains(c);
            if (!cut)
                next.push_back(lines[i]);
            else
                for (auto& p : pieces_outside(lines[i], region)) next.push_back(p);
        }
        lines = std::move(next);
        ai = na, bi = nb;
    }

    void cover_strays() {
        std::vector<Vec2> stray;
        for (auto c : B.cells) {
            bool cov = false;
            for (auto& l : lines)
                if (l.contains(c)) {
                    cov = true;
                    break;
                }
            if (!cov) stray.push_back(c);
        }
        std::sort(stray.begin(), stray.end());
        for (auto c : stray) lines.push_back({c, 1, Edge::Bottom});
    }

    struct Plan {
        bool swap_roles;
        Edge e;
        std::vector<Vec2> order;
    };

    std::optional<Plan> plan(const Line& A, const Line& Bl, bool swap_roles) const {
        std::vector<Edge> edges{Bl.e};
        for (auto e : {Edge::Bottom, Edge::Left, Edge::Diag})
            if (e != Bl.e) edges.push_back(e);
        for (auto e : edges) {
            Line b = Bl;
            b.e = e;
            if (e != Bl.e) {
                bool clash = false;
                for (auto c : A.cells()) clash |= b.contains(c);
                if (clash) continue;
            }
            Line t = A;
            auto rem = b.cells();
            std::vector<Vec2> order;
            bool ok = true;
            while (true) {
                std::erase_if(rem, [&](Vec2 c) { return t.contains(c); });
                if (rem.empty()) break;
                auto it = std::find_if(rem.begin(), rem.end(),
                                       [&](Vec2 c) { return touching_side(t.v, t.m, c).has_value(); });
                if (it == rem.end()) {
                    ok = false;
                    break;
                }
                order.push_back(*it);
                t = extended(t, touching_side(t.v, t.m, *it)->r);
            }
            if (ok) return Plan{swap_roles, e, order};
        }
        return std::nullopt;
    }

    void merge(std::size_t i, std::size_t j) {
        auto p = plan(lines[i], lines[j], false);
        if (!p) p = plan(lines[j], lines[i], true);
        if (!p) throw std::logic_error("triangle path: no merge plan");
        std::size_t ai = p->swap_roles ? j : i, bi = p->swap_roles ? i : j;
        if (p->e != lines[bi].e) {
            convert_edge(B, lines[bi], p->e);
            Line region = lines[bi];
            split_by(region, ai, bi);
        }
        for (auto c : p->order) {
            extend_line(B, lines[ai], c);
            Line region = lines[ai];
            split_by(region, ai, bi);
        }
        lines.erase(lines.begin() + bi);
        cover_strays();
    }

    void consolidate() {
        for (int guard = 0;; ++guard) {
            if (guard > 100000) throw std::logic_error("triangle path: merging does not terminate");
            std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.v < b.v; });
            std::optional<std::pair<std::size_t, std::size_t>> pair;
            for (std::size_t i = 0; i < lines.size() && !pair; ++i)
                for (std::size_t j = i + 1; j < lines.size() && !pair; ++j)
                    if (triangles_touch(lines[i], lines[j])) pair = {i, j};
            if (!pair) return;
            merge(pair->first, pair->second);
        }
    }
};

// Local path for T_3: bottom row plus top corner to bottom row plus a row-1 cell.
inline const std::vector<std::pair<Vec2, Vec2>>& base3() {
    static const std::vector<std::pair<Vec2, Vec2>> path = [] {
        auto sh = triangle_shape();
        P2 start = line_cells(3).unite(P2{{0, 2}});
        std::map<P2, std::pair<P2, Move2>> prev;
        std::deque<P2> q{start};
        prev.emplace(start, std::pair<P2, Move2>{start, {}});
        while (!q.empty()) {
            auto cur = q.front();
            q.pop_front();
            if (line_cells(3).subset_of(cur) && !cur.contains({0, 2})) {
                std::vector<std::pair<Vec2, Vec2>> out;
                for (auto c = cur; c != start; c = prev.at(c).first)
                    out.push_back({prev.at(c).second.vacated, prev.at(c).second.filled});
                std::reverse(out.begin(), out.end());
                return out;
            }
            for (auto& m : legal_moves(Z2{}, sh, cur)) {
                auto nx = apply_move(Z2{}, sh, cur, m);
                if (prev.emplace(nx, std::pair<P2, Move2>{cur, m}).second) q.push_back(nx);
            }
        }
        throw std::logic_error("base3: unreachable");
    }();
    return path;
}

inline void apply_base3(Board& B, Vec2 u) {
    for (auto [f, t] : base3()) B.step(u + f, u + t);
}

// u + T_l holds its bottom row and its top corner only; brings the corner
// cell down to row 1.
inline void fetch_corner(Board& B, Vec2 u, int l) {
    if (l <= 2) return;
    if (l == 3) {
        apply_base3(B, u);
        return;
    }
    for (int j = 0; j <= l - 2; ++j) B.step(u + Vec2{j, 0}, u + Vec2{j, 1});
    fetch_corner(B, u + Vec2{0, 1}, l - 1);
    int j2 = -1;
    for (int j = 0; j <= l - 3; ++j)
        if (B.has(u + Vec2{j, 2})) j2 = j;
    for (int j = l - 2; j >= 0; --j) B.step(u + Vec2{j, 1}, u + Vec2{j, 0});
    if (j2 < 0) throw std::logic_error("fetch_corner: lost the fetched cell");
    apply_base3(B, u + Vec2{j2, 0});
}

inline void slide_left(Board& B, Vec2 v, int r, int a) {
    B.step(v + Vec2{a, r - 1}, v + Vec2{a - 1, r});
    B.step(v + Vec2{a, r}, v + Vec2{a, r - 1});
}

inline void slide_right(Board& B, Vec2 v, int r, int a) {
    B.step(v + Vec2{a + 1, r - 1}, v + Vec2{a + 1, r});
    B.step(v + Vec2{a, r}, v + Vec2{a + 1, r - 1});
}

inline std::vector<int> row_cells(const Board& B, Vec2 v, int n, int r) {
    std::vector<int> out;
    for (int a = 0; a < n - r; ++a)
        if (B.has(v + Vec2{a, r})) out.push_back(a);
    return out;
}

// Slides the cells of row r of v + T_n onto the target columns; row r-1 must
// be full.
inline void arrange_row(Board& B, Vec2 v, int n, int r, const std::vector<int>& target) {
    auto src = row_cells(B, v, n, r);
    if (src.size() != target.size()) throw std::logic_error("arrange_row: count mismatch");
    for (std::size_t i = 0; i < src.size(); ++i)
        for (int a = src[i]; a > target[i]; --a) slide_left(B, v, r, a);
    for (std::size_t i = src.size(); i-- > 0;)
        for (int a = src[i]; a < target[i]; ++a) slide_right(B, v, r, a);
}

// Row r of v + T_n is not full and rows below it are; x = (a, r+1) drops into
// row r.
inline void drop_into_row(Board& B, Vec2 v, int n, int r, int a) {
    auto src = row_cells(B, v, n, r);
    if (src.empty()) {
        apply_base3(B, v + Vec2{a, r - 1});
        return;
    }
    bool ready = std::binary_search(src.begin(), src.end(), a) && !std::binary_search(src.begin(), src.end(), a + 1);
    if (!ready) {
        // keep a occupied and a+1 free, moving the others as little as possible
        std::vector<int> rest;
        for (int c : src)
            if (c != a && c != a + 1) rest.push_back(c);
        auto dist = [&](int c) { return std::abs(c - a); };
        auto nearest = std::min_element(rest.begin(), rest.end(), [&](int p, int q) { return dist(p) < dist(q); });
        if (rest.size() + 1 > src.size()) rest.erase(nearest);
        for (int d = 1; rest.size() + 1 < src.size(); ++d)
            for (int c : {a + 1 + d, a - d})
                if (c >= 0 && c < n - r && rest.size() + 1 < src.size() &&
                    std::find(rest.begin(), rest.end(), c) == rest.end())
                    rest.push_back(c);
        std::vector<int> tgt = rest;
        tgt.push_back(a);
        std::sort(tgt.begin(), tgt.end());
        arrange_row(B, v, n, r, tgt);
    }
    B.step(v + Vec2{a, r + 1}, v + Vec2{a + 1, r});
}

// v + T_n holds its bottom row and some excess; ends at v + P_{n,k}.
inline void gather_excess(Board& B, Vec2 v, int n) {
    for (int r = 1; r < n; ++r) {
        while (true) {
            auto row = row_cells(B, v, n, r);
            if ((int)row.size() == n - r) break;
            std::optional<Vec2> x;
            for (int b = r + 1; b < n && !x; ++b)
                for (int a = 0; a + b < n && !x; ++a)
                    if (B.has(v + Vec2{a, b})) x = Vec2{a, b};
            if (!x) break;
            if (x->y > r + 1) {
                // lift row r-1 into row r, fetch x down onto row r+1, undo the lift
                std::size_t mark = B.trace.size();
                for (int j = 0; j < n - r; ++j) B.lift(v + Vec2{j, r - 1}, v + Vec2{j, r});
                Trace2 lifted(B.trace.begin() + mark, B.trace.end());
                fetch_corner(B, v + Vec2{x->x, r}, x->y - r + 1);
                for (auto it = lifted.rbegin(); it != lifted.rend(); ++it) B.step(it->filled, it->vacated);
                x.reset();
                for (int a = 0; a + r + 1 < n && !x; ++a)
                    if (B.has(v + Vec2{a, r + 1})) x = Vec2{a, r + 1};
            }
            drop_into_row(B, v, n, r, x->x);
        }
        auto row = row_cells(B, v, n, r);
        std::vector<int> left;
        for (int i = 0; i < (int)row.size(); ++i) left.push_back(i);
        arrange_row(B, v, n, r, left);
        if ((int)row.size() < n - r) break;
    }
}

}  // namespace detail

namespace detail {

// Q fills the single triangle v + T_n.
inline Trace2 component_path(const P2& Q, Vec2 v, int n) {
    Board B(triangle_shape());
    B.cells.insert(Q.begin(), Q.end());
    LineSet ls{B, {}};
    for (auto p : Q) ls.lines.push_back({p, 1, Edge::Bottom});
    ls.consolidate();
    if (ls.lines.size() != 1 || ls.lines[0].v != v || ls.lines[0].m != n)
        throw std::logic_error("canonical_path: merging did not produce the component line");
    convert_edge(B, ls.lines[0], Edge::Bottom);
    gather_excess(B, v, n);
    return B.trace;
}

}  // namespace detail

// Move sequence from P to the normal form of its orbit. Moves never cross fill
// components, so each component is solved on its own: points start as lines
// of length 1, touching lines merge into the component's line, then the
// excess is gathered row by row.
inline Trace2 canonical_path(const P2& P) {
    Trace2 out;
    for (auto& c : identify_orbit(P)) {
        std::vector<Vec2> q;
        for (auto p : P)
            if (in_triangle(c.v, c.n, p)) q.push_back(p);
        P2 Q(q);
        if (Q == normal_cells(c.n, c.k, c.v)) continue;
        auto tr = detail::component_path(Q, c.v, c.n);
        if (replay(Z2{}, triangle_shape(), Q, tr) != normal_cells(c.n, c.k, c.v))
            throw std::logic_error("canonical_path: did not reach the normal form");
        out.insert(out.end(), tr.begin(), tr.end());
    }
    return out;
}

}  // namespace solitaire
