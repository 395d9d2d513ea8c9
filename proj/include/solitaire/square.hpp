#pragma once

// Square shape S = {0,1}^2 on Z^2: rectangle decomposition of the filling
// closure, orbit identification by normal forms L_{a,b,k}, and a constructive
// move sequence to the normal form.

#include <deque>

#include "board.hpp"
#include "contour.hpp"

namespace solitaire {

struct Rectangle {
    Vec2 v;
    int w = 1, h = 1;
    auto operator<=>(const Rectangle&) const = default;
    bool contains(Vec2 p) const {
        Vec2 d = p - v;
        return d.x >= 0 && d.x < w && d.y >= 0 && d.y < h;
    }
};

// Component of a square orbit: rectangle v + [0,a) x [0,b) with k excess points.
struct SquareComponent {
    Vec2 v;
    int a = 1, b = 1, k = 0;
    auto operator<=>(const SquareComponent&) const = default;
};

// Rectangles of fill(P), sorted. A filled set is closed exactly when its
// 4-connected components are rectangles that do not touch.
inline std::vector<Rectangle> rect_decomposition(const P2& P) {
    P2 F = fill(Z2{}, square_shape(), P);
    std::set<Vec2> left(F.begin(), F.end());
    std::vector<Rectangle> out;
    while (!left.empty()) {
        Vec2 s = *left.begin();
        std::vector<Vec2> comp;
        std::deque<Vec2> q{s};
        left.erase(s);
        while (!q.empty()) {
            Vec2 c = q.front();
            q.pop_front();
            comp.push_back(c);
            for (Vec2 d : {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}})
                if (left.erase(c + d)) q.push_back(c + d);
        }
        Vec2 lo = comp[0], hi = comp[0];
        for (auto c : comp) {
            lo = {std::min(lo.x, c.x), std::min(lo.y, c.y)};
            hi = {std::max(hi.x, c.x), std::max(hi.y, c.y)};
        }
        Rectangle r{lo, hi.x - lo.x + 1, hi.y - lo.y + 1};
        if ((long long)r.w * r.h != (long long)comp.size())
            throw std::logic_error("rect_decomposition: component is not a rectangle");
        out.push_back(r);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// L_{a,b,k}: bottom row, left column, then k interior cells filled row by row
// from the bottom, each row left to right.
inline P2 square_normal_cells(int a, int b, int k, Vec2 v = {}) {
    if (a < 1 || b < 1 || k < 0 || (long long)k > (long long)(a - 1) * (b - 1))
        throw ContractViolation("L_{a,b,k} needs a,b >= 1 and 0 <= k <= (a-1)(b-1)");
    std::vector<Vec2> c;
    for (int x = 0; x < a; ++x) c.push_back(v + Vec2{x, 0});
    for (int y = 1; y < b; ++y) c.push_back(v + Vec2{0, y});
    for (int i = 0; i < k; ++i) c.push_back(v + Vec2{1 + i % (a - 1), 1 + i / (a - 1)});
    return P2(c);
}

inline std::vector<SquareComponent> square_identify_orbit(const P2& P) {
    std::vector<SquareComponent> out;
    for (auto& r : rect_decomposition(P)) {
        int in = 0;
        for (auto p : P) in += r.contains(p);
        out.push_back({r.v, r.w, r.h, in - (r.w + r.h - 1)});
    }
    return out;
}

inline P2 square_normal_form(const std::vector<SquareComponent>& comps) {
    P2 out;
    for (auto& c : comps) out = out.unite(square_normal_cells(c.a, c.b, c.k, c.v));
    return out;
}

// P lies in the orbit of a cross (one rectangle, no excess).
inline bool cross_orbit_member(const P2& P) {
    auto comps = square_identify_orbit(P);
    return comps.size() == 1 && comps[0].k == 0;
}

namespace detail {

enum class Corner { BL, BR, TL, TR };

// Corner of S whose contour is the cross at the given rectangle corner.
inline Vec2 contour_corner(Corner c) {
    switch (c) {
        case Corner::BL: return {1, 1};
        case Corner::BR: return {0, 1};
        case Corner::TL: return {1, 0};
        case Corner::TR: return {0, 0};
    }
    return {};
}

// Full row and full column of a rectangle meeting at one of its corners.
struct Cross {
    Rectangle r;
    Corner c = Corner::BL;

    int row_y() const { return c == Corner::BL || c == Corner::BR ? 0 : r.h - 1; }
    int col_x() const { return c == Corner::BL || c == Corner::TL ? 0 : r.w - 1; }
    bool contains(Vec2 p) const { return r.contains(p); }
    std::vector<Vec2> cells() const {
        std::vector<Vec2> out;
        for (int x = 0; x < r.w; ++x) out.push_back(r.v + Vec2{x, row_y()});
        for (int y = 0; y < r.h; ++y)
            if (y != row_y()) out.push_back(r.v + Vec2{col_x(), y});
        return out;
    }
};

enum class RectSide { Below, Above, Left, Right };

// RectSide of the rectangle that p lies next to, with p's offset along it.
inline std::optional<std::pair<RectSide, int>> side_touch(const Rectangle& r, Vec2 p) {
    Vec2 d = p - r.v;
    if (d.x >= 0 && d.x < r.w) {
        if (d.y == -1) return std::pair{RectSide::Below, d.x};
        if (d.y == r.h) return std::pair{RectSide::Above, d.x};
    }
    if (d.y >= 0 && d.y < r.h) {
        if (d.x == -1) return std::pair{RectSide::Left, d.y};
        if (d.x == r.w) return std::pair{RectSide::Right, d.y};
    }
    return std::nullopt;
}

inline Rectangle grown(const Rectangle& r, RectSide s) {
    switch (s) {
        case RectSide::Below: return {r.v + Vec2{0, -1}, r.w, r.h + 1};
        case RectSide::Above: return {r.v, r.w, r.h + 1};
        case RectSide::Left: return {r.v + Vec2{-1, 0}, r.w + 1, r.h};
        case RectSide::Right: return {r.v, r.w + 1, r.h};
    }
    return r;
}

inline bool rects_touch(const Rectangle& a, const Rectangle& b) {
    auto overlap = [](int a0, int a1, int b0, int b1) { return a0 <= b1 && b0 <= a1; };
    int ax1 = a.v.x + a.w - 1, ay1 = a.v.y + a.h - 1, bx1 = b.v.x + b.w - 1, by1 = b.v.y + b.h - 1;
    bool ox = overlap(a.v.x, ax1, b.v.x, bx1), oy = overlap(a.v.y, ay1, b.v.y, by1);
    return (oy && overlap(a.v.x - 1, ax1 + 1, b.v.x, bx1)) || (ox && overlap(a.v.y - 1, ay1 + 1, b.v.y, by1));
}

inline void convert_cross(Board& B, Cross& X, Corner to) {
    if (X.c == to) return;
    if (X.r.w > 1 && X.r.h > 1) {
        auto sh = square_shape();
        P2 R = rect_cells(X.r.w, X.r.h, X.r.v);
        Vec2 lo = contour_corner(X.c), hi = contour_corner(to);
        if (auto ord = swap_order(sh.S, lo, hi))
            B.lift(sweep_swap(sh, R, lo, hi, *ord));
        else
            B.lift(parallel_edge_exchange(sh, R, lo, hi));
    }
    X.c = to;
}

// Absorbs a point next to the cross's rectangle. Worked in a frame where the
// point sits below a bottom-left cross at (i, -1): slide it to the column along
// the bottom row, then shift the row down one step using the column as anchor.
inline void extend_cross(Board& B, Cross& X, Vec2 p) {
    auto t = side_touch(X.r, p);
    if (!t) throw std::logic_error("extend_cross: point does not touch the rectangle");
    auto [side, i] = *t;
    const Rectangle r = X.r;
    Corner need = side == RectSide::Above ? Corner::TL : side == RectSide::Right ? Corner::BR : Corner::BL;
    bool sideways = side == RectSide::Left || side == RectSide::Right;
    int W = sideways ? r.h : r.w;
    auto f = [&](Vec2 q) -> Vec2 {
        switch (side) {
            case RectSide::Below: return r.v + q;
            case RectSide::Above: return r.v + Vec2{q.x, r.h - 1 - q.y};
            case RectSide::Left: return r.v + Vec2{q.y, q.x};
            case RectSide::Right: return r.v + Vec2{r.w - 1 - q.y, q.x};
        }
        return q;
    };
    convert_cross(B, X, need);
    auto mv = [&](Vec2 a, Vec2 b) { B.lift(f(a), f(b)); };
    for (int j = i; j >= 1; --j) mv({j, -1}, {j - 1, -1});
    for (int j = 0; j + 1 < W; ++j) mv({j, 0}, {j + 1, -1});
    for (int j = W - 1; j >= 1; --j) mv({j, 0}, {j - 1, 0});
    X.r = grown(r, side);
}

// Runs of the cross outside the region, as one-line crosses.
inline std::vector<Cross> pieces_outside(const Cross& X, const Rectangle& region) {
    std::vector<Cross> out;
    auto runs = [&](int len, auto cell, bool horizontal, int skip) {
        int start = -1;
        auto close = [&](int end) {
            if (start < 0) return;
            Vec2 a = cell(start);
            out.push_back({horizontal ? Rectangle{a, end - start, 1} : Rectangle{a, 1, end - start}, Corner::BL});
            start = -1;
        };
        for (int k = 0; k < len; ++k) {
            if (k == skip || region.contains(cell(k)))
                close(k);
            else if (start < 0)
                start = k;
        }
        close(len);
    };
    runs(X.r.w, [&](int k) { return X.r.v + Vec2{k, X.row_y()}; }, true, -1);
    runs(X.r.h, [&](int k) { return X.r.v + Vec2{X.col_x(), k}; }, false, X.row_y());
    return out;
}

struct CrossSet {
    Board& B;
    std::vector<Cross> crosses;

    void split_by(const Rectangle& region, std::size_t& ai, std::size_t& bi) {
        std::vector<Cross> next;
        std::size_t na = ai, nb = bi;
        for (std::size_t i = 0; i < crosses.size(); ++i) {
            if (i == ai) na = next.size();
            if (i == bi) nb = next.size();
            bool cut = false;
            if (i != ai && i != bi)
                for (auto c : crosses[i].cells()) cut |= region.contains(c);
            if (!cut)
                next.push_back(crosses[i]);
            else
                for (auto& p : pieces_outside(crosses[i], region)) next.push_back(p);
        }
        crosses = std::move(next);
        ai = na, bi = nb;
    }

    void cover_strays() {
        std::vector<Vec2> stray;
        for (auto c : B.cells)
            if (std::none_of(crosses.begin(), crosses.end(), [&](const Cross& x) { return x.contains(c); }))
                stray.push_back(c);
        std::sort(stray.begin(), stray.end());
        for (auto c : stray) crosses.push_back({{c, 1, 1}, Corner::BL});
    }

    struct Plan {
        bool swap_roles;
        Corner c;
        std::vector<Vec2> order;
    };

    std::optional<Plan> plan(const Cross& A, const Cross& Bx, bool swap_roles) const {
        std::vector<Corner> types{Bx.c};
        for (auto c : {Corner::BL, Corner::BR, Corner::TL, Corner::TR})
            if (c != Bx.c) types.push_back(c);
        for (auto c : types) {
            Cross b = Bx;
            b.c = c;
            if (c != Bx.c) {
                auto ac = A.cells();
                if (std::any_of(ac.begin(), ac.end(), [&](Vec2 p) { return b.contains(p); })) continue;
            }
            Rectangle t = A.r;
            auto rem = b.cells();
            std::vector<Vec2> order;
            bool ok = true;
            while (true) {
                std::erase_if(rem, [&](Vec2 p) { return t.contains(p); });
                if (rem.empty()) break;
                auto it = std::find_if(rem.begin(), rem.end(), [&](Vec2 p) { return side_touch(t, p).has_value(); });
                if (it == rem.end()) {
                    ok = false;
                    break;
                }
                order.push_back(*it);
                t = grown(t, side_touch(t, *it)->first);
            }
            if (ok) return Plan{swap_roles, c, order};
        }
        return std::nullopt;
    }

    void merge(std::size_t i, std::size_t j) {
        auto p = plan(crosses[i], crosses[j], false);
        if (!p) p = plan(crosses[j], crosses[i], true);
        if (!p) throw std::logic_error("square path: no merge plan");
        std::size_t ai = p->swap_roles ? j : i, bi = p->swap_roles ? i : j;
        if (p->c != crosses[bi].c) {
            convert_cross(B, crosses[bi], p->c);
            Rectangle region = crosses[bi].r;
            split_by(region, ai, bi);
        }
        for (auto c : p->order) {
            extend_cross(B, crosses[ai], c);
            Rectangle region = crosses[ai].r;
            split_by(region, ai, bi);
        }
        crosses.erase(crosses.begin() + bi);
        cover_strays();
    }

    void consolidate() {
        for (int guard = 0;; ++guard) {
            if (guard > 100000) throw std::logic_error("square path: merging does not terminate");
            std::sort(crosses.begin(), crosses.end(), [](const Cross& a, const Cross& b) { return a.r < b.r; });
            std::optional<std::pair<std::size_t, std::size_t>> pair;
            for (std::size_t i = 0; i < crosses.size() && !pair; ++i)
                for (std::size_t j = i + 1; j < crosses.size() && !pair; ++j)
                    if (rects_touch(crosses[i].r, crosses[j].r)) pair = {i, j};
            if (!pair) return;
            merge(pair->first, pair->second);
        }
    }
};

// Interior cells of row y of v + [0,w) x [0,h), by x offset.
inline std::vector<int> interior_row(const Board& B, Vec2 v, int w, int y) {
    std::vector<int> out;
    for (int x = 1; x < w; ++x)
        if (B.has(v + Vec2{x, y})) out.push_back(x);
    return out;
}

// Shifts the full row y up to row y + 1 around the full left column.
inline void shift_row_up(Board& B, Vec2 v, int w, int y) {
    for (int x = 0; x + 1 < w; ++x) B.lift(v + Vec2{x, y}, v + Vec2{x + 1, y + 1});
    for (int x = w - 1; x >= 1; --x) B.lift(v + Vec2{x, y}, v + Vec2{x - 1, y});
}

// Rectangle v + [0,w) x [0,h) holding its bottom-left cross plus excess; ends
// with the excess packed row by row. Rows below the current one act as rails.
inline void gather_square_excess(Board& B, Vec2 v, int w, int h) {
    for (int r = 1; r < h; ++r) {
        for (int x : interior_row(B, v, w, r))
            for (int z = x; z > 1 && !B.has(v + Vec2{z - 1, r}); --z) B.step(v + Vec2{z, r}, v + Vec2{z - 1, r});
        while ((int)interior_row(B, v, w, r).size() < w - 1) {
            std::optional<Vec2> x;
            for (int b = r + 1; b < h && !x; ++b)
                for (int a = 1; a < w && !x; ++a)
                    if (B.has(v + Vec2{a, b})) x = Vec2{a, b};
            if (!x) return;
            if (x->x > 1) {
                std::size_t mark = B.trace.size();
                for (int y = r - 1; y + 1 < x->y; ++y) shift_row_up(B, v, w, y);
                Trace2 shifts(B.trace.begin() + mark, B.trace.end());
                for (int a = x->x; a > 1; --a) B.step(v + Vec2{a, x->y}, v + Vec2{a - 1, x->y});
                for (auto it = shifts.rbegin(); it != shifts.rend(); ++it) B.step(it->filled, it->vacated);
            }
            for (int y = x->y; y > r + 1; --y) B.step(v + Vec2{1, y}, v + Vec2{1, y - 1});
            auto row = interior_row(B, v, w, r);
            for (auto it = row.rbegin(); it != row.rend(); ++it) B.step(v + Vec2{*it, r}, v + Vec2{*it + 1, r});
            B.step(v + Vec2{1, r + 1}, v + Vec2{1, r});
        }
    }
}

inline Trace2 square_component_path(const P2& Q, const SquareComponent& c) {
    Board B(square_shape());
    B.cells.insert(Q.begin(), Q.end());
    CrossSet cs{B, {}};
    for (auto p : Q) cs.crosses.push_back({{p, 1, 1}, Corner::BL});
    cs.consolidate();
    if (cs.crosses.size() != 1 || cs.crosses[0].r != Rectangle{c.v, c.a, c.b})
        throw std::logic_error("square path: merging did not produce the component rectangle");
    convert_cross(B, cs.crosses[0], Corner::BL);
    gather_square_excess(B, c.v, c.a, c.b);
    return B.trace;
}

}  // namespace detail

// Move sequence from P to the normal form of its orbit, one fill component at
// a time: points merge into crosses of growing rectangles, then the excess is
// packed along the rows.
inline Trace2 square_canonical_path(const P2& P) {
    Trace2 out;
    for (auto& c : square_identify_orbit(P)) {
        Rectangle R{c.v, c.a, c.b};
        std::vector<Vec2> q;
        for (auto p : P)
            if (R.contains(p)) q.push_back(p);
        P2 Q(q);
        P2 target = square_normal_cells(c.a, c.b, c.k, c.v);
        if (Q == target) continue;
        auto tr = detail::square_component_path(Q, c);
        if (replay(Z2{}, square_shape(), Q, tr) != target)
            throw std::logic_error("square_canonical_path: trace does not reach the normal form");
        out.insert(out.end(), tr.begin(), tr.end());
    }
    return out;
}

}  // namespace solitaire
