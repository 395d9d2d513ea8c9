#pragma once

// Bi-invariant orders, corners, contours, S-hulls and the contour exchange
// procedures on Z^2.

#include <cmath>

#include "lattice.hpp"

namespace solitaire {

inline long long dot(Vec2 a, Vec2 b) { return (long long)a.x * b.x + (long long)a.y * b.y; }
inline long long cross(Vec2 a, Vec2 b) { return (long long)a.x * b.y - (long long)a.y * b.x; }

// Lexicographic cascade of dot products. Lex order on coordinates is appended
// as a final tie-break, which keeps the order bi-invariant and total.
struct BiInvariantOrder {
    std::vector<Vec2> stages;

    bool less(Vec2 a, Vec2 b) const {
        for (auto d : stages) {
            auto da = dot(d, a), db = dot(d, b);
            if (da != db) return da < db;
        }
        return a < b;
    }
    Vec2 min_of(const std::vector<Vec2>& xs) const {
        return *std::min_element(xs.begin(), xs.end(), [&](Vec2 a, Vec2 b) { return less(a, b); });
    }
    Vec2 max_of(const std::vector<Vec2>& xs) const {
        return *std::max_element(xs.begin(), xs.end(), [&](Vec2 a, Vec2 b) { return less(a, b); });
    }
};

// Vertices of the convex hull, counter-clockwise, collinear points dropped.
inline std::vector<Vec2> hull_vertices(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() <= 2) return pts;
    std::vector<Vec2> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

inline std::vector<Vec2> corners(const std::vector<Vec2>& S) {
    if (S.empty()) throw ContractViolation("corners of an empty set");
    auto h = hull_vertices(S);
    std::sort(h.begin(), h.end());
    return h;
}

inline bool is_corner(const std::vector<Vec2>& S, Vec2 c) {
    auto cs = corners(S);
    return std::binary_search(cs.begin(), cs.end(), c);
}

// C_{S,c}(P) = {x in P : x - c + S not inside P}
inline P2 contour(const Shape2& shape, const P2& P, Vec2 c) {
    if (!is_corner(shape.S, c)) throw DomainError("contour: " + to_string(c) + " is not a corner of S");
    std::vector<Vec2> out;
    for (auto x : P) {
        for (auto s : shape.S)
            if (!P.contains(x - c + s)) {
                out.push_back(x);
                break;
            }
    }
    return P2::from_sorted(out);
}

// Translates h with h + S inside P.
inline std::vector<Vec2> inner_translates(const Shape2& shape, const P2& P) {
    std::vector<Vec2> out;
    Vec2 s0 = shape.S.front();
    for (auto p : P) {
        Vec2 h = p - s0;
        bool ok = true;
        for (auto s : shape.S)
            if (!P.contains(h + s)) {
                ok = false;
                break;
            }
        if (ok) out.push_back(h);
    }
    return out;
}

inline bool realizes(const BiInvariantOrder& ord, const std::vector<Vec2>& S, Vec2 lo, Vec2 hi) {
    return ord.min_of(S) == lo && ord.max_of(S) == hi;
}

// An order with lo = min S and hi = max S, if one exists.
inline std::optional<BiInvariantOrder> swap_order(const std::vector<Vec2>& S, Vec2 lo, Vec2 hi) {
    auto hv = hull_vertices(S);
    // candidate directions: slight rotations of each outward edge normal,
    // approximated by integer combinations of consecutive normals
    std::vector<Vec2> normals;
    for (std::size_t i = 0; i < hv.size(); ++i) {
        Vec2 e = hv[(i + 1) % hv.size()] - hv[i];
        normals.push_back({e.y, -e.x});
    }
    std::vector<Vec2> cands;
    for (auto n : normals) cands.push_back(n), cands.push_back(-n);
    for (std::size_t i = 0; i < normals.size(); ++i)
        for (std::size_t j = 0; j < normals.size(); ++j) {
            auto a = normals[i], b = normals[j];
            for (int k = 1; k <= 8; k *= 2) {
                cands.push_back({a.x * k + b.x, a.y * k + b.y});
                cands.push_back({-(a.x * k + b.x), -(a.y * k + b.y)});
            }
        }
    Vec2 d = hi - lo;
    cands.push_back(d);
    for (auto v : cands) {
        if (v == Vec2{}) continue;
        for (auto perp : {Vec2{-v.y, v.x}, Vec2{v.y, -v.x}}) {
            BiInvariantOrder o{{v, perp}};
            if (realizes(o, S, lo, hi)) return o;
        }
    }
    return std::nullopt;
}

// Legal trace from contour(P, lo) to contour(P, hi), where the order makes lo
// the minimum and hi the maximum of S. Every move is made at a translate h with
// h + S inside P and exchanges the cells h + lo and h + hi.
inline Trace2 sweep_swap(const Shape2& shape, const P2& P, Vec2 lo, Vec2 hi, const BiInvariantOrder& ord) {
    if (!realizes(ord, shape.S, lo, hi)) throw DomainError("not sweep swappable under this order");
    if (!shape.in_C(lo) || !shape.in_C(hi)) throw DomainError("sweep swap needs both corners in C");
    auto H = inner_translates(shape, P);
    std::sort(H.begin(), H.end(), [&](Vec2 a, Vec2 b) { return ord.less(a, b); });
    // ascending pass goes from the hi-contour to the lo-contour; emit it reversed
    Trace2 up;
    for (auto h : H) up.push_back({h, h + lo, h + hi});
    Trace2 tr;
    for (auto it = up.rbegin(); it != up.rend(); ++it) tr.push_back(reversed(*it));
    P2 cur = contour(shape, P, lo);
    cur = replay(Z2{}, shape, cur, tr);
    if (cur != contour(shape, P, hi)) throw std::logic_error("sweep swap ended off the target contour");
    return tr;
}

// Exchange for corners c, c2 that end parallel edges on the same side: lines
// of inner translates are processed one by one, moving b2 -> c along the line
// and then c2 -> b2 back along it.
inline Trace2 parallel_edge_exchange(const Shape2& shape, const P2& P, Vec2 c, Vec2 c2) {
    auto hv = hull_vertices(shape.S);
    std::size_t n = hv.size();
    if (n < 4) throw DomainError("parallel edge exchange needs a shape with parallel edges");
    if (!shape.in_C(c) || !shape.in_C(c2)) throw DomainError("parallel edge exchange needs both corners in C");
    auto idx = [&](Vec2 v) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < n; ++i)
            if (hv[i] == v) return i;
        return std::nullopt;
    };
    auto ic = idx(c), ic2 = idx(c2);
    if (!ic || !ic2) throw DomainError("parallel edge exchange: arguments must be corners");
    // find edges e at c and e2 at c2 that are parallel, with b2 the other end of e2
    std::optional<Vec2> b2;
    for (int dc : {1, -1})
        for (int dc2 : {1, -1}) {
            Vec2 oc = hv[(*ic + n + dc) % n], oc2 = hv[(*ic2 + n + dc2) % n];
            Vec2 e = oc - c, e2 = oc2 - c2;
            // same direction and c, c2 on the same side
            if (cross(e, e2) == 0 && dot(e, e2) > 0 && oc != c2 && oc2 != c && cross(e, c2 - c) != 0 && !b2)
                b2 = oc2;
        }
    if (!b2) throw DomainError("corners " + to_string(c) + " and " + to_string(c2) + " do not end parallel edges");
    Vec2 u = *b2 - c2;
    Vec2 nrm{u.y, -u.x};
    if (dot(nrm, c2 - c) < 0) nrm = -nrm;  // points from the c edge to the c2 edge
    auto H = inner_translates(shape, P);
    std::map<long long, std::vector<Vec2>> lines;  // keyed by the normal coordinate
    for (auto h : H) lines[dot(nrm, h)].push_back(h);
    Trace2 tr;
    P2 cur = contour(shape, P, c);
    auto emit = [&](Move2 m) {
        if (auto err = move_error(Z2{}, shape, cur, m))
            throw DomainError("parallel edge exchange blocked at g=" + to_string(m.g) + ": " + *err);
        cur.erase(m.vacated);
        cur.insert(m.filled);
        tr.push_back(m);
    };
    for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
        auto line = it->second;
        std::sort(line.begin(), line.end(), [&](Vec2 a, Vec2 b) { return dot(u, a) < dot(u, b); });
        for (auto h = line.rbegin(); h != line.rend(); ++h) emit({*h, *h + *b2, *h + c});
        for (auto h : line) emit({h, h + c2, h + *b2});
    }
    if (cur != contour(shape, P, c2)) throw DomainError("parallel edge exchange ended off the target contour");
    return tr;
}

// Lattice points of the smallest polygon with the edge directions of hull(S)
// containing P.
inline P2 s_hull(const Shape2& shape, const P2& P) {
    if (P.empty()) return P;
    auto hv = hull_vertices(shape.S);
    if (hv.size() < 3) throw DomainError("S-hull is unbounded for a linear shape");
    std::vector<std::pair<Vec2, long long>> planes;  // n.x <= b
    for (std::size_t i = 0; i < hv.size(); ++i) {
        Vec2 e = hv[(i + 1) % hv.size()] - hv[i];
        Vec2 nrm{e.y, -e.x};  // outward for a counter-clockwise hull
        long long b = std::numeric_limits<long long>::min();
        for (auto p : P) b = std::max(b, dot(nrm, p));
        planes.push_back({nrm, b});
    }
    // bounding box from pairwise line intersections of consecutive planes
    double x0 = 1e18, x1 = -1e18, y0 = 1e18, y1 = -1e18;
    for (std::size_t i = 0; i < planes.size(); ++i) {
        auto [a, ba] = planes[i];
        auto [b, bb] = planes[(i + 1) % planes.size()];
        double det = double(a.x) * b.y - double(a.y) * b.x;
        double x = (double(ba) * b.y - double(a.y) * bb) / det;
        double y = (double(a.x) * bb - double(ba) * b.x) / det;
        x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
    std::vector<Vec2> out;
    for (int x = int(std::floor(x0)) - 1; x <= int(std::ceil(x1)) + 1; ++x)
        for (int y = int(std::floor(y0)) - 1; y <= int(std::ceil(y1)) + 1; ++y) {
            bool in = true;
            for (auto& [nrm, b] : planes)
                if (dot(nrm, {x, y}) > b) {
                    in = false;
                    break;
                }
            if (in) out.push_back({x, y});
        }
    return P2(out);
}

}  // namespace solitaire
