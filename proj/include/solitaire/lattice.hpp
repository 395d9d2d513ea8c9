#pragma once

// Named shapes and patterns on Z^2.

#include "core.hpp"

namespace solitaire {

using P2 = Pattern<Vec2>;
using Shape2 = Shape<Vec2>;
using Move2 = MoveRecord<Vec2>;
using Trace2 = MoveTrace<Vec2>;

inline Shape2 triangle_shape() { return Shape2::full({{0, 0}, {1, 0}, {0, 1}}); }
inline Shape2 square_shape() { return Shape2::full({{0, 0}, {1, 0}, {0, 1}, {1, 1}}); }

// plus shape; the centre is a pivot only
inline Shape2 plus_shape() {
    return Shape2({{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}}, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
}

// T_n = {(a,b) : a,b >= 0, a+b <= n-1}
inline P2 triangle_cells(int n, Vec2 v = {}) {
    std::vector<Vec2> c;
    for (int b = 0; b < n; ++b)
        for (int a = 0; a + b < n; ++a) c.push_back(v + Vec2{a, b});
    return P2(c);
}

inline P2 line_cells(int n, Vec2 v = {}) {
    std::vector<Vec2> c;
    for (int a = 0; a < n; ++a) c.push_back(v + Vec2{a, 0});
    return P2(c);
}

inline P2 rect_cells(int w, int h, Vec2 v = {}) {
    std::vector<Vec2> c;
    for (int x = 0; x < w; ++x)
        for (int y = 0; y < h; ++y) c.push_back(v + Vec2{x, y});
    return P2(c);
}

inline P2 translated(const P2& p, Vec2 v) {
    std::vector<Vec2> c;
    for (auto x : p) c.push_back(x + v);
    return P2(c);
}

}  // namespace solitaire
