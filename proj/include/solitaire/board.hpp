#pragma once

// Mutable Z^2 pattern that records every move made on it.

#include <unordered_set>

#include "lattice.hpp"

namespace solitaire {

namespace detail {

struct Board {
    Shape2 shape;
    std::unordered_set<Vec2, Vec2Hash> cells;
    Trace2 trace;

    explicit Board(Shape2 sh) : shape(std::move(sh)) {}

    bool has(Vec2 v) const { return cells.count(v) > 0; }

    // legal translate for the move, if any
    std::optional<Vec2> translate_for(Vec2 from, Vec2 to) const {
        if (!has(from) || has(to)) return std::nullopt;
        for (auto s1 : shape.S) {
            Vec2 g = from - s1;
            if (!shape.in_C(from - g) || !shape.in_C(to - g)) continue;
            bool to_in = false;
            int present = 0;
            for (auto s : shape.S) {
                to_in |= g + s == to;
                present += has(g + s);
            }
            if (to_in && present == (int)shape.S.size() - 1) return g;
        }
        return std::nullopt;
    }

    void step(Vec2 from, Vec2 to) {
        auto g = translate_for(from, to);
        if (!g) throw std::logic_error("illegal move " + to_string(from) + " -> " + to_string(to));
        cells.erase(from);
        cells.insert(to);
        trace.push_back({*g, from, to});
    }
    // Replays a move of a trace that is legal on a subset of the board; a move
    // onto an occupied cell is skipped.
    void lift(Vec2 from, Vec2 to) {
        if (!has(to)) step(from, to);
    }
    void lift(const Trace2& tr) {
        for (auto& m : tr) lift(m.vacated, m.filled);
    }
    // undo the moves recorded since mark
    void rewind(std::size_t mark) {
        Trace2 tail(trace.begin() + mark, trace.end());
        for (auto it = tail.rbegin(); it != tail.rend(); ++it) step(it->filled, it->vacated);
    }
    P2 pattern() const { return P2(std::vector<Vec2>(cells.begin(), cells.end())); }
};

}  // namespace detail

}  // namespace solitaire
