#pragma once

// Group policies consumed by the templated algorithms. A policy supplies
// element, mul, inv, id, and the linearity/termination facts that the
// filling process needs.

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "groups.hpp"

namespace solitaire {

struct Vec2 {
    int x = 0, y = 0;
    constexpr Vec2() = default;
    constexpr Vec2(int x_, int y_) : x(x_), y(y_) {}
    constexpr auto operator<=>(const Vec2&) const = default;
    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
};

inline std::size_t hash_mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

struct Vec2Hash {
    std::size_t operator()(Vec2 v) const {
        return hash_mix(std::hash<int>()(v.x), std::hash<int>()(v.y));
    }
};

struct ElementHash {
    std::size_t operator()(const GroupElement& g) const {
        std::size_t h = g.index();
        if (auto* l = std::get_if<Lattice>(&g))
            for (auto c : l->coords) h = hash_mix(h, std::hash<long long>()(c));
        else
            for (auto c : std::get<Word>(g).letters) h = hash_mix(h, std::hash<int>()(c));
        return h;
    }
};

inline std::string to_string(Vec2 v) {
    return "(" + std::to_string(v.x) + "," + std::to_string(v.y) + ")";
}

inline std::string to_string(const GroupElement& g) {
    if (auto* l = std::get_if<Lattice>(&g)) {
        std::string s = "(";
        for (size_t i = 0; i < l->coords.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(l->coords[i]);
        }
        return s + ")";
    }
    return word_to_string(std::get<Word>(g));
}

// Fast Z^2.
struct Z2 {
    using element = Vec2;
    using hasher = Vec2Hash;
    Vec2 mul(Vec2 a, Vec2 b) const { return a + b; }
    Vec2 inv(Vec2 a) const { return -a; }
    Vec2 id() const { return {}; }
    bool finite_filling() const { return true; }

    std::optional<std::string> linear_witness(const std::vector<Vec2>& S) const {
        auto ctx = GroupContext::zd(2);
        std::vector<GroupElement> v;
        for (auto s : S) v.push_back(Lattice{{s.x, s.y}});
        auto w = cyclic_coset_membership(ctx, v);
        if (!w) return std::nullopt;
        return "S is contained in " + solitaire::to_string(w->a) + " + Z" + solitaire::to_string(w->b);
    }
};

// Runtime-selected Z^d or F_k.
struct DynGroup {
    using element = GroupElement;
    using hasher = ElementHash;
    GroupContext ctx;

    GroupElement mul(const GroupElement& a, const GroupElement& b) const { return multiply(ctx, a, b); }
    GroupElement inv(const GroupElement& a) const { return inverse(ctx, a); }
    GroupElement id() const { return identity(ctx); }
    bool finite_filling() const { return ctx.kind == GroupContext::Kind::FreeAbelian; }

    std::optional<std::string> linear_witness(const std::vector<GroupElement>& S) const {
        auto w = cyclic_coset_membership(ctx, S);
        if (!w) return std::nullopt;
        return "S is contained in " + solitaire::to_string(w->a) + " <" + solitaire::to_string(w->b) + "> " +
               solitaire::to_string(w->c);
    }
};

inline GroupElement to_element(Vec2 v) { return Lattice{{v.x, v.y}}; }

inline Vec2 to_vec2(const GroupElement& g) {
    auto* l = std::get_if<Lattice>(&g);
    if (!l || l->coords.size() != 2) throw ContractViolation("expected a Z^2 element");
    return {int(l->coords[0]), int(l->coords[1])};
}

}  // namespace solitaire
