#pragma once

// JSON codecs for groups, elements, shapes, patterns, traces and TEP rules.
// Output uses insertion-ordered objects so files are byte-reproducible.

#include <json.hpp>

#include "tep.hpp"

namespace solitaire {

using ojson = nlohmann::ordered_json;

// Malformed input; carries the JSON location.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string join_path(const std::string& at, const std::string& key) { return at + "/" + key; }
inline std::string join_path(const std::string& at, std::size_t i) { return at + "/" + std::to_string(i); }

[[noreturn]] inline void bad(const std::string& at, const std::string& what) {
    throw UsageError("at " + (at.empty() ? std::string("/") : at) + ": " + what);
}

inline const ojson& field(const ojson& j, const std::string& key, const std::string& at) {
    if (!j.is_object()) bad(at, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) bad(at, "missing key \"" + key + "\"");
    return *it;
}

inline int as_int(const ojson& j, const std::string& at) {
    if (!j.is_number_integer()) bad(at, "expected an integer");
    auto v = j.get<long long>();
    if (v < std::numeric_limits<int>::min() / 4 || v > std::numeric_limits<int>::max() / 4)
        bad(at, "integer out of range");
    return int(v);
}

inline Vec2 vec2_from_json(const ojson& j, const std::string& at) {
    if (!j.is_array() || j.size() != 2) bad(at, "expected [x, y]");
    return {as_int(j[0], join_path(at, 0)), as_int(j[1], join_path(at, 1))};
}

inline ojson to_json(Vec2 v) { return ojson::array({v.x, v.y}); }

inline GroupContext group_from_json(const ojson& j, const std::string& at) {
    auto kind = field(j, "kind", at);
    if (!kind.is_string()) bad(join_path(at, "kind"), "expected a string");
    try {
        if (kind == "Zd") return GroupContext::zd(j.contains("d") ? as_int(j["d"], join_path(at, "d")) : 2);
        if (kind == "Free") return GroupContext::free(j.contains("k") ? as_int(j["k"], join_path(at, "k")) : 2);
    } catch (const ContractViolation& e) {
        bad(at, e.what());
    }
    bad(join_path(at, "kind"), "unknown group kind (Zd or Free)");
}

inline ojson to_json(const GroupContext& g) {
    if (g.kind == GroupContext::Kind::Free) return ojson{{"kind", "Free"}, {"k", g.rank}};
    return ojson{{"kind", "Zd"}, {"d", g.rank}};
}

inline GroupElement element_from_json(const GroupContext& ctx, const ojson& j, const std::string& at) {
    GroupElement g;
    if (ctx.kind == GroupContext::Kind::Free) {
        if (!j.is_string()) bad(at, "expected a word such as \"a b' a\"");
        try {
            g = parse_word(j.get<std::string>());
        } catch (const std::invalid_argument& e) {
            bad(at, e.what());
        }
    } else {
        if (!j.is_array()) bad(at, "expected an integer tuple");
        Lattice l;
        for (std::size_t i = 0; i < j.size(); ++i) l.coords.push_back(as_int(j[i], join_path(at, i)));
        g = l;
    }
    try {
        check(ctx, g);
    } catch (const ContractViolation& e) {
        bad(at, e.what());
    }
    return g;
}

inline ojson to_json(const GroupElement& g) {
    if (auto w = std::get_if<Word>(&g)) return word_to_string(*w);
    ojson a = ojson::array();
    for (auto c : std::get<Lattice>(g).coords) a.push_back(c);
    return a;
}

// Element codec bound to a group: Vec2 for Z^2, GroupElement otherwise.
template <class E>
struct Codec;

template <>
struct Codec<Vec2> {
    Vec2 read(const ojson& j, const std::string& at) const { return vec2_from_json(j, at); }
    ojson write(Vec2 v) const { return to_json(v); }
};

template <>
struct Codec<GroupElement> {
    GroupContext ctx;
    GroupElement read(const ojson& j, const std::string& at) const { return element_from_json(ctx, j, at); }
    ojson write(const GroupElement& g) const { return to_json(g); }
};

template <class E>
Pattern<E> pattern_from_json(const Codec<E>& cd, const ojson& j, const std::string& at) {
    if (!j.is_array()) bad(at, "expected a list of cells");
    std::vector<E> c;
    for (std::size_t i = 0; i < j.size(); ++i) c.push_back(cd.read(j[i], join_path(at, i)));
    return Pattern<E>(c);
}

// Z^2 pattern, either a list of cells or a named family:
// {"triangle": n}, {"line": n}, {"rect": [w, h]}, each with an optional "at".
inline P2 pattern2_from_json(const ojson& j, const std::string& at) {
    if (j.is_array()) return pattern_from_json(Codec<Vec2>{}, j, at);
    if (!j.is_object()) bad(at, "expected a list of cells or a named pattern");
    Vec2 v = j.contains("at") ? vec2_from_json(j["at"], join_path(at, "at")) : Vec2{};
    auto size = [&](const char* key) {
        int n = as_int(j[key], join_path(at, key));
        if (n < 0 || n > 4096) bad(join_path(at, key), "size must be in 0..4096");
        return n;
    };
    if (j.contains("triangle")) return triangle_cells(size("triangle"), v);
    if (j.contains("line")) return line_cells(size("line"), v);
    if (j.contains("rect")) {
        auto wh = vec2_from_json(j["rect"], join_path(at, "rect"));
        if (wh.x < 0 || wh.y < 0 || (long long)wh.x * wh.y > 1 << 20) bad(join_path(at, "rect"), "bad rectangle size");
        return rect_cells(wh.x, wh.y, v);
    }
    bad(at, "unknown named pattern (triangle, line or rect)");
}

template <class E>
ojson pattern_to_json(const Codec<E>& cd, const Pattern<E>& p) {
    ojson a = ojson::array();
    for (auto& c : p) a.push_back(cd.write(c));
    return a;
}

inline ojson to_json(const P2& p) { return pattern_to_json(Codec<Vec2>{}, p); }

template <class E>
Shape<E> shape_from_json(const Codec<E>& cd, const ojson& j, const std::string& at) {
    auto S = pattern_from_json(cd, field(j, "S", at), join_path(at, "S"));
    std::vector<E> s(S.begin(), S.end()), c = s;
    if (j.contains("C") && !(j["C"].is_string() && j["C"] == "same")) {
        auto C = pattern_from_json(cd, j["C"], join_path(at, "C"));
        c.assign(C.begin(), C.end());
    }
    try {
        return Shape<E>(s, c);
    } catch (const ContractViolation& e) {
        bad(at, e.what());
    }
}

// Named Z^2 shapes, or an explicit {"S": [...], "C": ...}.
inline Shape2 shape2_from_json(const ojson& j, const std::string& at) {
    if (j.is_string()) {
        if (j == "triangle") return triangle_shape();
        if (j == "square") return square_shape();
        if (j == "plus") return plus_shape();
        bad(at, "unknown shape name (triangle, square or plus)");
    }
    return shape_from_json(Codec<Vec2>{}, j, at);
}

template <class E>
ojson shape_to_json(const Codec<E>& cd, const Shape<E>& sh) {
    ojson o{{"S", pattern_to_json(cd, Pattern<E>(sh.S))}};
    if (sh.C == sh.S)
        o["C"] = "same";
    else
        o["C"] = pattern_to_json(cd, Pattern<E>(sh.C));
    return o;
}

template <class E>
MoveRecord<E> move_from_json(const Codec<E>& cd, const ojson& j, const std::string& at) {
    return {cd.read(field(j, "g", at), join_path(at, "g")), cd.read(field(j, "from", at), join_path(at, "from")),
            cd.read(field(j, "to", at), join_path(at, "to"))};
}

template <class E>
ojson move_to_json(const Codec<E>& cd, const MoveRecord<E>& m) {
    return ojson{{"g", cd.write(m.g)}, {"from", cd.write(m.vacated)}, {"to", cd.write(m.filled)}};
}

// A trace is a list of moves, or an object holding one under "trace".
template <class E>
MoveTrace<E> trace_from_json(const Codec<E>& cd, const ojson& j, const std::string& at) {
    if (j.is_object()) return trace_from_json(cd, field(j, "trace", at), join_path(at, "trace"));
    if (!j.is_array()) bad(at, "expected a list of moves");
    MoveTrace<E> tr;
    for (std::size_t i = 0; i < j.size(); ++i) tr.push_back(move_from_json(cd, j[i], join_path(at, i)));
    return tr;
}

template <class E>
ojson trace_to_json(const Codec<E>& cd, const MoveTrace<E>& tr) {
    ojson a = ojson::array();
    for (auto& m : tr) a.push_back(move_to_json(cd, m));
    return a;
}

inline ojson to_json(const Trace2& tr) { return trace_to_json(Codec<Vec2>{}, tr); }

// {"kind":"abelian_sum","alphabet":q,"target":t}, {"kind":"explicit_table",
// "alphabet":q,"allowed":[[...],...]}, {"kind":"ledrappier"} or {"kind":"s3_triangle"};
// "shape" defaults to the triangle.
inline TepRule rule_from_json(const ojson& j, const std::string& at) {
    auto& kind = field(j, "kind", at);
    if (!kind.is_string()) bad(join_path(at, "kind"), "expected a string");
    for (auto& [k, v] : j.items())
        if (k != "kind" && k != "shape" && k != "alphabet" && k != "target" && k != "allowed")
            bad(join_path(at, k), "unknown key (kind, shape, alphabet, target, allowed)");
    Shape2 sh = j.contains("shape") ? shape2_from_json(j["shape"], join_path(at, "shape")) : triangle_shape();
    auto alphabet = [&] { return as_int(field(j, "alphabet", at), join_path(at, "alphabet")); };
    try {
        if (kind == "ledrappier") return ledrappier(j.contains("alphabet") ? alphabet() : 2);
        if (kind == "s3_triangle") return s3_triangle_rule();
        if (kind == "abelian_sum")
            return TepRule::abelian_sum(sh, alphabet(), j.contains("target") ? as_int(j["target"], join_path(at, "target")) : 0);
        if (kind == "explicit_table") {
            auto& rows = field(j, "allowed", at);
            if (!rows.is_array()) bad(join_path(at, "allowed"), "expected a list of tuples");
            std::vector<Symbols> t;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                auto p = join_path(join_path(at, "allowed"), i);
                if (!rows[i].is_array()) bad(p, "expected a tuple");
                Symbols row;
                for (std::size_t k = 0; k < rows[i].size(); ++k) row.push_back(as_int(rows[i][k], join_path(p, k)));
                t.push_back(row);
            }
            return TepRule::explicit_table(sh, alphabet(), t);
        }
    } catch (const ContractViolation& e) {
        bad(at, e.what());
    }
    bad(join_path(at, "kind"), "unknown rule kind");
}

inline ojson to_json(const BiInvariantOrder& o) {
    ojson a = ojson::array();
    for (auto s : o.stages) a.push_back(to_json(s));
    return ojson{{"stages", a}};
}

inline BiInvariantOrder order_from_json(const ojson& j, const std::string& at) {
    auto& st = field(j, "stages", at);
    if (!st.is_array() || st.empty()) bad(join_path(at, "stages"), "expected a nonempty list of directions");
    BiInvariantOrder o;
    for (std::size_t i = 0; i < st.size(); ++i) o.stages.push_back(vec2_from_json(st[i], join_path(join_path(at, "stages"), i)));
    return o;
}

}  // namespace solitaire
