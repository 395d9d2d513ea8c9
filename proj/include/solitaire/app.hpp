#pragma once

// Command-line front end. run() is the whole program and takes its streams as
// arguments so tests can drive it in-process.
// Exit codes: 0 success, 1 domain error (illegal move, budget, truncation),
// 2 usage error (bad arguments or malformed input).

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "io.hpp"
#include "orbit.hpp"
#include "square.hpp"
#include "triangle.hpp"

namespace solitaire::app {

struct Io {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
};

inline ojson read_json_file(const std::string& path, std::istream& in) {
    std::string text;
    if (path == "-") {
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    } else {
        std::ifstream f(path);
        if (!f) throw UsageError("cannot open " + path);
        std::ostringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    }
    try {
        return ojson::parse(text);
    } catch (const ojson::parse_error& e) {
        throw UsageError(path + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

// A bare list is shorthand for {"pattern": list}.
inline ojson as_doc(ojson j) {
    if (j.is_array()) return ojson{{"pattern", j}};
    if (!j.is_object()) throw UsageError("input must be a JSON object or a list of cells");
    return j;
}

inline const ojson& start_pattern_json(const ojson& doc) {
    if (doc.contains("start")) return doc["start"];
    return field(doc, "pattern", "");
}

// Calls f(group, codec, shape, pattern) with Z^2 specialised.
template <class F>
void with_group(const ojson& doc, F&& f) {
    GroupContext ctx = doc.contains("group") ? group_from_json(doc["group"], "/group") : GroupContext::zd(2);
    if (ctx.kind == GroupContext::Kind::FreeAbelian && ctx.rank == 2) {
        Shape2 sh = doc.contains("shape") ? shape2_from_json(doc["shape"], "/shape") : triangle_shape();
        f(Z2{}, Codec<Vec2>{}, sh, pattern2_from_json(start_pattern_json(doc), "/pattern"));
        return;
    }
    Codec<GroupElement> cd{ctx};
    Shape<GroupElement> sh;
    if (doc.contains("shape"))
        sh = shape_from_json(cd, doc["shape"], "/shape");
    else if (ctx.kind == GroupContext::Kind::Free)
        sh = Shape<GroupElement>::full({GroupElement{Word{}}, GroupElement{Word{{1}}}, GroupElement{Word{{2}}}});
    else
        throw UsageError("at /shape: required for this group");
    f(DynGroup{ctx}, cd, sh, pattern_from_json(cd, start_pattern_json(doc), "/pattern"));
}

inline void emit(const Io& io, const ojson& j, bool pretty, const std::string& out_path) {
    std::string s = pretty ? j.dump(2) : j.dump();
    if (out_path.empty() || out_path == "-") {
        io.out << s << "\n";
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw UsageError("cannot write " + out_path);
    f << s << "\n";
}

inline P2 z2_pattern(const ojson& doc) { return pattern2_from_json(start_pattern_json(doc), "/pattern"); }

inline ojson triangle_components(const P2& P) {
    ojson a = ojson::array();
    for (auto& c : identify_orbit(P)) a.push_back(ojson{{"v", to_json(c.v)}, {"n", c.n}, {"k", c.k}});
    return ojson{{"components", a}};
}

inline ojson square_components(const P2& P) {
    ojson a = ojson::array();
    for (auto& c : square_identify_orbit(P))
        a.push_back(ojson{{"v", to_json(c.v)}, {"a", c.a}, {"b", c.b}, {"k", c.k}});
    return ojson{{"components", a}};
}

inline ojson path_result(const P2& P, const Trace2& tr, const P2& normal) {
    return ojson{{"pattern", to_json(P)}, {"trace", to_json(tr)}, {"length", tr.size()}, {"normal_form", to_json(normal)}};
}

template <class G>
ojson fill_result(const G& grp, const Codec<typename G::element>& cd, const Shape<typename G::element>& sh,
                  const Pattern<typename G::element>& P, std::uint64_t seed) {
    FillOptions o;
    o.shuffle_seed = seed;
    auto r = filling_closure(grp, sh, P, o);
    ojson steps = ojson::array();
    for (auto& st : r.trace.steps) {
        ojson added = ojson::array();
        for (auto& a : st.added) added.push_back(cd.write(a));
        steps.push_back(ojson{{"g", cd.write(st.g)}, {"added", added}});
    }
    return ojson{{"closure", pattern_to_json(cd, r.closure)}, {"steps", steps}};
}

template <class G>
ojson moves_result(const G& grp, const Codec<typename G::element>& cd, const Shape<typename G::element>& sh,
                   const Pattern<typename G::element>& P) {
    ojson a = ojson::array();
    for (auto& m : legal_moves(grp, sh, P)) a.push_back(move_to_json(cd, m));
    return ojson{{"moves", a}};
}

// Replays move by move; {"legal": false, ...} names the first bad step.
template <class G>
std::pair<ojson, bool> replay_result(const G& grp, const Codec<typename G::element>& cd,
                                     const Shape<typename G::element>& sh, Pattern<typename G::element> P,
                                     const MoveTrace<typename G::element>& tr) {
    for (std::size_t i = 0; i < tr.size(); ++i) {
        if (auto e = move_error(grp, sh, P, tr[i]))
            return {ojson{{"legal", false}, {"step", i}, {"error", *e}, {"pattern", pattern_to_json(cd, P)}}, false};
        P = apply_move(grp, sh, P, tr[i]);
    }
    return {ojson{{"legal", true}, {"steps", tr.size()}, {"pattern", pattern_to_json(cd, P)}}, true};
}

inline ojson count_json(const boost::multiprecision::cpp_int& c) {
    if (c <= std::numeric_limits<std::uint64_t>::max()) return c.convert_to<std::uint64_t>();
    return c.str();
}

// One request of the newline-delimited serve protocol.
inline ojson serve_one(const ojson& req) {
    auto& op = field(req, "op", "");
    if (!op.is_string()) bad("/op", "expected a string");
    std::string o = op.get<std::string>();
    ojson res{{"ok", true}};
    if (req.contains("id")) res["id"] = req["id"];
    if (o == "legal_moves" || o == "apply" || o == "fill") {
        with_group(req, [&](const auto& grp, const auto& cd, const auto& sh, const auto& P) {
            if (o == "legal_moves") res.update(moves_result(grp, cd, sh, P));
            if (o == "fill") res.update(fill_result(grp, cd, sh, P, 0));
            if (o == "apply") {
                auto tr = req.contains("move") ? decltype(trace_from_json(cd, req["trace"], "")){move_from_json(cd, req["move"], "/move")}
                                               : trace_from_json(cd, field(req, "trace", ""), "/trace");
                auto [r, legal] = replay_result(grp, cd, sh, P, tr);
                if (!legal) throw IllegalMove("step " + r["step"].dump() + ": " + r["error"].template get<std::string>());
                res["pattern"] = r["pattern"];
            }
        });
        return res;
    }
    if (o == "identify" || o == "path") {
        Shape2 sh = req.contains("shape") ? shape2_from_json(req["shape"], "/shape") : triangle_shape();
        P2 P = z2_pattern(req);
        bool tri = sh == triangle_shape(), sq = sh == square_shape();
        if (!tri && !sq) throw DomainError(o + " is available for the triangle and square shapes only");
        if (o == "identify") {
            res.update(tri ? triangle_components(P) : square_components(P));
        } else {
            auto tr = tri ? canonical_path(P) : square_canonical_path(P);
            auto nf = tri ? normal_form(identify_orbit(P)) : square_normal_form(square_identify_orbit(P));
            res.update(path_result(P, tr, nf));
        }
        return res;
    }
    bad("/op", "unknown op \"" + o + "\" (legal_moves, apply, fill, identify, path)");
}

inline int serve(const Io& io) {
    std::string line;
    while (std::getline(io.in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ojson res;
        try {
            ojson req;
            try {
                req = ojson::parse(line);
            } catch (const ojson::parse_error& e) {
                throw UsageError(std::string("malformed JSON: ") + e.what());
            }
            res = serve_one(req);
        } catch (const UsageError& e) {
            res = ojson{{"ok", false}, {"kind", "usage"}, {"error", e.what()}};
        } catch (const ContractViolation& e) {
            res = ojson{{"ok", false}, {"kind", "usage"}, {"error", e.what()}};
        } catch (const std::exception& e) {
            res = ojson{{"ok", false}, {"kind", "domain"}, {"error", e.what()}};
        }
        io.out << res.dump() << "\n" << std::flush;
    }
    return 0;
}

inline int run(std::vector<std::string> args, const Io& io) {
    CLI::App app{"Solitaire and filling processes on groups", "solitaire"};
    app.require_subcommand(1);
    std::string input = "-", output, trace_path, dot_path;
    bool pretty = false;
    std::uint64_t seed = 0;
    std::size_t max_vertices = 1'000'000, budget = default_tep_budget;
    long long radius = -1;
    int count_n = 0;
    bool graph = false;

    auto common = [&](CLI::App* c) {
        c->add_option("-i,--input", input, "input JSON file, - for stdin");
        c->add_option("-o,--output", output, "output file (default stdout)");
        c->add_flag("--pretty", pretty, "indent the JSON output");
    };
    int code = 0;
    ojson result;
    std::function<void()> action;
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, std::function<void()> fn) {
        auto* c = parent->add_subcommand(name, help);
        common(c);
        c->callback([&, fn] { action = fn; });
        return c;
    };
    auto doc = [&] { return as_doc(read_json_file(input, io.in)); };

    auto* fillc = leaf(&app, "fill", "filling closure with its step trace", [&] {
        with_group(doc(), [&](const auto& g, const auto& cd, const auto& sh, const auto& P) { result = fill_result(g, cd, sh, P, seed); });
    });
    fillc->add_option("--seed", seed, "shuffle the fill order (0 = lexicographic)");
    leaf(&app, "moves", "legal moves of a pattern", [&] {
        with_group(doc(), [&](const auto& g, const auto& cd, const auto& sh, const auto& P) { result = moves_result(g, cd, sh, P); });
    });
    auto* rep = leaf(&app, "replay", "replay a trace and report legality", [&] {
        auto d = doc();
        ojson tj = trace_path.empty() ? field(d, "trace", "") : read_json_file(trace_path, io.in);
        with_group(d, [&](const auto& g, const auto& cd, const auto& sh, const auto& P) {
            auto [r, legal] = replay_result(g, cd, sh, P, trace_from_json(cd, tj, trace_path.empty() ? "/trace" : ""));
            result = r;
            code = legal ? 0 : 1;
        });
    });
    rep->add_option("-t,--trace", trace_path, "trace JSON file (default: the input's \"trace\")");
    leaf(&app, "excess", "rank, excess and visible excess (small patterns)", [&] {
        with_group(doc(), [&](const auto& g, const auto&, const auto& sh, const auto& P) {
            result = ojson{{"rank", rank_exact(g, sh, P)}, {"excess", excess(g, sh, P)}, {"visible_excess", visible_excess(g, sh, P)}};
        });
    });

    auto* tri = app.add_subcommand("triangle", "triangle orbits")->require_subcommand(1);
    leaf(tri, "identify", "fill decomposition and excess per component", [&] { result = triangle_components(z2_pattern(doc())); });
    leaf(tri, "path", "moves to the normal form", [&] {
        auto P = z2_pattern(doc());
        result = path_result(P, canonical_path(P), normal_form(identify_orbit(P)));
    });
    leaf(tri, "member-line", "whether the pattern is in the orbit of a line", [&] { result = ojson{{"member", line_orbit_member(z2_pattern(doc()))}}; });

    auto* sq = app.add_subcommand("square", "square orbits")->require_subcommand(1);
    leaf(sq, "identify", "rectangle decomposition and excess per component", [&] { result = square_components(z2_pattern(doc())); });
    leaf(sq, "path", "moves to the normal form", [&] {
        auto P = z2_pattern(doc());
        result = path_result(P, square_canonical_path(P), square_normal_form(square_identify_orbit(P)));
    });
    leaf(sq, "member-cross", "whether the pattern is in the orbit of a cross", [&] { result = ojson{{"member", cross_orbit_member(z2_pattern(doc()))}}; });

    auto* ct = app.add_subcommand("contour", "contours and exchanges between them")->require_subcommand(1);
    leaf(ct, "compute", "contour at one corner, or at all corners", [&] {
        auto d = doc();
        Shape2 sh = d.contains("shape") ? shape2_from_json(d["shape"], "/shape") : triangle_shape();
        P2 P = z2_pattern(d);
        if (d.contains("corner")) {
            Vec2 c = vec2_from_json(d["corner"], "/corner");
            result = ojson{{"corner", to_json(c)}, {"contour", to_json(contour(sh, P, c))}};
        } else {
            ojson a = ojson::array();
            for (auto c : corners(sh.S)) a.push_back(ojson{{"corner", to_json(c)}, {"contour", to_json(contour(sh, P, c))}});
            result = ojson{{"contours", a}};
        }
    });
    leaf(ct, "swap", "trace from the contour at \"from\" to the contour at \"to\"", [&] {
        auto d = doc();
        Shape2 sh = d.contains("shape") ? shape2_from_json(d["shape"], "/shape") : triangle_shape();
        P2 P = z2_pattern(d);
        Vec2 lo = vec2_from_json(field(d, "from", ""), "/from"), hi = vec2_from_json(field(d, "to", ""), "/to");
        std::optional<BiInvariantOrder> ord;
        if (d.contains("order")) ord = order_from_json(d["order"], "/order");
        else ord = swap_order(sh.S, lo, hi);
        Trace2 tr;
        std::string method;
        if (ord) {
            tr = sweep_swap(sh, P, lo, hi, *ord);
            method = "sweep_swap";
        } else {
            tr = parallel_edge_exchange(sh, P, lo, hi);
            method = "parallel_edge_exchange";
        }
        result = ojson{{"method", method}};
        if (ord) result["order"] = to_json(*ord);
        result["shape"] = shape_to_json(Codec<Vec2>{}, sh);
        result["pattern"] = to_json(contour(sh, P, lo));
        result["trace"] = to_json(tr);
        result["end"] = to_json(contour(sh, P, hi));
    });

    auto* ob = app.add_subcommand("orbit", "orbit graphs and counts")->require_subcommand(1);
    auto bfs_limits = [&](CLI::App* c) {
        c->add_option("--max", max_vertices, "vertex limit")->check(CLI::PositiveNumber);
        c->add_option("--radius", radius, "largest coordinate or word length allowed");
    };
    auto limits = [&] {
        OrbitLimits l;
        l.max_vertices = max_vertices;
        if (radius >= 0) l.max_radius = radius;
        return l;
    };
    auto* bfs = leaf(ob, "bfs", "orbit graph statistics, optionally the graph", [&] {
        with_group(doc(), [&](const auto& g, const auto& cd, const auto& sh, const auto& P) {
            auto og = orbit_bfs(g, sh, P, limits());
            result = ojson{{"size", og.vertices.size()}, {"edges", og.edges.size()}, {"root_eccentricity", og.root_eccentricity},
                           {"truncated", og.truncated}};
            if (og.truncated) result["reason"] = og.truncation_reason;
            if (graph) {
                ojson vs = ojson::array(), es = ojson::array();
                for (auto& v : og.vertices) vs.push_back(pattern_to_json(cd, v));
                for (auto [a, b] : og.edges) es.push_back(ojson::array({a, b}));
                result["vertices"] = vs;
                result["adjacency"] = es;
            }
            if (!dot_path.empty()) {
                std::ofstream f(dot_path);
                if (!f) throw UsageError("cannot write " + dot_path);
                f << to_dot(og);
            }
        });
    });
    bfs_limits(bfs);
    bfs->add_flag("--graph", graph, "include vertices and adjacency");
    bfs->add_option("--dot", dot_path, "write the graph in DOT format");
    auto* dia = leaf(ob, "diameter", "exact diameter of a complete orbit", [&] {
        with_group(doc(), [&](const auto& g, const auto&, const auto& sh, const auto& P) {
            auto og = orbit_bfs(g, sh, P, limits());
            result = ojson{{"size", og.vertices.size()}, {"diameter", diameter(og)}};
        });
    });
    bfs_limits(dia);
    auto* cf = ob->add_subcommand("count-free-line", "size of the line orbit of the free-group triangle");
    cf->add_option("-n", count_n, "line length")->required()->check(CLI::Range(1, 100000));
    cf->add_option("-o,--output", output, "output file (default stdout)");
    cf->add_flag("--pretty", pretty, "indent the JSON output");
    cf->callback([&] { action = [&] { result = ojson{{"n", count_n}, {"count", count_json(free_line_orbit_count(count_n))}}; }; });
    leaf(ob, "member-free-line", "membership in the free-group line orbit (input has \"n\")", [&] {
        auto d = doc();
        GroupContext ctx = GroupContext::free(2);
        auto P = pattern_from_json(Codec<GroupElement>{ctx}, field(d, "pattern", ""), "/pattern");
        int n = as_int(field(d, "n", ""), "/n");
        result = ojson{{"member", free_line_orbit_membership(P, n)}};
        if (auto w = free_line_word(P, n)) result["word"] = *w;
    });

    auto* tp = app.add_subcommand("tep", "TEP rules: independence, spanning, bases, simple permutations")->require_subcommand(1);
    auto tep_leaf = [&](const std::string& name, const std::string& help, std::function<void()> fn) {
        leaf(tp, name, help, fn)->add_option("--budget", budget, "largest number of valid domain patterns")->check(CLI::PositiveNumber);
    };
    struct TepIn {
        TepRule rule;
        P2 domain, set;
    };
    auto tep_in = [&](const ojson& d) {
        return TepIn{rule_from_json(field(d, "rule", ""), "/rule"), pattern2_from_json(field(d, "domain", ""), "/domain"),
                     pattern2_from_json(field(d, "pattern", ""), "/pattern")};
    };
    tep_leaf("check-indep", "is every assignment on the pattern realised inside the domain", [&] {
        auto t = tep_in(doc());
        result = ojson{{"independent", is_independent(t.rule, t.set, t.domain, budget)}};
    });
    tep_leaf("span", "cells of the domain determined by the pattern", [&] {
        auto t = tep_in(doc());
        result = ojson{{"spanned", to_json(spanned_set(t.rule, t.set, t.domain, budget))},
                       {"filling_closure", to_json(fill(Z2{}, t.rule.shape, t.set))}};
    });
    tep_leaf("basis", "independent and filling the domain", [&] {
        auto t = tep_in(doc());
        bool fills = fill(Z2{}, t.rule.shape, t.set) == t.domain;
        bool indep = is_independent(t.rule, t.set, t.domain, budget);
        result = ojson{{"basis", fills && indep}, {"independent", indep}, {"fills", fills}};
    });
    tep_leaf("compile-perms", "simple permutations realising the base change from pattern to target", [&] {
        auto d = doc();
        auto t = tep_in(d);
        P2 Q = pattern2_from_json(field(d, "target", ""), "/target");
        Trace2 tr;
        if (d.contains("trace")) {
            tr = trace_from_json(Codec<Vec2>{}, d["trace"], "/trace");
        } else {
            if (!(t.rule.shape == triangle_shape())) throw UsageError("at /trace: required for non-triangle rules");
            if (normal_form(identify_orbit(t.set)) != normal_form(identify_orbit(Q)))
                throw DomainError("pattern and target are in different orbits");
            tr = canonical_path(t.set);
            auto back = canonical_path(Q);
            for (auto it = back.rbegin(); it != back.rend(); ++it) tr.push_back(reversed(*it));
        }
        if (replay(Z2{}, t.rule.shape, t.set, tr) != Q) throw DomainError("trace does not end at the target");
        auto steps = compile_simple_perms(t.rule, t.set, tr);
        auto f = base_change_bijection(t.rule, t.set, Q, t.domain, budget);
        bool agree = true;
        for (std::size_t c = 0; c < f.size() && agree; ++c) {
            std::vector<int> x(t.set.size());
            std::size_t r = c;
            for (auto& v : x) v = int(r % t.rule.q), r /= t.rule.q;
            for (auto& s : steps) apply_step(s, t.rule.q, x);
            std::size_t e = 0;
            for (std::size_t i = x.size(); i-- > 0;) e = e * t.rule.q + x[i];
            agree = e == f[c];
        }
        ojson st = ojson::array();
        for (auto& s : steps) st.push_back(ojson{{"cells", s.cells}, {"table", s.table}});
        result = ojson{{"steps", st}, {"count", steps.size()}, {"max_cells", max_cells_touched(steps)}, {"matches_bijection", agree}};
        if (!agree) code = 1;
    });

    auto* sv = app.add_subcommand("serve", "newline-delimited JSON requests on stdin, one response line each");
    sv->callback([&] { action = [&] { code = -1; }; });

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        io.out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        io.err << "usage error: " << e.what() << "\n";
        for (auto* c = &app; c;) {
            auto subs = c->get_subcommands();
            if (subs.empty()) {
                io.err << c->help();
                break;
            }
            c = subs.front();
        }
        return 2;
    }
    try {
        if (!action) throw UsageError("no command given");
        action();
        if (code == -1) return serve(io);
        emit(io, result, pretty, output);
        return code;
    } catch (const UsageError& e) {
        io.err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ContractViolation& e) {
        io.err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        io.err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace solitaire::app
