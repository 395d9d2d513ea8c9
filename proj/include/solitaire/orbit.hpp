#pragma once

// Orbit graphs by breadth-first search, exact diameters, the line orbit of
// the free-group triangle, and the matching metric between patterns.

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "lattice.hpp"

namespace solitaire {

struct OrbitLimits {
    std::size_t max_vertices = 1'000'000;
    // largest coordinate (Z^d) or word length (F_k) a vertex may use
    std::optional<long long> max_radius;
};

template <class E>
struct OrbitGraph {
    Pattern<E> root;
    std::vector<Pattern<E>> vertices;  // BFS order, root first
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // i < j, unique
    bool truncated = false;
    std::string truncation_reason;
    int root_eccentricity = 0;  // exact only when not truncated
};

inline long long element_radius(Vec2 v) { return std::max(std::llabs(v.x), std::llabs(v.y)); }
inline long long element_radius(const GroupElement& g) {
    if (auto w = std::get_if<Word>(&g)) return (long long)w->letters.size();
    long long r = 0;
    for (auto c : std::get<Lattice>(g).coords) r = std::max(r, std::llabs(c));
    return r;
}

template <class G>
OrbitGraph<typename G::element> orbit_bfs(const G& grp, const Shape<typename G::element>& shape,
                                          const Pattern<typename G::element>& P, const OrbitLimits& lim = {}) {
    using E = typename G::element;
    using H = std::conditional_t<std::is_same_v<E, Vec2>, Vec2Hash, ElementHash>;
    OrbitGraph<E> out;
    out.root = P;
    std::unordered_map<Pattern<E>, std::size_t, PatternHash<E, H>> index;
    std::vector<int> level;
    auto too_far = [&](const Pattern<E>& q) {
        if (!lim.max_radius) return false;
        for (auto& c : q)
            if (element_radius(c) > *lim.max_radius) return true;
        return false;
    };
    auto truncate = [&](std::string why) {
        if (!out.truncated) out.truncated = true, out.truncation_reason = std::move(why);
    };
    if (too_far(P)) throw ContractViolation("orbit_bfs: root exceeds the radius limit");
    index.emplace(P, 0);
    out.vertices.push_back(P);
    level.push_back(0);
    std::set<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < out.vertices.size(); ++i) {
        auto cur = out.vertices[i];
        for (auto& m : legal_moves(grp, shape, cur)) {
            auto nx = apply_move(grp, shape, cur, m);
            auto it = index.find(nx);
            if (it == index.end()) {
                if (too_far(nx)) {
                    truncate("radius limit " + std::to_string(*lim.max_radius) + " reached");
                    continue;
                }
                if (out.vertices.size() >= lim.max_vertices) {
                    truncate("vertex limit " + std::to_string(lim.max_vertices) + " reached");
                    continue;
                }
                it = index.emplace(nx, out.vertices.size()).first;
                out.vertices.push_back(nx);
                level.push_back(level[i] + 1);
            }
            edges.insert({std::min(i, it->second), std::max(i, it->second)});
        }
    }
    out.edges.assign(edges.begin(), edges.end());
    out.root_eccentricity = level.back();
    return out;
}

template <class E>
std::vector<std::vector<std::size_t>> adjacency(const OrbitGraph<E>& g) {
    std::vector<std::vector<std::size_t>> adj(g.vertices.size());
    for (auto [a, b] : g.edges) adj[a].push_back(b), adj[b].push_back(a);
    return adj;
}

// Largest BFS distance over all pairs.
template <class E>
int diameter(const OrbitGraph<E>& g) {
    if (g.truncated) throw DomainError("diameter of a truncated orbit graph: " + g.truncation_reason);
    auto adj = adjacency(g);
    int best = 0;
    std::vector<int> dist(adj.size());
    for (std::size_t s = 0; s < adj.size(); ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::deque<std::size_t> q{s};
        dist[s] = 0;
        while (!q.empty()) {
            auto u = q.front();
            q.pop_front();
            best = std::max(best, dist[u]);
            for (auto v : adj[u])
                if (dist[v] < 0) dist[v] = dist[u] + 1, q.push_back(v);
        }
    }
    return best;
}

template <class E>
std::string to_dot(const OrbitGraph<E>& g) {
    std::ostringstream os;
    os << "graph orbit {\n";
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
        os << "  v" << i << " [label=\"";
        bool first = true;
        for (auto& c : g.vertices[i]) os << (first ? "" : " ") << to_string(c), first = false;
        os << "\"" << (i == 0 ? ", shape=box" : "") << "];\n";
    }
    for (auto [a, b] : g.edges) os << "  v" << a << " -- v" << b << ";\n";
    os << "}\n";
    return os.str();
}

// Free group F_2 with generators a = 1, b = 2; triangle S = {e, a, b}.
inline Word free_power(int i) { return Word{std::vector<int>(i, 1)}; }
inline Word free_power_b(int i) {
    auto l = std::vector<int>(i, 1);
    l.push_back(2);
    return Word{l};
}

inline Shape<GroupElement> free_triangle_shape() {
    return Shape<GroupElement>::full({GroupElement{Word{}}, GroupElement{Word{{1}}}, GroupElement{Word{{2}}}});
}

inline Pattern<GroupElement> free_line(int n) {
    std::vector<GroupElement> c;
    for (int i = 0; i < n; ++i) c.push_back(free_power(i));
    return Pattern<GroupElement>(c);
}

// Letter per point of L_n: E stays at a^i, B moved to a^i b, A moved to a^(i-1) b.
inline std::optional<std::string> free_line_word(const Pattern<GroupElement>& P, int n) {
    if (n < 1 || (int)P.size() != n) return std::nullopt;
    std::string w;
    std::set<int> used;  // j with a^j b claimed
    for (int i = 0; i < n; ++i) {
        if (P.contains(free_power(i)))
            w += 'E';
        else if (i >= 1 && P.contains(free_power_b(i - 1)) && !used.count(i - 1))
            w += 'A', used.insert(i - 1);
        else if (i + 1 < n && P.contains(free_power_b(i)))
            w += 'B', used.insert(i);
        else
            return std::nullopt;
    }
    return w;
}

inline bool free_line_language(const std::string& w) {
    if (w.empty()) return false;
    if (w.front() == 'A' || w.back() == 'B') return false;
    return w.find("BA") == std::string::npos;
}

inline bool free_line_orbit_membership(const Pattern<GroupElement>& P, int n) {
    auto w = free_line_word(P, n);
    return w && free_line_language(*w);
}

// u_1 = 1, u_2 = 3, u_{n+1} = 3 u_n - u_{n-1}
inline boost::multiprecision::cpp_int free_line_orbit_count(int n) {
    if (n < 1) throw ContractViolation("free_line_orbit_count needs n >= 1");
    boost::multiprecision::cpp_int prev = 1, cur = 3;
    if (n == 1) return prev;
    for (int i = 2; i < n; ++i) {
        boost::multiprecision::cpp_int next = 3 * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

// Minimum-cost perfect matching on a square matrix (shortest augmenting paths
// with potentials). Returns the assignment row -> column.
inline std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
    int n = (int)cost.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1), v(n + 1);
    std::vector<int> p(n + 1), way(n + 1);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j)
                if (!used[j]) {
                    double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if (cur < minv[j]) minv[j] = cur, way[j] = j0;
                    if (minv[j] < delta) delta = minv[j], j1 = j;
                }
            for (int j = 0; j <= n; ++j)
                if (used[j])
                    u[p[j]] += delta, v[j] -= delta;
                else
                    minv[j] -= delta;
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row(n);
    for (int j = 1; j <= n; ++j) row[p[j] - 1] = j - 1;
    return row;
}

inline double euclid(Vec2 a, Vec2 b) { return std::hypot(double(a.x - b.x), double(a.y - b.y)); }

// Min over bijections f of sum |a - f(a)|.
inline double delta_metric(const P2& A, const P2& B) {
    if (A.size() != B.size()) throw ContractViolation("delta_metric needs |A| = |B|");
    if (A.empty()) return 0;
    std::vector<Vec2> a(A.begin(), A.end()), b(B.begin(), B.end());
    std::vector<std::vector<double>> cost(a.size(), std::vector<double>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) cost[i][j] = euclid(a[i], b[j]);
    auto f = min_cost_assignment(cost);
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += cost[i][f[i]];
    return s;
}

inline double shape_diameter(const Shape2& shape) {
    double d = 0;
    for (auto s : shape.S)
        for (auto t : shape.S) d = std::max(d, euclid(s, t));
    return d;
}

// Each move carries one point at most diam(S) away, so this many moves are needed.
inline long long move_lower_bound(const Shape2& shape, const P2& A, const P2& B) {
    double d = delta_metric(A, B) / shape_diameter(shape);
    return (long long)std::ceil(d - 1e-9);
}

}  // namespace solitaire
