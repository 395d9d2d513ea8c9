#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracle.hpp"
#include "solitaire/orbit.hpp"
#include "solitaire/triangle.hpp"

using namespace solitaire;

namespace {

const DynGroup f2{GroupContext::free(2)};

P2 random_pattern(std::mt19937& rng, int n, int box) {
    std::vector<Vec2> c;
    for (int i = 0; i < n; ++i) c.push_back({int(rng() % box), int(rng() % box)});
    return P2(c);
}

// sizes of A_n by direct enumeration of n-subsets of T_n
long long count_a_n(int n) {
    oracle::TriBox box(n);
    long long cnt = 0;
    for (std::uint64_t m = 0; m < (std::uint64_t(1) << box.size()); ++m) {
        if (__builtin_popcountll(m) != n) continue;
        bool ok = true;
        for (int j = 1; j <= n && ok; ++j) {
            int c = 0;
            for (int i = 0; i < box.size(); ++i)
                if ((m >> i & 1) && box.cell[i].first >= n - j) ++c;
            ok = c <= j;
        }
        cnt += ok;
    }
    return cnt;
}

double brute_delta(const P2& A, const P2& B) {
    std::vector<Vec2> a(A.begin(), A.end()), b(B.begin(), B.end());
    std::vector<int> perm(a.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = 1e300;
    do {
        double s = 0;
        for (std::size_t i = 0; i < a.size(); ++i) s += std::hypot(a[i].x - b[perm[i]].x, a[i].y - b[perm[i]].y);
        best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace

TEST(Orbit, SmallTriangleOrbits) {
    auto g1 = orbit_bfs(Z2{}, triangle_shape(), line_cells(1));
    EXPECT_EQ(g1.vertices.size(), 1u);
    EXPECT_EQ(diameter(g1), 0);
    auto g2 = orbit_bfs(Z2{}, triangle_shape(), line_cells(2));
    ASSERT_EQ(g2.vertices.size(), 3u);
    for (auto& v : g2.vertices) EXPECT_TRUE(v.subset_of(triangle_cells(2)));
    EXPECT_EQ(g2.edges.size(), 3u);
    EXPECT_EQ(diameter(g2), 1);
}

TEST(Orbit, EdgesAreLegalBothWays) {
    auto g = orbit_bfs(Z2{}, triangle_shape(), line_cells(4));
    for (auto [a, b] : g.edges) {
        bool fwd = false, back = false;
        for (auto& m : legal_moves(Z2{}, triangle_shape(), g.vertices[a]))
            fwd |= apply_move(Z2{}, triangle_shape(), g.vertices[a], m) == g.vertices[b];
        for (auto& m : legal_moves(Z2{}, triangle_shape(), g.vertices[b]))
            back |= apply_move(Z2{}, triangle_shape(), g.vertices[b], m) == g.vertices[a];
        EXPECT_TRUE(fwd && back);
    }
}

TEST(Orbit, LineOrbitGoldensAndBounds) {
    const std::size_t sizes[] = {1, 3, 16, 122, 1188};
    const int diameters[] = {0, 1, 4, 11};
    for (int n = 1; n <= 5; ++n) {
        auto g = orbit_bfs(Z2{}, triangle_shape(), line_cells(n));
        EXPECT_EQ(g.vertices.size(), sizes[n - 1]);
        if (n <= 4) EXPECT_EQ(diameter(g), diameters[n - 1]);
        long long fact = 1;
        for (int i = 2; i <= n; ++i) fact *= i;
        if (n >= 2) EXPECT_LE(3 * fact - 3, (long long)g.vertices.size());
        EXPECT_LE((long long)g.vertices.size(), count_a_n(n));
    }
}

TEST(Orbit, TruncationIsReported) {
    OrbitLimits lim;
    lim.max_vertices = 10;
    auto g = orbit_bfs(Z2{}, triangle_shape(), line_cells(5), lim);
    EXPECT_TRUE(g.truncated);
    EXPECT_EQ(g.vertices.size(), 10u);
    EXPECT_THROW(diameter(g), DomainError);
    OrbitLimits rad;
    rad.max_radius = 6;
    auto dom = orbit_bfs(Z2{}, Shape2::full({{0, 0}, {1, 0}}), P2{{0, 0}}, rad);
    EXPECT_TRUE(dom.truncated);
    EXPECT_NE(dom.truncation_reason.find("radius"), std::string::npos);
    EXPECT_FALSE(orbit_bfs(Z2{}, triangle_shape(), line_cells(3)).truncated);
}

TEST(Orbit, FreeLineCountMatchesBfsAndFormula) {
    EXPECT_EQ(free_line_orbit_count(1), 1);
    EXPECT_EQ(free_line_orbit_count(2), 3);
    for (int n = 1; n <= 7; ++n) {
        auto g = orbit_bfs(f2, free_triangle_shape(), free_line(n));
        EXPECT_FALSE(g.truncated);
        EXPECT_EQ(free_line_orbit_count(n), g.vertices.size()) << n;
    }
    for (int n = 1; n <= 20; ++n) {
        long double r5 = std::sqrt(5.0L);
        long double f = (std::pow(3 + r5, n) - std::pow(3 - r5, n)) / (std::pow(2.0L, n) * r5);
        EXPECT_EQ(free_line_orbit_count(n), (long long)std::llround(f)) << n;
    }
}

TEST(Orbit, FreeLineLanguageCount) {
    for (int n = 1; n <= 10; ++n) {
        long long total = 1, cnt = 0;
        for (int i = 0; i < n; ++i) total *= 3;
        for (long long code = 0; code < total; ++code) {
            std::string w;
            for (long long c = code, i = 0; i < n; ++i, c /= 3) w += "EAB"[c % 3];
            cnt += free_line_language(w);
        }
        EXPECT_EQ(free_line_orbit_count(n), cnt);
    }
}

TEST(Orbit, FreeLineMembershipMatchesBfs) {
    for (int n = 1; n <= 6; ++n) {
        auto g = orbit_bfs(f2, free_triangle_shape(), free_line(n));
        std::set<Pattern<GroupElement>> orb(g.vertices.begin(), g.vertices.end());
        // all n-subsets of L_n together with the row above it
        std::vector<GroupElement> cells;
        for (int i = 0; i < n; ++i) cells.push_back(free_power(i));
        for (int i = 0; i + 1 < n; ++i) cells.push_back(free_power_b(i));
        int m = (int)cells.size();
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
            if (__builtin_popcount(mask) != n) continue;
            std::vector<GroupElement> c;
            for (int i = 0; i < m; ++i)
                if (mask >> i & 1) c.push_back(cells[i]);
            Pattern<GroupElement> P(c);
            EXPECT_EQ(free_line_orbit_membership(P, n), orb.count(P) > 0);
        }
    }
}

TEST(Orbit, DeltaMetric) {
    P2 A{{0, 0}, {3, 1}, {2, 5}};
    EXPECT_DOUBLE_EQ(delta_metric(A, A), 0.0);
    EXPECT_THROW(delta_metric(A, P2{{0, 0}}), ContractViolation);
    for (int n = 1; n <= 10; ++n) {
        std::vector<Vec2> v;
        for (int i = 0; i < n; ++i) v.push_back({0, i});
        EXPECT_GE(delta_metric(line_cells(n), P2(v)) + 1e-9, n * (n - 1) / 2.0);
    }
    std::mt19937 rng(51);
    for (int i = 0; i < 300; ++i) {
        int n = 1 + rng() % 6;
        P2 X, Y;
        while ((int)X.size() < n) X.insert({int(rng() % 7), int(rng() % 7)});
        while ((int)Y.size() < n) Y.insert({int(rng() % 7), int(rng() % 7)});
        EXPECT_NEAR(delta_metric(X, Y), brute_delta(X, Y), 1e-9);
    }
}

TEST(Orbit, CanonicalPathRespectsMatchingBound) {
    std::mt19937 rng(53);
    for (int i = 0; i < 200; ++i) {
        auto P = random_pattern(rng, 2 + rng() % 12, 8);
        auto tr = canonical_path(P);
        auto end = replay(Z2{}, triangle_shape(), P, tr);
        EXPECT_GE((long long)tr.size(), move_lower_bound(triangle_shape(), P, end));
    }
    std::vector<Vec2> v;
    for (int i = 0; i < 6; ++i) v.push_back({0, i});
    auto tr = canonical_path(P2(v));
    EXPECT_GE((long long)tr.size(), move_lower_bound(triangle_shape(), P2(v), line_cells(6)));
}

TEST(Orbit, DotExport) {
    auto g = orbit_bfs(Z2{}, triangle_shape(), line_cells(2));
    auto dot = to_dot(g);
    EXPECT_EQ(dot.rfind("graph orbit {", 0), 0u);
    EXPECT_EQ((std::size_t)std::count(dot.begin(), dot.end(), '-') / 2, g.edges.size());
}
