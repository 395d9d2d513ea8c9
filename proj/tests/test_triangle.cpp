#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "solitaire/triangle.hpp"

using namespace solitaire;

namespace {

const Z2 z2;

P2 random_pattern(std::mt19937& rng, int n, int box) {
    std::vector<Vec2> c;
    for (int i = 0; i < n; ++i) c.push_back({int(rng() % box), int(rng() % box)});
    return P2(c);
}

P2 from_mask(const oracle::TriBox& box, std::uint64_t m) {
    std::vector<Vec2> c;
    for (int i = 0; i < box.size(); ++i)
        if (m >> i & 1) c.push_back({box.cell[i].first, box.cell[i].second});
    return P2(c);
}

std::uint64_t to_mask(const oracle::TriBox& box, const P2& p) {
    std::uint64_t m = 0;
    for (auto c : p) m |= box.bit(c.x, c.y);
    return m;
}

}  // namespace

TEST(Triangle, Decomposition) {
    auto d = fill_decomposition(line_cells(4));
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0], (std::pair<Vec2, int>{{0, 0}, 4}));
    EXPECT_EQ(fill_decomposition(P2{{0, 0}, {10, 10}}).size(), 2u);
    auto sq = fill_decomposition(P2{{0, 0}, {1, 0}, {0, 1}, {1, 1}});
    ASSERT_EQ(sq.size(), 1u);
    EXPECT_LE(sq[0].second, 4);
    EXPECT_EQ(sq[0], (std::pair<Vec2, int>{{0, 0}, 3}));
}

TEST(Triangle, ComponentsNeverTouch) {
    std::mt19937 rng(31);
    for (int i = 0; i < 200; ++i) {
        auto P = random_pattern(rng, 6, 9);
        auto d = fill_decomposition(P);
        int total = 0;
        P2 un;
        for (auto [v, n] : d) total += n, un = un.unite(triangle_cells(n, v));
        EXPECT_LE(total, (int)P.size());
        EXPECT_EQ(fill(z2, triangle_shape(), un), un);
        EXPECT_EQ(un, fill(z2, triangle_shape(), P));
    }
}

TEST(Triangle, NormalCells) {
    EXPECT_EQ(normal_cells(4, 0), line_cells(4));
    EXPECT_EQ(normal_cells(4, 2), line_cells(4).unite(P2{{0, 1}, {1, 1}}));
    EXPECT_EQ(normal_cells(4, 4), line_cells(4).unite(P2{{0, 1}, {1, 1}, {2, 1}, {0, 2}}));
    EXPECT_EQ(normal_cells(3, 3), triangle_cells(3));
    EXPECT_THROW(normal_cells(3, 4), ContractViolation);
}

TEST(Triangle, IdentifyExamples) {
    EXPECT_EQ(identify_orbit(line_cells(5)), (std::vector<TriangleComponent>{{{0, 0}, 5, 0}}));
    EXPECT_EQ(identify_orbit(triangle_cells(2)), (std::vector<TriangleComponent>{{{0, 0}, 2, 1}}));
    auto two = identify_orbit(P2{{0, 0}, {10, 10}});
    EXPECT_EQ(two, (std::vector<TriangleComponent>{{{0, 0}, 1, 0}, {{10, 10}, 1, 0}}));
}

TEST(Triangle, IdentifyIsOrbitInvariant) {
    std::mt19937 rng(32);
    auto T = triangle_shape();
    for (int i = 0; i < 200; ++i) {
        auto P = random_pattern(rng, 3 + rng() % 6, 6);
        auto id = identify_orbit(P);
        for (auto& m : legal_moves(z2, T, P)) EXPECT_EQ(identify_orbit(apply_move(z2, T, P, m)), id);
    }
}

TEST(Triangle, IdentifyMatchesBfsOrbitsInT5) {
    oracle::TriBox box(5);
    std::vector<std::uint64_t> all;
    for (std::uint64_t m = 0; m < (std::uint64_t(1) << box.size()); ++m)
        if (__builtin_popcountll(m) <= 5) all.push_back(m);
    std::unordered_map<std::uint64_t, std::uint32_t> at;
    for (std::uint32_t i = 0; i < all.size(); ++i) at[all[i]] = i;
    oracle::UnionFind uf(all.size());
    for (std::uint32_t i = 0; i < all.size(); ++i) box.neighbours(all[i], [&](std::uint64_t q) { uf.unite(i, at.at(q)); });
    std::map<std::vector<TriangleComponent>, std::uint32_t> root_of;
    std::map<std::uint32_t, std::vector<TriangleComponent>> key_of;
    for (std::uint32_t i = 0; i < all.size(); ++i) {
        auto key = identify_orbit(from_mask(box, all[i]));
        auto r = uf.find(i);
        auto [it, fresh] = root_of.emplace(key, r);
        EXPECT_EQ(it->second, r);
        auto [jt, fresh2] = key_of.emplace(r, key);
        EXPECT_EQ(jt->second, key);
    }
}

TEST(Triangle, LineOrbitMember) {
    std::vector<Vec2> diag;
    for (int i = 0; i < 5; ++i) diag.push_back({i, 4 - i});
    EXPECT_TRUE(line_orbit_member(P2(diag)));
    EXPECT_FALSE(line_orbit_member(triangle_cells(2)));
    for (auto& s : stacks(4, StackKind::Vertical)) EXPECT_TRUE(line_orbit_member(s));
}

TEST(Triangle, StackCounts) {
    for (int n = 1; n <= 5; ++n) {
        std::set<P2> all;
        for (auto k : {StackKind::Horizontal, StackKind::Vertical, StackKind::Diagonal})
            for (auto& s : stacks(n, k)) {
                EXPECT_TRUE(line_orbit_member(s));
                all.insert(s);
            }
        long long fact = 1;
        for (int i = 2; i <= n; ++i) fact *= i;
        EXPECT_EQ((long long)all.size(), n == 1 ? 1 : 3 * fact - 3);
    }
}

TEST(Triangle, AnCondition) {
    EXPECT_TRUE(a_n_condition(line_cells(4), 4));
    // three points in the two right-most columns of T_4
    P2 bad{{0, 0}, {2, 0}, {3, 0}, {2, 1}};
    EXPECT_FALSE(a_n_condition(bad, 4));
    EXPECT_FALSE(line_orbit_member(bad));
    oracle::TriBox box(5);
    for (auto m : box.orbit(to_mask(box, line_cells(5)))) EXPECT_TRUE(a_n_condition(from_mask(box, m), 5));
}

TEST(Triangle, CanonicalInputGivesEmptyPath) {
    EXPECT_TRUE(canonical_path(normal_cells(5, 3)).empty());
    EXPECT_TRUE(canonical_path(P2{}).empty());
}

TEST(Triangle, VerticalEdgeToLine) {
    std::vector<Vec2> col;
    for (int i = 0; i < 5; ++i) col.push_back({0, i});
    auto tr = canonical_path(P2(col));
    EXPECT_EQ(replay(z2, triangle_shape(), P2(col), tr), line_cells(5));
    EXPECT_LE(tr.size(), 25u);
}

TEST(Triangle, CanonicalPathRandom) {
    std::mt19937 rng(33);
    auto T = triangle_shape();
    for (int i = 0; i < 300; ++i) {
        auto P = random_pattern(rng, 1 + rng() % 12, 3 + rng() % 6);
        auto tr = canonical_path(P);
        auto comps = identify_orbit(P);
        EXPECT_EQ(replay(z2, T, P, tr), normal_form(comps));
        double n = P.size();
        EXPECT_LE(tr.size(), 40 * n * n * n);
        if (comps.size() == 1) EXPECT_LE(tr.size(), 40.0 * (comps[0].n * comps[0].n + comps[0].n * comps[0].k));
    }
}

TEST(Triangle, RandomOrbitElementOfLine) {
    std::mt19937 rng(34);
    auto T = triangle_shape();
    for (int n = 3; n <= 9; ++n) {
        P2 cur = line_cells(n);
        for (int s = 0; s < 200; ++s) {
            auto ms = legal_moves(z2, T, cur);
            cur = apply_move(z2, T, cur, ms[rng() % ms.size()]);
        }
        EXPECT_EQ(replay(z2, T, cur, canonical_path(cur)), line_cells(n));
    }
}

TEST(Triangle, LineTransportsExcess) {
    for (int n = 2; n <= 4; ++n) {
        oracle::TriBox box(n);
        auto line = to_mask(box, line_cells(n));
        for (int k = 1; k <= 2 && k <= n * (n - 1) / 2; ++k) {
            std::vector<std::uint64_t> supers;
            for (std::uint64_t m = 0; m < (std::uint64_t(1) << box.size()); ++m)
                if ((m & line) == line && __builtin_popcountll(m) == n + k) supers.push_back(m);
            auto orb = box.orbit(supers.front());
            std::unordered_set<std::uint64_t> in(orb.begin(), orb.end());
            for (auto s : supers) EXPECT_TRUE(in.count(s)) << n << " " << k;
        }
    }
}
