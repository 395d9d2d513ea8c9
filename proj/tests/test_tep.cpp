#include <gtest/gtest.h>

#include <random>

#include "solitaire/tep.hpp"
#include "solitaire/triangle.hpp"

using namespace solitaire;

namespace {

Trace2 reverse_trace(const Trace2& tr) {
    Trace2 out;
    for (auto it = tr.rbegin(); it != tr.rend(); ++it) out.push_back(reversed(*it));
    return out;
}

P2 diagonal(int n) {
    std::vector<Vec2> c;
    for (int i = 0; i < n; ++i) c.push_back({i, n - 1 - i});
    return P2(c);
}

}  // namespace

TEST(Tep, LocallyValid) {
    auto L = ledrappier();
    EXPECT_TRUE(locally_valid(L, make_local({{{0, 0}, 1}, {{1, 0}, 1}, {{0, 1}, 0}})));
    EXPECT_FALSE(locally_valid(L, make_local({{{0, 0}, 1}, {{1, 0}, 0}, {{0, 1}, 0}})));
    EXPECT_TRUE(locally_valid(L, make_local({{{0, 0}, 1}, {{5, 5}, 0}})));
}

TEST(Tep, RuleValidation) {
    auto sh = triangle_shape();
    EXPECT_THROW(TepRule::explicit_table(sh, 2, {{0, 0, 0}}), ContractViolation);
    // sum <= 1 is not permutive
    EXPECT_THROW(TepRule::from_predicate(sh, 2, [](const Symbols& t) { return t[0] + t[1] + t[2] <= 1; }, "x"),
                 ContractViolation);
    std::vector<Symbols> rows;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) rows.push_back({a, b, a ^ b});
    auto r = TepRule::explicit_table(sh, 2, rows);
    EXPECT_EQ(r.allowed, ledrappier().allowed);
    EXPECT_NO_THROW(s3_triangle_rule());
}

TEST(Tep, DeduceClosure) {
    auto L = ledrappier();
    auto p = make_local({{{0, 0}, 1}, {{1, 0}, 0}, {{2, 0}, 1}});
    auto full = deduce_closure(L, p);
    EXPECT_EQ(full.domain, triangle_cells(3));
    EXPECT_EQ(full.at({0, 1}), 1);
    EXPECT_EQ(full.at({1, 1}), 1);
    EXPECT_EQ(full.at({0, 2}), 0);
    auto iso = make_local({{{0, 0}, 1}, {{4, 4}, 0}});
    EXPECT_EQ(deduce_closure(L, iso).domain, iso.domain);
    auto z3 = ledrappier(3);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            EXPECT_EQ(deduce_closure(z3, make_local({{{0, 0}, a}, {{1, 0}, b}})).at({0, 1}), (6 - a - b) % 3);
}

TEST(Tep, DeduceClosureIsOrderIndependent) {
    std::mt19937 rng(61);
    for (auto rule : {ledrappier(), ledrappier(3), s3_triangle_rule()}) {
        for (int i = 0; i < 30; ++i) {
            std::map<Vec2, int> m;
            for (int x = 0; x < 6; ++x) m[{x, 0}] = int(rng() % rule.q);
            m[{7, 1}] = int(rng() % rule.q);
            auto p = make_local(m);
            auto base = deduce_closure(rule, p);
            EXPECT_TRUE(locally_valid(rule, base));
            for (std::uint64_t s = 1; s <= 5; ++s) {
                auto o = deduce_closure(rule, p, s * 7919 + i);
                EXPECT_EQ(o.domain, base.domain);
                EXPECT_EQ(o.values, base.values);
            }
        }
    }
}

TEST(Tep, LedrappierIndependenceDependsOnAlphabet) {
    P2 T{{0, 0}, {2, 0}, {0, 2}};
    EXPECT_FALSE(is_independent(ledrappier(), T, triangle_cells(3)));
    EXPECT_TRUE(is_independent(ledrappier(3), T, triangle_cells(3)));
}

TEST(Tep, DoubledTriangleRelation) {
    auto en = enumerate_valid(ledrappier(), triangle_cells(3));
    ASSERT_EQ(en.rows.size(), 8u);
    auto a = en.index({0, 0}), b = en.index({2, 0}), c = en.index({0, 2});
    for (auto& r : en.rows) EXPECT_EQ(r[a] ^ r[b] ^ r[c], 0);
}

TEST(Tep, LinesAreFillingBases) {
    for (auto rule : {ledrappier(), ledrappier(3)})
        for (int n = 1; n <= 4; ++n) EXPECT_TRUE(is_filling_basis(rule, line_cells(n), triangle_cells(n)));
    EXPECT_TRUE(is_filling_basis(s3_triangle_rule(), line_cells(3), triangle_cells(3)));
    EXPECT_FALSE(is_filling_basis(ledrappier(), triangle_cells(2), triangle_cells(2)));
    // every member of the line orbit
    for (auto rule : {ledrappier(), ledrappier(3)}) {
        auto en = enumerate_valid(rule, triangle_cells(4));
        std::set<P2> seen{line_cells(4)};
        std::vector<P2> todo{line_cells(4)};
        while (!todo.empty()) {
            auto cur = todo.back();
            todo.pop_back();
            EXPECT_TRUE(is_independent(en, rule.q, cur));
            EXPECT_EQ(fill(Z2{}, rule.shape, cur), triangle_cells(4));
            for (auto& m : legal_moves(Z2{}, rule.shape, cur)) {
                auto nx = apply_move(Z2{}, rule.shape, cur, m);
                if (seen.insert(nx).second) todo.push_back(nx);
            }
        }
        EXPECT_EQ(seen.size(), 122u);
    }
}

TEST(Tep, SolitairePreservesIndependence) {
    auto D = triangle_cells(4);
    std::vector<Vec2> cells(D.begin(), D.end());
    for (auto rule : {ledrappier(), ledrappier(3)}) {
        auto en = enumerate_valid(rule, D);
        int moves = 0;
        for (std::uint32_t m = 0; m < (1u << cells.size()); ++m) {
            std::vector<Vec2> c;
            for (std::size_t i = 0; i < cells.size(); ++i)
                if (m >> i & 1) c.push_back(cells[i]);
            P2 T(c);
            if (!is_independent(en, rule.q, T)) continue;
            for (auto& mv : legal_moves(Z2{}, rule.shape, T)) {
                if (!D.contains(mv.filled)) continue;
                EXPECT_TRUE(is_independent(en, rule.q, apply_move(Z2{}, rule.shape, T, mv)));
                ++moves;
            }
        }
        EXPECT_GT(moves, 500);
    }
}

TEST(Tep, SpanningBeyondFilling) {
    P2 P = line_cells(4).unite(P2{{5, 0}, {0, 5}});
    auto D = triangle_cells(6);
    auto phi = fill(Z2{}, triangle_shape(), P);
    EXPECT_TRUE(phi.subset_of(D));
    EXPECT_LT(phi.size(), D.size());
    EXPECT_EQ(enumerate_valid(ledrappier(), D).rows.size(), 64u);
    EXPECT_EQ(spanned_set(ledrappier(), P, D), D);
    EXPECT_EQ(spanned_set(s3_triangle_rule(), P, D), phi);
}

TEST(Tep, SpannedContainsFillAndRanks) {
    std::mt19937 rng(67);
    auto D = triangle_cells(5);
    std::vector<Vec2> cells(D.begin(), D.end());
    for (auto rule : {ledrappier(), ledrappier(3)}) {
        auto en = enumerate_valid(rule, D);
        for (int i = 0; i < 60; ++i) {
            std::vector<Vec2> c;
            for (auto x : cells)
                if (rng() % 4 == 0) c.push_back(x);
            P2 P(c);
            auto psi = spanned_set(en, P);
            EXPECT_TRUE(fill(Z2{}, rule.shape, P).subset_of(psi));
            // spanning-closed sets are filling-closed
            EXPECT_EQ(fill(Z2{}, rule.shape, psi), psi);
            if (P.size() <= 8) EXPECT_LE(rank_indep(en, rule.q, P), rank_span(en, P));
        }
    }
}

TEST(Tep, CompiledPermutationsMatchBaseChange) {
    for (auto rule : {ledrappier(), ledrappier(3)}) {
        auto P = line_cells(3), Q = diagonal(3), D = triangle_cells(3);
        auto tr = reverse_trace(canonical_path(Q));
        ASSERT_EQ(replay(Z2{}, rule.shape, P, tr), Q);
        auto f = base_change_bijection(rule, P, Q, D);
        auto steps = compile_simple_perms(rule, P, tr);
        EXPECT_LE(max_cells_touched(steps), rule.q == 2 ? 3u : 2u);
        std::size_t total = f.size();
        EXPECT_EQ(total, rule.q == 2 ? 8u : 27u);
        for (std::size_t c = 0; c < total; ++c) {
            std::vector<int> x(3);
            std::size_t d = c;
            for (auto& v : x) v = int(d % rule.q), d /= rule.q;
            for (auto& s : steps) apply_step(s, rule.q, x);
            std::size_t e = 0;
            for (std::size_t i = x.size(); i-- > 0;) e = e * rule.q + x[i];
            EXPECT_EQ(e, f[c]);
        }
        EXPECT_TRUE(compile_simple_perms(rule, P, {}).empty());
        auto id = base_change_bijection(rule, P, P, D);
        for (std::size_t c = 0; c < id.size(); ++c) EXPECT_EQ(id[c], c);
    }
}
