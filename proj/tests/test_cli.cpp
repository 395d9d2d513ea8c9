#include <gtest/gtest.h>

#include <random>

#include "solitaire/app.hpp"

using namespace solitaire;

namespace {

struct Result {
    int code;
    std::string out, err;
    ojson json() const { return ojson::parse(out); }
};

Result run(std::vector<std::string> args, const std::string& stdin_text = "") {
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    int code = app::run(std::move(args), {in, out, err});
    return {code, out.str(), err.str()};
}

std::string cells(const P2& P) { return to_json(P).dump(); }

}  // namespace

TEST(Cli, TriangleIdentifyLine) {
    auto r = run({"triangle", "identify"}, R"({"pattern":{"line":4}})");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "{\"components\":[{\"v\":[0,0],\"n\":4,\"k\":0}]}\n");
}

TEST(Cli, BarePatternListIsAccepted) {
    auto r = run({"fill"}, "[[0,0],[1,0],[2,0]]");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(pattern2_from_json(r.json()["closure"], ""), triangle_cells(3));
}

TEST(Cli, PathOutputReplays) {
    std::mt19937 rng(3);
    for (int i = 0; i < 30; ++i) {
        std::vector<Vec2> c;
        for (int j = 0; j < 7; ++j) c.push_back({int(rng() % 5), int(rng() % 5)});
        P2 P(c);
        for (std::string kind : {"triangle", "square"}) {
            std::string doc = R"({"shape":")" + kind + R"(","pattern":)" + cells(P) + "}";
            auto p = run({kind, "path"}, doc);
            ASSERT_EQ(p.code, 0) << p.err;
            auto j = p.json();
            j["shape"] = kind;
            auto r = run({"replay"}, j.dump());
            ASSERT_EQ(r.code, 0) << r.err;
            EXPECT_EQ(r.json()["pattern"], j["normal_form"]);
        }
    }
}

TEST(Cli, ReplayTraceFromFileAndWrappedForm) {
    auto p = run({"triangle", "path"}, R"({"pattern":[[0,0],[1,0],[0,1],[1,1]]})");
    ASSERT_EQ(p.code, 0);
    auto j = p.json();
    std::string tpath = ::testing::TempDir() + "cli_trace.json";
    std::ofstream(tpath) << ojson{{"trace", j["trace"]}}.dump();
    auto r = run({"replay", "-t", tpath}, ojson{{"pattern", j["pattern"]}}.dump());
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.json()["pattern"], j["normal_form"]);
}

TEST(Cli, IllegalReplayExitsOne) {
    auto r = run({"replay"}, R"({"pattern":[[0,0]],"trace":[{"g":[0,0],"from":[1,0],"to":[0,1]}]})");
    EXPECT_EQ(r.code, 1);
    auto j = r.json();
    EXPECT_FALSE(j["legal"].get<bool>());
    EXPECT_EQ(j["step"], 0);
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"nope"}).code, 2);
    EXPECT_EQ(run({"fill"}, "{not json").code, 2);
    auto r = run({"fill"}, R"({"pattern":[[0,"x"]]})");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("/pattern"), std::string::npos);
    EXPECT_EQ(run({"orbit", "count-free-line"}).code, 2);
    auto q = run({"tep", "basis"}, R"({"rule":{"kind":"ledrappier","q":3},"domain":{"line":1},"pattern":{"line":1}})");
    EXPECT_EQ(q.code, 2);
    EXPECT_NE(q.err.find("/rule/q"), std::string::npos);
}

TEST(Cli, DomainErrorsExitOne) {
    EXPECT_EQ(run({"excess"}, "{\"pattern\":{\"line\":9}}").code, 1);
    EXPECT_EQ(run({"orbit", "diameter", "--max", "5"}, R"({"pattern":{"line":3}})").code, 1);
}

TEST(Cli, OrbitBfsStatsAndGraph) {
    auto r = run({"orbit", "bfs", "--max", "10000", "--graph"}, R"({"pattern":{"line":3}})");
    ASSERT_EQ(r.code, 0);
    auto j = r.json();
    EXPECT_EQ(j["size"], 16);
    EXPECT_FALSE(j["truncated"].get<bool>());
    EXPECT_EQ(j["vertices"].size(), 16u);
    auto t = run({"orbit", "bfs", "--max", "5"}, R"({"pattern":{"line":3}})").json();
    EXPECT_TRUE(t["truncated"].get<bool>());
}

TEST(Cli, FreeGroupInputs) {
    auto r = run({"orbit", "bfs"}, R"({"group":{"kind":"Free","k":2},"pattern":["e","a","a a"]})");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.json()["size"], 8);
    auto c = run({"orbit", "count-free-line", "-n", "3"}).json();
    EXPECT_EQ(c["count"], 8);
    auto big = run({"orbit", "count-free-line", "-n", "60"}).json();
    EXPECT_TRUE(big["count"].is_string());
}

TEST(Cli, ContourSwapReplays) {
    for (auto [from, to] : {std::pair{"[0,0]", "[1,1]"}, std::pair{"[0,0]", "[1,0]"}}) {
        auto s = run({"contour", "swap"}, std::string(R"({"shape":"square","pattern":{"rect":[4,3]},"from":)") + from +
                                               ",\"to\":" + to + "}");
        ASSERT_EQ(s.code, 0) << s.err;
        auto r = run({"replay"}, s.out);
        ASSERT_EQ(r.code, 0) << r.err;
        EXPECT_EQ(r.json()["pattern"], s.json()["end"]);
    }
}

TEST(Cli, TepCommands) {
    std::string base = R"({"rule":{"kind":"ledrappier"},"domain":{"triangle":3},"pattern":{"line":3})";
    EXPECT_TRUE(run({"tep", "basis"}, base + "}").json()["basis"].get<bool>());
    EXPECT_FALSE(run({"tep", "check-indep"}, R"({"rule":{"kind":"ledrappier"},"domain":{"triangle":3},"pattern":[[0,0],[1,0],[0,1]]})")
                     .json()["independent"]
                     .get<bool>());
    auto c = run({"tep", "compile-perms"}, base + R"(,"target":[[0,0],[0,1],[0,2]]})");
    ASSERT_EQ(c.code, 0) << c.err;
    EXPECT_TRUE(c.json()["matches_bijection"].get<bool>());
    EXPECT_LE(c.json()["max_cells"].get<int>(), 2);
}

TEST(Cli, ServeProtocol) {
    std::string req = R"({"op":"legal_moves","id":1,"pattern":[[0,0],[1,0]]}
{"op":"apply","pattern":[[0,0],[1,0]],"move":{"g":[0,0],"from":[1,0],"to":[0,1]}}

not json
{"op":"path","shape":"square","pattern":[[0,0],[1,1]]}
{"op":"frobnicate"}
)";
    auto r = run({"serve"}, req);
    EXPECT_EQ(r.code, 0);
    std::istringstream lines(r.out);
    std::vector<ojson> res;
    for (std::string l; std::getline(lines, l);) res.push_back(ojson::parse(l));
    ASSERT_EQ(res.size(), 5u);
    EXPECT_EQ(res[0]["id"], 1);
    EXPECT_FALSE(res[0]["moves"].empty());
    EXPECT_EQ(res[1]["pattern"], ojson::parse("[[0,0],[0,1]]"));
    EXPECT_EQ(res[2]["kind"], "usage");
    EXPECT_TRUE(res[3]["ok"].get<bool>());
    EXPECT_FALSE(res[4]["ok"].get<bool>());
}

TEST(Cli, OutputIsDeterministic) {
    std::string doc = R"({"pattern":[[0,0],[1,0],[0,1],[1,1],[3,0],[2,2]]})";
    EXPECT_EQ(run({"triangle", "path"}, doc).out, run({"triangle", "path"}, doc).out);
}
