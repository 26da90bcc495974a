#include <gtest/gtest.h>

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "lqn/cli.hpp"
#include "support.hpp"

using namespace lqn;

namespace {

std::string networks(const std::string& name) { return std::string(LQN_NETWORKS_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CliResult {
    int code;
    std::string out, err;
};

CliResult cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t c = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++c;
    return c;
}

std::string parse_error_message(const std::string& text) {
    try {
        parse_network(text);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::parse_error);
        return e.what();
    }
    ADD_FAILURE() << "parsed";
    return {};
}

}  // namespace

TEST(Parse, TritterFixtureMatchesPreset) { EXPECT_EQ(parse_network(slurp(networks("tritter.json"))), preset_tritter()); }

TEST(Parse, N5FixtureHasFourteenEdges) {
    const auto spec = parse_network(slurp(networks("n5_example.json")));
    EXPECT_EQ(spec.n, 5u);
    EXPECT_EQ(spec.transitions.size(), 14u);
}

TEST(Parse, PolarAmplitudes) {
    const auto spec = parse_network(R"({"n":1,"mode":"design","edges":[{"from":1,"to":1,"amp":{"r":2,"theta":0.5},"color":"up"}]})");
    EXPECT_EQ(spec.transitions[0].amplitude, std::polar(2.0, 0.5));
    EXPECT_EQ(spec.statistics, Statistics::boson);
}

TEST(Parse, Defaults) {
    const auto spec = parse_network(R"({"n":1,"edges":[{"from":1,"to":1,"amp":{"re":1,"im":0},"color":"down"}]})");
    EXPECT_EQ(spec.mode, NormalizationMode::strict);
    EXPECT_EQ(spec.transitions[0].color, Color::down);
}

TEST(Parse, ErrorsCarryPointerOrLine) {
    EXPECT_NE(parse_error_message(R"({"n":1,"edges":[{"from":1,"to":1,"amp":{"re":1,"im":0},"color":"left"}]})")
                  .find("/edges/0/color"),
              std::string::npos);
    EXPECT_NE(parse_error_message("{\n\"n\": 1,\n\"edges\": [\n}").find("line 4"), std::string::npos);
    EXPECT_NE(parse_error_message(R"({"edges":[]})").find("\"n\""), std::string::npos);
    EXPECT_NE(parse_error_message(R"({"n":1,"edges":[{"from":0,"to":1,"amp":{"re":1,"im":0},"color":"up"}]})")
                  .find("/edges/0/from"),
              std::string::npos);
    EXPECT_NE(parse_error_message(R"({"n":1,"edges":[{"from":1,"to":1,"amp":{"re":1,"r":1},"color":"up"}]})")
                  .find("/edges/0/amp"),
              std::string::npos);
    EXPECT_NE(parse_error_message(R"({"version":2,"n":1,"edges":[]})").find("/version"), std::string::npos);
    EXPECT_NE(parse_error_message(R"({"n":1,"statistics":"anyon","edges":[]})").find("/statistics"), std::string::npos);
}

TEST(Parse, ValidationErrorsPropagate) {
    try {
        parse_network(R"({"n":1,"edges":[{"from":1,"to":1,"amp":{"re":0.5,"im":0},"color":"up"}]})");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::row_not_normalized);
    }
}

TEST(Serialize, RoundTripIsBitExact) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        auto spec = oracle::random_network(1 + trial % 7, rng, 0.5, trial % 2 ? Statistics::fermion : Statistics::boson);
        if (trial % 3 == 0) spec.mode = NormalizationMode::design;
        const auto back = parse_network(serialize_network(spec));
        ASSERT_EQ(back.transitions.size(), spec.transitions.size());
        for (std::size_t k = 0; k < back.transitions.size(); ++k) {
            const auto x = back.transitions[k].amplitude, y = spec.transitions[k].amplitude;
            EXPECT_EQ(std::memcmp(&x, &y, sizeof x), 0);
        }
        EXPECT_EQ(back, spec);
    }
}

TEST(Serialize, StateJsonSortedAndRoundTrips) {
    const auto s = normalize(compute_state(preset_tritter()));
    const auto j = state_to_json(s);
    EXPECT_EQ(j["terms"][0]["ket"], "duu");
    EXPECT_EQ(j["terms"][2]["ket"], "uud");
    const auto back = state_from_json(Json::parse(j.dump()));
    EXPECT_EQ(back.terms, s.terms);
    EXPECT_EQ(back.postselect_probability, s.postselect_probability);
    EXPECT_TRUE(state_to_json(compute_state(preset_tritter()))["postselect_probability"].is_null());
}

TEST(Serialize, ReportJson) {
    const auto r = analyze(parse_network(slurp(networks("n5_example.json"))), 3);
    const auto j = report_to_json(r);
    EXPECT_EQ(j["lemma1"][0]["detector"], 3);
    EXPECT_EQ(j["lemma1"][0]["color"], "up");
    EXPECT_EQ(j["lemma2_partition"].dump(), "[[1,3,4],[2,5]]");
    EXPECT_EQ(j["numeric_finest_partition"].dump(), "[[1,4],[2,5],[3]]");
    EXPECT_EQ(j["theorem1"]["verdict"], "cannot_be_genuine");
    EXPECT_EQ(j["numeric_seed"], 3);
}

TEST(Format, Partition) { EXPECT_EQ(format_partition({{0, 3}, {2}}), "(X1,X4)|(X3)"); }

TEST(Dot, ColorsAndViews) {
    const auto spec = parse_network(slurp(networks("n5_example.json")));
    const auto d = export_dot(spec, {DotView::directed, false, std::nullopt});
    EXPECT_EQ(d.rfind("digraph", 0), 0u);
    EXPECT_EQ(count_of(d, " -> "), 14u);
    EXPECT_EQ(count_of(d, "color=red"), 7u);
    EXPECT_EQ(count_of(d, "color=blue"), 7u);
    EXPECT_EQ(count_of(d, "w1 -> w1 "), 1u);

    const auto pm = export_dot(spec, {DotView::pm_diagram, false, std::nullopt});
    EXPECT_EQ(count_of(pm, " -> "), 11u);
    EXPECT_EQ(count_of(pm, "w2 -> w3 "), 0u);

    const auto bb = export_dot(spec, {DotView::bipartite, true, 0});
    EXPECT_EQ(bb.rfind("graph", 0), 0u);
    EXPECT_EQ(count_of(bb, " -- "), 14u);
    EXPECT_EQ(count_of(bb, "rank=same"), 2u);
    EXPECT_EQ(count_of(bb, "penwidth=3"), 5u);
    EXPECT_EQ(count_of(bb, "label=\"+"), 14u);
    EXPECT_THROW(export_dot(spec, {DotView::bipartite, false, 6}), Error);
}

TEST(Dot, EmptyNetworkHasIsolatedNodes) {
    NetworkSpec empty{3, Statistics::boson, NormalizationMode::design, {}};
    const auto d = export_dot(empty, {DotView::bipartite, false, std::nullopt});
    EXPECT_EQ(count_of(d, "shape=box"), 3u);
    EXPECT_EQ(count_of(d, " -- "), 0u);
}

TEST(Dot, Deterministic) {
    const auto spec = parse_network(slurp(networks("dicke4.json")));
    for (auto view : {DotView::bipartite, DotView::directed, DotView::pm_diagram}) {
        EXPECT_EQ(export_dot(spec, {view, true, 1}), export_dot(parse_network(serialize_network(spec)), {view, true, 1}));
    }
}

TEST(Cli, ComputeTritter) {
    const auto r = cli({"compute", networks("tritter.json")});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(count_of(r.out, "⟩"), 3u);
    EXPECT_NE(r.out.find("0.111111"), std::string::npos);
    const auto j = cli({"compute", networks("tritter.json"), "--json"});
    EXPECT_EQ(j.code, 0);
    const auto doc = Json::parse(j.out);
    EXPECT_NEAR(doc["postselect_probability"].get<double>(), 1.0 / 9.0, 1e-12);
    EXPECT_EQ(j.out.find("↑"), std::string::npos);
}

TEST(Cli, AnalyzeN5) {
    const auto r = cli({"analyze", networks("n5_example.json"), "--numeric", "5"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("(X1,X4)|(X2,X5)|(X3)"), std::string::npos);
    EXPECT_NE(r.out.find("(X1,X3,X4)|(X2,X5)"), std::string::npos);
    const auto bare = cli({"analyze", networks("n5_example.json"), "--numeric"});
    EXPECT_NE(bare.out.find("seed 1"), std::string::npos);
    const auto j = cli({"analyze", networks("n5_example.json"), "--json"});
    EXPECT_TRUE(Json::parse(j.out)["numeric_finest_partition"].is_null());
}

TEST(Cli, PmDiagram) {
    const auto r = cli({"pm-diagram", networks("n5_example.json")});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("removed:\n  (2,X1) down\n  (2,X3) down\n  (2,X4) down\n"), std::string::npos);
    EXPECT_EQ(cli({"pm-diagram", networks("n5_example.json"), "--dot"}).out.rfind("digraph", 0), 0u);
}

TEST(Cli, VerifyAllFixtures) {
    for (const char* f : {"tritter.json", "n5_example.json", "beamsplitter.json", "beamsplitter_fermion.json",
                          "cluster4.json", "ghz4.json", "w4_ring.json", "w5_star.json", "dicke4.json",
                          "dicke5_balanced.json"}) {
        const auto r = cli({"verify", networks(f)});
        EXPECT_EQ(r.code, 0) << f << r.err;
    }
}

TEST(Cli, DesignRoundTrips) {
    const auto r = cli({"design", "dicke", "--preset", "paper-n4"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(parse_network(r.out), design_dicke2(4, DickePreset::paper_n4));
    EXPECT_EQ(parse_network(cli({"design", "ghz", "--colors", "udu"}).out), design_ghz(3, parse_colors("udu")));
    EXPECT_EQ(parse_network(cli({"design", "w", "--n", "5", "--form", "ring"}).out), design_w(5, WForm::ring));
    EXPECT_EQ(parse_network(cli({"design", "cluster4", "--statistics", "fermion"}).out),
              design_cluster4(Statistics::fermion));
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(cli({}).code, 1);
    EXPECT_EQ(cli({"frobnicate"}).code, 1);
    EXPECT_EQ(cli({"design", "ghz", "--form", "blob"}).code, 1);
    EXPECT_EQ(cli({"dot", networks("tritter.json"), "--view", "xx"}).code, 1);
    EXPECT_EQ(cli({"dot", networks("tritter.json"), "--highlight", "0"}).code, 1);
    EXPECT_EQ(cli({"design", "dicke", "--n", "6", "--preset", "paper-n5"}).code, 2);
    EXPECT_EQ(cli({"design", "ghz", "--n", "4", "--colors", "ud"}).code, 2);
    EXPECT_EQ(cli({"compute", networks("does_not_exist.json")}).code, 2);
    EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Cli, ValidationExitCode) {
    const std::string path = ::testing::TempDir() + "bad_color.json";
    std::ofstream(path) << R"({"n":1,"edges":[{"from":1,"to":1,"amp":{"re":1,"im":0},"color":"left"}]})";
    const auto r = cli({"compute", path});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("ParseError"), std::string::npos);
}

TEST(Cli, ToleranceFromEnvironment) {
    const std::string path = ::testing::TempDir() + "loose.json";
    std::ofstream(path) << R"({"n":1,"edges":[{"from":1,"to":1,"amp":{"re":1.000001,"im":0},"color":"up"}]})";
    ::unsetenv("LQN_TOL");
    EXPECT_EQ(cli({"compute", path}).code, 2);
    ::setenv("LQN_TOL", "1e-5", 1);
    EXPECT_EQ(cli({"compute", path}).code, 0);
    ::unsetenv("LQN_TOL");
}
