#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "qsynth/runstore.hpp"
#include "row_a.hpp"
#include "stub_server.hpp"
#include "support.hpp"

using namespace qsynth;
namespace fs = std::filesystem;

namespace {

struct Invocation {
    int status = 0;
    std::string out;
    std::string err;
};

Invocation qsynth_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "qsynth");
    std::ostringstream out, err;
    Invocation r;
    r.status = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

bool contains(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("qsynth-cli-") + info->name() + "-" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name)) << text;
        return path(name);
    }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, eval_prints_score_and_purities) {
    const auto r = qsynth_cli({"eval", "--circuit", testkit::fixture_path("green_box_1.txt"), "--evaluator", "factored"});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "q = 0.8000"));
    EXPECT_TRUE(contains(r.out, "qubits: 25, gates: 25"));
    EXPECT_TRUE(contains(r.out, "purities:"));
}

TEST_F(CliTest, eval_infers_or_takes_the_register_size) {
    const std::string file = write("bell.txt", "[('H', [0]), ('CNOT', [0, 1])]\n");
    EXPECT_TRUE(contains(qsynth_cli({"eval", "--circuit", file}).out, "q = 1.0000"));
    EXPECT_TRUE(contains(qsynth_cli({"eval", "--circuit", file, "--qubits", "4"}).out, "q = 0.5000"));
    const auto too_small = qsynth_cli({"eval", "--circuit", file, "--qubits", "1"});
    EXPECT_NE(too_small.status, 0);
}

TEST_F(CliTest, errors_are_reported_with_nonzero_status) {
    const auto missing = qsynth_cli({"eval", "--circuit", path("nope.txt")});
    EXPECT_EQ(missing.status, 2);
    EXPECT_TRUE(contains(missing.err, "qsynth: "));
    const auto bad = qsynth_cli({"eval", "--circuit", write("bad.txt", "[('XX', [0])]")});
    EXPECT_EQ(bad.status, 2);
    EXPECT_TRUE(contains(bad.err, "unknown-gate")) << bad.err;
    EXPECT_NE(qsynth_cli({"frobnicate"}).status, 0);
    EXPECT_NE(qsynth_cli({}).status, 0);
    EXPECT_NE(qsynth_cli({"random", "--qubits", "3"}).status, 0);
}

TEST_F(CliTest, random_is_reproducible) {
    const auto a = qsynth_cli({"random", "--qubits", "5", "--gates", "7", "--seed", "3", "--out", path("a.txt")});
    const auto b = qsynth_cli({"random", "--qubits", "5", "--gates", "7", "--seed", "3", "--out", path("b.txt")});
    ASSERT_EQ(a.status, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    std::ifstream in(path("a.txt"));
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_EQ(text, serialize(random_circuit(5, 7, AngleSet::standard(), 3)) + "\n");
}

TEST_F(CliTest, synth_hillclimb_uses_the_full_budget) {
    const auto r = qsynth_cli({"synth", "--qubits", "6", "--gates", "8", "--queries", "3", "--steps", "15", "--proposer",
                               "hillclimb", "--seed", "4", "--out", path("run.json")});
    ASSERT_EQ(r.status, 0) << r.err;
    const RunLogFile run = read_run(path("run.json"));
    if (!run.result.early_stopped) EXPECT_EQ(run.result.evaluations, 45);
    EXPECT_LE(run.result.evaluations, 45);
    EXPECT_TRUE(contains(r.out, "evaluations: "));

    const auto v = qsynth_cli({"replay-verify", path("run.json")});
    EXPECT_EQ(v.status, 0) << v.out;
    EXPECT_TRUE(contains(v.out, "OK: "));
}

TEST_F(CliTest, synth_into_a_directory_names_the_file_by_config) {
    const auto r = qsynth_cli({"synth", "--qubits", "4", "--gates", "4", "--queries", "1", "--steps", "2", "--proposer",
                               "hillclimb", "--out", dir_.string()});
    ASSERT_EQ(r.status, 0) << r.err;
    int runs = 0;
    for (const auto& e : fs::directory_iterator(dir_)) runs += e.path().filename().string().starts_with("run-");
    EXPECT_EQ(runs, 1);
}

TEST_F(CliTest, synth_replay_then_table_and_verify) {
    std::string script;
    for (const auto& entry : testkit::row_a::script()) script += entry + "\n---\n";
    const std::string script_file = write("script.txt", script);
    const std::string init = write("init.txt", serialize(testkit::row_a::start()));
    const auto r = qsynth_cli({"synth", "--qubits", "25", "--gates", "25", "--queries", "3", "--steps", "15",
                               "--proposer", "replay", "--script", script_file, "--init", init, "--feedback", "--label",
                               "A", "--out", path("a.json")});
    ASSERT_EQ(r.status, 0) << r.err;
    const auto t = qsynth_cli({"table", path("a.json")});
    ASSERT_EQ(t.status, 0) << t.err;
    EXPECT_TRUE(contains(t.out, "A    | 0.47    | 0.47→0.48 | 0.48→0.66 | 0.66→1")) << t.out;

    // tamper with one recorded score
    std::ifstream in(path("a.json"));
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    RunLogFile run = from_json_text(text);
    *run.result.queries[2].steps[0].q = 0.81;
    write_run(path("a.json"), run);
    const auto v = qsynth_cli({"replay-verify", path("a.json")});
    EXPECT_EQ(v.status, 3);
    EXPECT_TRUE(contains(v.out, "MISMATCH query 3 step 1")) << v.out;
}

TEST_F(CliTest, synth_replay_requires_a_script) {
    const auto r = qsynth_cli({"synth", "--qubits", "4", "--gates", "4", "--queries", "1", "--steps", "1", "--proposer",
                               "replay", "--out", path("x.json")});
    EXPECT_EQ(r.status, 2);
    EXPECT_TRUE(contains(r.err, "--script")) << r.err;
}

TEST_F(CliTest, synth_llm_against_a_stub_endpoint) {
    testkit::StubServer server;
    server.set_fallback([](const std::string&) {
        return testkit::StubServer::Reply{200, testkit::chat_response("<python>[('H', [0]), ('CNOT', [0, 1]), ('H', [2]), ('H', [3])]</python>.")};
    });
    const auto r = qsynth_cli({"synth", "--qubits", "4", "--gates", "4", "--queries", "2", "--steps", "3", "--proposer",
                               "llm", "--model", "stub", "--base-url", server.base_url(), "--feedback", "--retries", "0",
                               "--out", path("llm.json")});
    ASSERT_EQ(r.status, 0) << r.err;
    const RunLogFile run = read_run(path("llm.json"));
    EXPECT_NEAR(run.result.best_q, 0.5, 1e-12);
    EXPECT_EQ(run.result.config.proposer_params.at("model"), "stub");
    EXPECT_EQ(server.requests().size(), 6u);
}

TEST_F(CliTest, baseline_reports_each_run) {
    const auto r = qsynth_cli({"baseline", "--qubits", "6", "--gates", "8", "--budget", "20", "--runs", "3", "--seed", "1"});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "seed | initial q | best q | evaluations"));
    EXPECT_TRUE(contains(r.out, "max best q over 3 runs"));
    EXPECT_TRUE(contains(r.out, " | 20\n"));
}

TEST_F(CliTest, analyze_reports_components) {
    const auto r = qsynth_cli({"analyze", "--circuit", testkit::fixture_path("green_box_2.txt"), "--qubits", "25"});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "clifford: no"));
    EXPECT_TRUE(contains(r.out, "{6,18}  ROTATED_PAIR"));
}
