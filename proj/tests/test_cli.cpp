// Runs the stj binary on the fixtures in tests/data and checks exit codes and output.
#include "stj/json_io.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <unistd.h>
#include <sys/wait.h>

using stj::io::json;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(STJ_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, ""};
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    const int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

// Runs with the given text on stdin, read from a temporary file.
Run run_stdin(const std::string& args, const std::string& input) {
    char path[] = "/tmp/stj_cli_XXXXXX";
    const int fd = mkstemp(path);
    if (fd < 0) return {-1, ""};
    FILE* f = fdopen(fd, "w");
    std::fputs(input.c_str(), f);
    std::fclose(f);
    const Run r = run(args + " - < " + path);
    std::remove(path);
    return r;
}

std::string data(const std::string& name) { return std::string(STJ_DATA_DIR) + "/" + name; }

stj::CMat matrix(const json& j) { return stj::io::matrix_from_json(j); }

}  // namespace

TEST(Cli, ClassifyEscapingFirstMoment) {
    const auto r = run("classify " + data("escaping_first_moment.json"));
    ASSERT_EQ(r.code, 0);
    const json j = json::parse(r.out);
    EXPECT_EQ(j["Kgg"], true);
    EXPECT_EQ(j["D"], false);
    EXPECT_EQ(j["Kgge_candidate"], "no");
}

TEST(Cli, ClassifyNegativeBase) {
    const auto r = run("classify " + data("negative_base.json"));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(json::parse(r.out)["Kgg"], false);
}

TEST(Cli, ClassifyOracleSequenceIsCandidate) {
    const auto o = run("oracle " + data("random_spec.json"));
    ASSERT_EQ(o.code, 0);
    const json seq = json::parse(o.out)["sequence"];
    const auto r = run_stdin("classify", seq.dump());
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(json::parse(r.out)["Kgge_candidate"], "yes");
}

TEST(Cli, VerifyEscapingFirstMomentFails) {
    const auto r = run("verify " + data("escaping_first_moment_verify.json"));
    EXPECT_EQ(r.code, 4);
    const json j = json::parse(r.out);
    EXPECT_EQ(j["passed"], false);
    stj::CMat expect(2, 2);
    expect << 0, 1, 1, 1;
    EXPECT_LT(stj::fro(matrix(j["top_difference"]) - expect), 1e-6);
}

TEST(Cli, SolveCompletelyDegenerate) {
    const auto r = run("solve " + data("degenerate_solve.json"));
    ASSERT_EQ(r.code, 0);
    const json j = json::parse(r.out);
    EXPECT_EQ(j["case"], "CompletelyDegenerate");
    EXPECT_EQ(j["verification_report"]["passed"], true);
    stj::CMat s0 = stj::zeros(2, 2);
    s0(0, 0) = 1;
    ASSERT_FALSE(j["samples"].empty());
    for (const auto& s : j["samples"]) {
        const stj::cd z(s["z"][0].get<double>(), s["z"][1].get<double>());
        EXPECT_LT(stj::fro(matrix(s["F"]) + s0 / z), 1e-12);
    }
}

TEST(Cli, SolveNondegenerateEqMode) {
    const auto r = run("solve " + data("nondegenerate_solve.json"));
    ASSERT_EQ(r.code, 0);
    const json j = json::parse(r.out);
    EXPECT_EQ(j["case"], "NonDegenerate");
    EXPECT_EQ(j["verification_report"]["mode"], "eq");
    EXPECT_TRUE(j["rational_function"].contains("num"));
}

TEST(Cli, PolyDegenerateProduct) {
    const auto r = run("poly " + data("escaping_first_moment.json"));
    ASSERT_EQ(r.code, 0);
    const auto d = run_stdin("poly", "{\"alpha\":0,\"s\":[[[1,0],[0,0]],[[0,0],[0,0]]]}");
    ASSERT_EQ(d.code, 0);
    const json V = json::parse(d.out)["V"];
    const auto P = stj::io::polynomial_from_json(V);
    stj::CMat s0 = stj::zeros(2, 2);
    s0(0, 0) = 1;
    const stj::cd z(0.5, 1.0);
    stj::CMat expect = stj::zeros(4, 4);
    expect.topRightCorner(2, 2) = -z * s0;
    expect.bottomRightCorner(2, 2) = z * z * stj::identity(2);
    EXPECT_LT(stj::fro(P(z) - expect), 1e-14);
    EXPECT_TRUE(V["blocks"].contains("ne"));
}

TEST(Cli, SchurDiagonal) {
    const auto r = run("schur -k 1 " + data("escaping_first_moment.json"));
    ASSERT_EQ(r.code, 0);
    const json j = json::parse(r.out);
    ASSERT_EQ(j["diagonal"].size(), 2u);
    stj::CMat s0 = stj::zeros(2, 2);
    s0(0, 0) = 1;
    EXPECT_LT(stj::fro(matrix(j["diagonal"][1]) - s0), 1e-12);
    EXPECT_EQ(run("schur -k 5 " + data("escaping_first_moment.json")).code, 3);
}

TEST(Cli, OracleDeterministicAndConstantMoments) {
    const auto a = run("oracle " + data("random_spec.json"));
    const auto b = run("oracle " + data("random_spec.json"));
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, run("--seed 8 oracle " + data("random_spec.json")).out);
    const auto p = run("oracle " + data("point_mass_at_one.json"));
    ASSERT_EQ(p.code, 0);
    const json seq = json::parse(p.out)["sequence"];
    ASSERT_EQ(seq["s"].size(), 4u);
    for (const auto& s : seq["s"]) EXPECT_LT(stj::fro(matrix(s) - stj::identity(2)), 1e-15);
}

TEST(Cli, ParseErrorsExitTwo) {
    EXPECT_EQ(run("classify " + data("malformed.json")).code, 2);
    EXPECT_EQ(run("classify " + data("does_not_exist.json")).code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("--mode neq solve " + data("degenerate_solve.json")).code, 2);
    EXPECT_EQ(run("--grid 1,x solve " + data("degenerate_solve.json")).code, 2);
}

TEST(Cli, PreconditionExitThree) {
    // a parameter outside the admissible class
    const auto r = run_stdin("solve",
                             "{\"sequence\":{\"alpha\":0,\"s\":[[[-1,0],[0,-1]]]},"
                       "\"parameter\":{\"function\":{\"constant\":[[0,0],[0,0]]}}}");
    EXPECT_EQ(r.code, 3);
}
