#include "fixtures.hpp"
#include "stj/json_io.hpp"

#include <gtest/gtest.h>

using namespace stj;
using stj::io::json;

TEST(JsonIo, NumbersRoundTo15Digits) {
    EXPECT_EQ(io::num(0.1 + 0.2).get<double>(), 0.3);
    EXPECT_EQ(io::num(std::nan("")).get<std::string>(), "nan");
    EXPECT_EQ(io::num(-INFINITY).get<std::string>(), "-inf");
    EXPECT_EQ(io::to_json(cd(1.5, -2.0)).dump(), "[1.5,-2.0]");
}

TEST(JsonIo, MatrixRoundtripAndNestedRows) {
    std::mt19937_64 rng(121);
    const CMat A = fx::gaussian(rng, 2, 3);
    const json j = io::to_json(A);
    EXPECT_EQ(j["rows"], 2);
    EXPECT_EQ(j["cols"], 3);
    EXPECT_LT(fro(io::matrix_from_json(j) - A), 1e-13);
    const CMat B = io::matrix_from_json(json::parse("[[1, [0, 2]], [3, 4]]"));
    EXPECT_EQ(B(0, 1), cd(0, 2));
    EXPECT_EQ(B(1, 0), cd(3, 0));
}

TEST(JsonIo, MalformedInputsAreParseErrors) {
    EXPECT_THROW(io::matrix_from_json(json::parse("{\"rows\":2,\"cols\":2,\"data\":[1,2,3]}")), io::ParseError);
    EXPECT_THROW(io::matrix_from_json(json::parse("[[1,2],[3]]")), io::ParseError);
    EXPECT_THROW(io::matrix_from_json(json::parse("[[\"a\"]]")), io::ParseError);
    EXPECT_THROW(io::sequence_from_json(json::parse("{\"s\":[[[1]]]}")), io::ParseError);
    EXPECT_THROW(io::sequence_from_json(json::parse("{\"alpha\":0,\"s\":[]}")), io::ParseError);
    EXPECT_THROW(io::sequence_from_json(json::parse("{\"alpha\":0,\"q\":3,\"s\":[[[1]]]}")), io::ParseError);
    EXPECT_THROW(io::parse_text("{", "input"), io::ParseError);
    EXPECT_THROW(io::mode_from_string("lt"), io::ParseError);
}

TEST(JsonIo, NonHermitianSequenceIsPrecondition) {
    EXPECT_THROW(io::sequence_from_json(json::parse("{\"alpha\":0,\"s\":[[[1,1],[0,1]]]}")), PreconditionError);
}

TEST(JsonIo, SequenceAndMeasureRoundtrip) {
    std::mt19937_64 rng(122);
    const auto mu = fx::measure(rng, -0.5, 2, 3, 1);
    const auto seq = moments(mu, 3);
    const auto s2 = io::sequence_from_json(io::to_json(seq));
    for (int j = 0; j <= 3; ++j) EXPECT_LT(fro(s2.s[j] - seq.s[j]), 1e-12 * std::max(1.0, fro(seq.s[j])));
    EXPECT_EQ(s2.alpha, seq.alpha);
    const auto mu2 = io::measure_from_json(io::to_json(mu));
    ASSERT_EQ(mu2.atoms.size(), mu.atoms.size());
    EXPECT_LT(std::abs(mu2.atoms[1].x - mu.atoms[1].x), 1e-14);
}

TEST(JsonIo, FunctionForms) {
    const json pm = json::parse(R"({"measure":{"alpha":0,"atoms":[{"x":1,"w":[[1,0],[0,0]]}]}})");
    const auto f = io::function_from_json(pm);
    const cd z(0.0, 2.0);
    EXPECT_NEAR(std::abs(f(z)(0, 0) - 1.0 / (1.0 - z)), 0.0, 1e-15);
    const auto g = io::function_from_json(io::to_json(f));
    EXPECT_LT(fro(g(z) - f(z)), 1e-14);
    const auto c = io::function_from_json(json::parse(R"({"constant":[[2]]})"));
    EXPECT_EQ(c(z)(0, 0), cd(2, 0));
}

TEST(JsonIo, PairShorthandAndFullForm) {
    const json j = json::parse(R"({"function":{"constant":[[0,0],[0,0]]}})");
    const auto p = io::pair_from_json(j, 0.5);
    EXPECT_EQ(p.alpha, 0.5);
    EXPECT_LT(fro(p.psi(cd(1, 1)) - identity(2)), 1e-15);
    const auto back = io::pair_from_json(io::to_json(p), 0.0);
    EXPECT_EQ(back.alpha, 0.5);
    EXPECT_TRUE(equivalent(p, back, 1e-12));
}

TEST(JsonIo, ClassReportFields) {
    CMat s0 = zeros(2, 2), s1 = CMat::Constant(2, 2, cd(1, 0));
    s0(0, 0) = 1;
    const json j = io::to_json(classify(MomentSequence(0.0, {s0, s1})));
    EXPECT_EQ(j["Kgg"], true);
    EXPECT_EQ(j["D"], false);
    EXPECT_EQ(j["Kgge_candidate"], "no");
    EXPECT_TRUE(j.contains("rank_top"));
}

TEST(JsonIo, DumpIsSortedAndDeterministic) {
    const json j = {{"b", 1}, {"a", io::num(1.0 / 3.0)}};
    const std::string s = io::dump(j);
    EXPECT_LT(s.find("\"a\""), s.find("\"b\""));
    EXPECT_EQ(s, io::dump(json::parse(s)));
    EXPECT_NE(s.find("0.333333333333333"), std::string::npos);
}
