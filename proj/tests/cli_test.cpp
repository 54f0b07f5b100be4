#include <gtest/gtest.h>

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "qrec/commands.hpp"
#include "qrec/serialize.hpp"

using namespace qrec;
using namespace qrec::cli;
using nlohmann::json;

TEST(Serialize, MatrixRoundTrip) {
  const ComplexMatrix m{{1.0, Complex(0, -2)}, {Complex(0, 2), 3.5}};
  const auto back = matrix_from_json(to_json(m));
  EXPECT_EQ(max_abs_diff(m, back), 0.0);
}

TEST(Serialize, ImaginaryPartIsOptional) {
  const auto m = matrix_from_json(json::parse(R"({"dim":2,"re":[[1,0],[0,-1]]})"));
  EXPECT_EQ(m(1, 1), Complex(-1.0));
}

TEST(Serialize, MalformedMatrices) {
  EXPECT_THROW(matrix_from_json(json::parse(R"({"re":[[1]]})")), Error);
  EXPECT_THROW(matrix_from_json(json::parse(R"({"dim":2,"re":[[1,0]]})")), Error);
  EXPECT_THROW(matrix_from_json(json::parse(R"({"dim":2,"re":[[1,0],[0]]})")), Error);
  EXPECT_THROW(matrix_from_json(json::parse(R"({"dim":1,"re":[["a"]]})")), Error);
  EXPECT_THROW(matrix_from_json(json::parse(R"({"dim":0,"re":[]})")), Error);
}

TEST(Serialize, Interval) {
  const auto a = interval_from_json(json::parse(R"({"lo":-1,"hi":2})"));
  EXPECT_EQ(a, CompactInterval(-1.0, 2.0));
  EXPECT_EQ(to_json(a)["hi"], 2.0);
  EXPECT_THROW(interval_from_json(json::parse(R"({"lo":3,"hi":2})")), Error);
}

TEST(CmdRun, FairCoinReport) {
  const auto r = cmd_run("qubit q; h q; while q in |1> { h q; }", std::nullopt, {});
  EXPECT_EQ(r.exit_code, ExitCode::ok);
  EXPECT_TRUE(r.output["converged"].get<bool>());
  EXPECT_LT(r.output["residual"].get<double>(), 1e-9);
  EXPECT_EQ(r.output["output"]["dim"], 2);
  EXPECT_EQ(r.output["iterations_per_loop"].size(), 1u);
}

TEST(CmdRun, ExplicitInput) {
  const std::optional<json> input = json::parse(R"({"dim":2,"re":[[0,0],[0,0.5]]})");
  const auto r = cmd_run("qubit q; x q;", input, {});
  EXPECT_DOUBLE_EQ(r.output["output"]["re"][0][0].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(r.output["residual"].get<double>(), 0.5);
}

TEST(CmdRun, NonConvergedExitCode) {
  CliConfig cfg;
  cfg.fixpoint.max_iterations = 5;
  const auto r = cmd_run("qubit q; h q; while q in |1> { h q; }", std::nullopt, cfg);
  EXPECT_EQ(r.exit_code, ExitCode::not_converged);
  EXPECT_FALSE(r.output["converged"].get<bool>());
}

TEST(CmdRun, Errors) {
  EXPECT_THROW(cmd_run("qubit q; y r;", std::nullopt, {}), qlang::ParseError);
  const std::optional<json> wrong_dim = json::parse(R"({"dim":4,"re":[[1,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]})");
  EXPECT_THROW(cmd_run("qubit q; skip;", wrong_dim, {}), DimensionError);
  const std::optional<json> heavy = json::parse(R"({"dim":2,"re":[[1,0],[0,1]]})");
  EXPECT_THROW(cmd_run("qubit q; skip;", heavy, {}), TraceError);
  CliConfig bad;
  bad.fixpoint.trace_tol = -1.0;
  EXPECT_THROW(cmd_run("qubit q; skip;", std::nullopt, bad), Error);
}

TEST(CmdExpect, PauliZOnPartialState) {
  const auto z = json::parse(R"({"dim":2,"re":[[1,0],[0,-1]],"im":[[0,0],[0,0]]})");
  const auto f = json::parse(R"({"dim":2,"re":[[0.5,0],[0,0.25]]})");
  const auto r = cmd_expect(z, f, {});
  EXPECT_EQ(r.exit_code, ExitCode::ok);
  EXPECT_NEAR(r.output["lo"].get<double>(), 0.0, 1e-15);
  EXPECT_NEAR(r.output["hi"].get<double>(), 0.5, 1e-15);
  EXPECT_NEAR(r.output["e0"].get<double>(), 0.25, 1e-15);
  EXPECT_NEAR(r.output["missing"].get<double>(), 0.25, 1e-15);
  const auto skew = json::parse(R"({"dim":2,"re":[[0,1],[0,0]]})");
  EXPECT_THROW(cmd_expect(skew, f, {}), NotHermitianError);
}

TEST(CmdVerify, DeterministicForFixedSeed) {
  CliConfig cfg;
  cfg.seed = 7;
  const auto a = cmd_verify("gleason", {2, 3}, 10, cfg);
  const auto b = cmd_verify("gleason", {2, 3}, 10, cfg);
  EXPECT_EQ(a.output.dump(), b.output.dump());
  EXPECT_EQ(a.exit_code, ExitCode::ok);
  cfg.seed = 8;
  const auto c = cmd_verify("gleason", {2, 3}, 10, cfg);
  EXPECT_NE(a.output.dump(), c.output.dump());
}

TEST(CmdVerify, ReportShape) {
  const auto r = cmd_verify("interval", {2}, 5, {});
  EXPECT_EQ(r.output["suite"], "interval");
  EXPECT_TRUE(r.output["passed"].get<bool>());
  for (const auto& inv : r.output["invariants"]) {
    EXPECT_EQ(inv["checks"], 5);
    EXPECT_TRUE(inv.contains("worst_deviation"));
  }
}

TEST(CmdVerify, CorruptedChainIsCaught) {
  const auto r = cmd_verify("dcpo", {3}, 4, {}, true);
  EXPECT_EQ(r.exit_code, ExitCode::failure);
  bool saw_witness = false;
  for (const auto& inv : r.output["invariants"])
    for (const auto& f : inv["failures"]) saw_witness = saw_witness || f.contains("witness_index");
  EXPECT_TRUE(saw_witness);
}

TEST(CmdVerify, ArgumentErrors) {
  EXPECT_THROW(cmd_verify("gleason", {1}, 5, {}), Error);
  EXPECT_THROW(cmd_verify("gleason", {17}, 5, {}), Error);
  EXPECT_THROW(cmd_verify("gleason", {3}, 0, {}), Error);
  EXPECT_THROW(cmd_verify("nope", {3}, 1, {}), Error);
}
