// qrec: run while-language programs, compute interval expectations and run
// the randomized verification suites. All output is JSON.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qrec/commands.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qrec::Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw qrec::Error(path + ": " + e.what());
  }
}

void emit(const nlohmann::json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw qrec::Error("cannot write '" + out_path + "'");
    out << text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum while-programs over partial density operators"};
  app.require_subcommand(1);

  qrec::cli::CliConfig cfg;
  std::string out_path;
  std::size_t max_iter = cfg.fixpoint.max_iterations;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    cmd->add_option("--max-iter", max_iter, "Loop iteration cap")->capture_default_str();
    cmd->add_option("--trace-tol", cfg.fixpoint.trace_tol, "Chain convergence threshold")->capture_default_str();
    cmd->add_option("--psd-tol", cfg.tol.psd, "Positivity tolerance")->capture_default_str();
    cmd->add_option("--out", out_path, "Also write the JSON report to this file");
  };

  std::string program_path, input_path;
  auto* run = app.add_subcommand("run", "Run a program and print its RunReport");
  run->add_option("program", program_path, "Program source file")->required();
  run->add_option("--input", input_path, "Input partial density operator (JSON)");
  add_common(run);

  std::string observable_path, state_path;
  auto* expect = app.add_subcommand("expect", "Interval expectation of an observable");
  expect->add_option("observable", observable_path, "Hermitian matrix (JSON)")->required();
  expect->add_option("state", state_path, "Partial density operator (JSON)")->required();
  add_common(expect);

  std::string suite;
  std::vector<std::size_t> dims{3, 4};
  std::size_t trials = 100;
  bool corrupt = false;
  auto* verify = app.add_subcommand("verify", "Run a randomized verification suite");
  verify->add_option("suite", suite, "gleason | dcpo | interval | qlang")
      ->required()
      ->check(CLI::IsMember(qrec::verify::suite_names()));
  verify->add_option("--dims", dims, "Dimensions to test (2..16)")->delimiter(',')->capture_default_str();
  verify->add_option("--trials", trials, "Trials per dimension")->capture_default_str()->check(CLI::PositiveNumber);
  verify->add_flag("--corrupt-chain", corrupt, "Negative control: feed the dcpo suite a non-monotone chain");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qrec::cli::ExitCode::failure;
  }

  try {
    cfg.fixpoint.max_iterations = max_iter;
    qrec::cli::CommandResult result;
    if (*run) {
      std::optional<nlohmann::json> input;
      if (!input_path.empty()) input = read_json(input_path);
      result = qrec::cli::cmd_run(read_file(program_path), input, cfg);
    } else if (*expect) {
      result = qrec::cli::cmd_expect(read_json(observable_path), read_json(state_path), cfg);
    } else {
      result = qrec::cli::cmd_verify(suite, dims, trials, cfg, corrupt);
    }
    emit(result.output, out_path);
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qrec::cli::ExitCode::failure;
  }
}
