#include <cstdio>
#include <exception>
#include <fstream>

#include <CLI11.hpp>

#include "crossdrop/core/error.hpp"
#include "crossdrop/sim/event_log.hpp"
#include "crossdrop/sim/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Deterministic scenario runner"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a scenario against an in-process hub and write its event log");
  std::string scenario_path;
  std::string out_path;
  int tick_hz = 60;
  run->add_option("--scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--tick-hz", tick_hz, "Virtual clock rate")->check(CLI::PositiveNumber);
  run->add_option("--out", out_path, "Output NDJSON log")->required();

  auto* verify = app.add_subcommand("verify", "Compare a log with a golden log");
  std::string log_path;
  std::string golden_path;
  verify->add_option("--log", log_path, "Log to check")->required();
  verify->add_option("--golden", golden_path, "Reference log")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const auto scenario = crossdrop::sim::load_scenario(scenario_path);
      const auto text = crossdrop::sim::serialize_log(crossdrop::sim::run_scenario(scenario, tick_hz));
      std::ofstream out(out_path, std::ios::binary);
      out << text;
      if (!out) {
        std::fprintf(stderr, "sim: cannot write %s\n", out_path.c_str());
        return 1;
      }
      return 0;
    }
    const auto diff = crossdrop::sim::verify_log(log_path, golden_path);
    if (diff.empty()) {
      return 0;
    }
    std::fputs(diff.rendered.c_str(), stdout);
    return 1;
  } catch (const crossdrop::Error& e) {
    std::fprintf(stderr, "sim: %s\n", e.what());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "sim: %s\n", e.what());
  }
  return 1;
}
