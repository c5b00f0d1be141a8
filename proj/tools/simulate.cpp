// simulate: run a load or WAP-count sweep and write the per-run CSV.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lteu/config.hpp"
#include "lteu/error.hpp"
#include "lteu/multigame.hpp"
#include "lteu/sweep.hpp"

namespace {

std::vector<lteu::Mode> parse_modes(const std::string& csv) {
  std::vector<lteu::Mode> modes;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t end = std::min(csv.find(',', start), csv.size());
    const std::string item = csv.substr(start, end - start);
    const auto mode = lteu::parse_mode(item);
    if (!mode) throw lteu::ConfigError("unknown mode '" + item + "'");
    modes.push_back(*mode);
    start = end + 1;
  }
  return modes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LTE-U / WiFi coexistence sweep"};
  std::string config_path;
  std::string sweep_name;
  std::string modes_csv = "MULTI_GAME,SINGLE_GAME,LBT";
  std::string out_path;
  std::optional<std::uint64_t> seed_base;
  unsigned workers = 0;

  app.add_option("--config", config_path, "Scenario JSON")->required();
  app.add_option("--sweep", sweep_name, "load or nwap")
      ->required()
      ->check(CLI::IsMember({"load", "nwap"}));
  app.add_option("--modes", modes_csv, "Comma-separated modes");
  app.add_option("--out", out_path, "CSV output path, '-' for stdout")->required();
  app.add_option("--seed-base", seed_base, "First replication seed (default: config seed)");
  app.add_option("--threads", workers, "Worker threads (0 = all cores)");
  CLI11_PARSE(app, argc, argv);

  try {
    const lteu::ScenarioConfig config = lteu::load_config(config_path);
    const lteu::SweepSpec sweep =
        lteu::sweep_from_config(config, *lteu::parse_axis(sweep_name), parse_modes(modes_csv));

    lteu::SweepOptions options;
    options.seed_base = seed_base;
    options.workers = workers;
    const std::string csv = lteu::emit_csv(lteu::run_sweep(config, sweep, options));

    if (out_path == "-") {
      std::cout << csv;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw lteu::Error("cannot open " + out_path + " for writing");
      out << csv;
      if (!out.flush()) throw lteu::Error("failed writing " + out_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "simulate: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
