#include "cylev/scenario.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;

namespace {

int run_command(const std::string& config_arg, const cylev::RunOverrides& overrides,
                const std::string& out_dir) {
  cylev::Json config;
  try {
    if (cylev::is_bundled_scenario(config_arg)) {
      config = cylev::bundled_scenario(config_arg);
    } else {
      std::ifstream in(config_arg);
      if (!in) {
        std::cerr << "error: cannot open config '" << config_arg << "'\n";
        return 2;
      }
      std::ostringstream buf;
      buf << in.rdbuf();
      config = cylev::parse_config_text(buf.str());
    }
    cylev::validate_config(config);
  } catch (const cylev::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  cylev::RunResult result;
  try {
    result = cylev::run_scenario(config, overrides);
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 1;
  }

  const fs::path out(out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) {
    std::cerr << "error: cannot create output directory '" << out_dir << "'\n";
    return 2;
  }
  {
    std::ofstream f(out / "summary.json");
    f << result.summary.dump(2) << "\n";
  }
  for (const auto& [stem, body] : result.reports) {
    std::ofstream f(out / (stem + ".json"));
    f << body.dump(2) << "\n";
  }
  for (const auto& [stem, content] : result.csvs) {
    std::ofstream f(out / (stem + ".csv"));
    f << content;
  }

  for (const auto& check : result.summary.at("checks"))
    std::cout << (check.at("pass").get<bool>() ? "PASS" : "FAIL") << "  "
              << check.at("id").get<std::string>() << "\n";
  std::cout << result.summary.at("passed").get<std::size_t>() << "/"
            << result.summary.at("total").get<std::size_t>() << " checks passed; reports in "
            << out.string() << "\n";
  return result.all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and verification suites for cylindrical Levy processes"};
  app.require_subcommand(1);

  std::string config_arg;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  std::size_t n_paths = 0;
  int threads = 0;
  bool seed_set = false, paths_set = false, threads_set = false;

  auto* run = app.add_subcommand("run", "Run a scenario config (file path or bundled id)");
  run->add_option("config", config_arg, "Config file or bundled scenario id")->required();
  run->add_option("--seed", seed, "Override the config seed")->each([&](const std::string&) {
    seed_set = true;
  });
  run->add_option("--paths", n_paths, "Override the number of Monte Carlo paths")
      ->each([&](const std::string&) { paths_set = true; });
  run->add_option("--out", out_dir, "Output directory for reports and CSVs");
  run->add_option("--threads", threads, "Worker thread count (0 = hardware)")
      ->each([&](const std::string&) { threads_set = true; });

  auto* list = app.add_subcommand("list", "List bundled scenarios");

  std::string describe_id;
  auto* describe = app.add_subcommand("describe", "Show a bundled scenario's config");
  describe->add_option("id", describe_id, "Bundled scenario id")->required();

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (const auto& info : cylev::list_scenarios())
      std::cout << info.id << "  -  " << info.description << "\n";
    return 0;
  }
  if (describe->parsed()) {
    try {
      const auto scenarios = cylev::list_scenarios();
      for (const auto& info : scenarios)
        if (info.id == describe_id) std::cout << "# " << info.description << "\n";
      std::cout << cylev::bundled_scenario(describe_id).dump(2) << "\n";
      return 0;
    } catch (const cylev::ConfigError& e) {
      std::cerr << e.what() << "\n";
      return 2;
    }
  }

  cylev::RunOverrides overrides;
  if (seed_set) overrides.seed = seed;
  if (paths_set) overrides.n_paths = n_paths;
  if (threads_set) overrides.threads = threads;
  return run_command(config_arg, overrides, out_dir);
}
