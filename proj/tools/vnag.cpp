#include "vnag/cli/experiments.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitOther = 1;

}  // namespace

int main(int argc, char** argv) {
  using namespace vnag::cli;

  CLI::App app{"Variational analysis of accelerated gradient flows"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  const std::map<std::string, std::function<OutputSet(const ExperimentConfig&)>> runners{
      {"simulate", run_simulate},
      {"second-variation", run_second_variation},
      {"classify", run_classify},
      {"reproduce", run_reproduce},
  };
  const std::map<std::string, std::string> help{
      {"simulate", "Integrate the damped flow and check its Euler-Lagrange residual"},
      {"second-variation", "Evaluate second variations of perturbations by quadrature and closed form"},
      {"classify", "Classify the flow's path as minimizer or saddle via conjugate points"},
      {"reproduce", "Reproduce a figure or experiment (fig1, fig2, fig3, unbounded, poly)"},
  };
  for (const auto& [name, runner] : runners) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--out", out_dir, "Output directory")->required();
    sub->add_option("--seed", seed, "Seed overriding the config value");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const auto start = std::chrono::steady_clock::now();
    const ExperimentConfig cfg = load_config(config_path, seed);
    const OutputSet outputs = runners.at(name)(cfg);
    outputs.commit(out_dir);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& [file, content] : outputs.files()) std::cout << out_dir << "/" << file << "\n";
    std::printf("%s finished in %.3f s\n", name.c_str(), seconds);
    return 0;
  } catch (const vnag::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::domain_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
}
