#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "motr/app/commands.hpp"

int main(int argc, char** argv) {
  using namespace motr::app;
  CLI::App app{"Derivative-free multiobjective trust-region solver"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "Run the solver on a manifest");
  std::string manifest;
  std::string out;
  int replicates = 1;
  solve->add_option("--manifest", manifest, "Manifest file")->required()->check(CLI::ExistingFile);
  solve->add_option("--out", out, "Output directory (overrides the manifest's 'output')");
  solve->add_option("--replicates", replicates, "Independent seeds to run concurrently")
      ->check(CLI::PositiveNumber);

  auto* metrics = app.add_subcommand("metrics", "GD and HV of a produced front");
  std::string produced;
  std::string front;
  std::string ref;
  metrics->add_option("--produced", produced, "CSV of produced objective vectors")
      ->required()
      ->check(CLI::ExistingFile);
  metrics->add_option("--front", front, "CSV of front samples")->required()->check(CLI::ExistingFile);
  metrics->add_option("--ref", ref, "HV reference point \"r1,...,rp\"");

  auto* problems = app.add_subcommand("problems", "Registered problems");
  problems->require_subcommand(1);
  problems->add_subcommand("list", "List registered problems");

  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a registered problem");
  std::string name;
  std::string x;
  evaluate->add_option("--problem", name, "Problem name")->required();
  evaluate->add_option("--x", x, "Decision vector \"c1,...,cn\"")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*solve) {
    return solve_command(manifest, out.empty() ? std::nullopt : std::optional<std::filesystem::path>(out),
                         replicates);
  }
  if (*metrics) {
    return metrics_command(produced, front, ref.empty() ? std::nullopt : std::optional<std::string>(ref),
                           std::cout);
  }
  if (*problems) return problems_list_command(std::cout);
  return evaluate_command(name, x, std::cout);
}
