#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lggrad_cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Radiomic feature extraction and codeletion classifier pipeline"};
  app.require_subcommand(1);

  std::string manifest, config, out, features, model_out, report_out, model, test_out, dir;
  int cases = 30;
  std::uint64_t seed = 1;

  auto* extract = app.add_subcommand("extract", "Extract 120 radiomic features per case");
  extract->add_option("--manifest", manifest, "Manifest CSV")->required();
  extract->add_option("--config", config, "Pipeline config JSON")->required();
  extract->add_option("--out", out, "Feature CSV to write")->required();

  auto* train = app.add_subcommand("train", "Fit scaler, PCA, SMOTE and the MLP");
  train->add_option("--features", features, "Feature CSV")->required();
  train->add_option("--config", config, "Pipeline config JSON")->required();
  train->add_option("--model-out", model_out, "Model JSON to write")->required();
  train->add_option("--report-out", report_out, "Report JSON to write")->required();
  train->add_option("--test-split-out", test_out, "Optional CSV of the held-out cases");

  auto* evaluate = app.add_subcommand("evaluate", "Score a feature CSV with a stored model");
  evaluate->add_option("--model", model, "Model JSON")->required();
  evaluate->add_option("--features", features, "Feature CSV")->required();
  evaluate->add_option("--report-out", report_out, "Report JSON to write")->required();

  auto* phantom = app.add_subcommand("phantom", "Write a synthetic phantom suite");
  phantom->add_option("--out", dir, "Output directory")->required();
  phantom->add_option("--cases", cases, "Number of cases")->check(CLI::PositiveNumber);
  phantom->add_option("--seed", seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  using namespace lggrad::cli;
  if (*extract) return cmd_extract(manifest, config, out, std::cerr);
  if (*train) {
    std::optional<std::filesystem::path> split_out;
    if (!test_out.empty()) split_out = test_out;
    return cmd_train(features, config, model_out, report_out, split_out, std::cerr);
  }
  if (*evaluate) return cmd_evaluate(model, features, report_out, std::cerr);
  if (*phantom) return cmd_phantom(dir, cases, seed, std::cerr);
  return kExitError;
}
