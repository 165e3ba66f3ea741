#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lggrad/error.hpp"
#include "lggrad/metrics.hpp"
#include "lggrad/mlp.hpp"
#include "lggrad/roi.hpp"
#include "lggrad/table.hpp"
#include "lggrad/tabular.hpp"

namespace lggrad {

inline constexpr std::string_view kModelFormatVersion = "lggrad-pipeline/1";

/// Every tunable of extraction and training. All randomness derives from
/// split_seed (split and SMOTE) and train.seed (initialization and shuffles).
struct PipelineConfig {
  BinSpec bins;
  int pca_k = 8;
  int smote_k = 5;
  double test_fraction = 0.25;
  std::uint64_t split_seed = 42;
  TrainConfig train{.seed = 7};
  double threshold = 0.5;

  void validate() const;
  [[nodiscard]] std::uint64_t smote_seed() const noexcept;
};

/// Missing keys keep their defaults. Throws ParseError on malformed JSON or
/// wrongly typed values.
PipelineConfig parse_config(const std::string& json_text);
PipelineConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const PipelineConfig& cfg);

/// Everything needed to score new cases: fitted scaler and PCA, trained
/// network, and the training schema.
struct PipelineModel {
  std::vector<std::string> feature_names;
  ScalerModel scaler;
  PcaModel pca;
  MlpModel mlp;
  PipelineConfig config;
};

std::string model_to_json(const PipelineModel& model);
/// Throws ModelVersionMismatch when format_version differs, ParseError otherwise.
PipelineModel model_from_json(const std::string& json_text);
void save_model(const std::filesystem::path& path, const PipelineModel& model);
PipelineModel load_model(const std::filesystem::path& path);

struct Evaluation {
  std::vector<std::string> case_ids;
  std::vector<double> probabilities;
  std::vector<int> predicted;
  std::vector<int> actual;
  ConfusionMatrix confusion;
  MetricsReport metrics;
};

struct SmoteSummary {
  std::size_t train_cases = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t synthetic = 0;
  int minority_label = 1;
  std::size_t balanced_rows = 0;
  std::size_t balanced_cols = 0;
};

struct TrainingOutcome {
  PipelineModel model;
  std::vector<std::string> train_case_ids;
  std::vector<std::string> test_case_ids;
  Eigen::VectorXd explained_variance_ratio;
  SmoteSummary smote;
  TrainHistory history;
  double balanced_train_accuracy = 0.0;  ///< after training, on the balanced set
  Evaluation test;
};

/// The stage that failed, for diagnostics ("split", "scaler", "pca",
/// "smote", "train", "evaluate").
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.code(), stage + ": " + cause.what()), stage_(std::move(stage)) {}
  [[nodiscard]] const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Split, then fit scaler and PCA on the training partition only, then
/// SMOTE the projected training rows, then train the network and score the
/// held-out partition.
TrainingOutcome fit_pipeline(const FeatureTable& table, const PipelineConfig& cfg);

/// Applies the stored scaler, PCA and network. Columns are matched by name.
Evaluation evaluate_pipeline(const PipelineModel& model, const FeatureTable& table);

/// Machine-readable reports (no timestamp field; callers may add one).
std::string training_report_json(const TrainingOutcome& outcome);
std::string evaluation_report_json(const Evaluation& evaluation);

/// Plain-text tables: variance percentages, class balance, epoch history,
/// metrics and the confusion matrix.
std::string training_report_text(const TrainingOutcome& outcome);
std::string evaluation_report_text(const Evaluation& evaluation);

}  // namespace lggrad
