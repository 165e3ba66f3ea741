#include "lggrad/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

#include <fmt/format.h>
#include <json.hpp>

namespace lggrad {

using nlohmann::json;

namespace {

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, fmt::format("cannot open '{}'", path.string()));
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, fmt::format("cannot write '{}'", path.string()));
  out << text;
}

json vec_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json mat_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) row[static_cast<std::size_t>(c)] = m(r, c);
    rows.push_back(row);
  }
  return rows;
}

Eigen::VectorXd json_vec(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Eigen::MatrixXd json_mat(const json& j, Eigen::Index cols_if_empty = 0) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  const auto cols = rows.empty() ? cols_if_empty : static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<Eigen::Index>(rows[r].size()) != cols) {
      throw Error(Errc::ParseError, "ragged matrix in model document");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)];
    }
  }
  return m;
}

json config_json(const PipelineConfig& cfg) {
  json bins;
  if (cfg.bins.mode == BinSpec::Mode::FixedWidth) {
    bins = {{"mode", "fixed_width"}, {"width", cfg.bins.width}};
  } else {
    bins = {{"mode", "fixed_count"}, {"count", cfg.bins.count}};
  }
  return {
      {"binning", bins},
      {"pca_k", cfg.pca_k},
      {"split", {{"test_fraction", cfg.test_fraction}, {"seed", cfg.split_seed}}},
      {"smote", {{"k_neighbors", cfg.smote_k}}},
      {"train",
       {{"epochs", cfg.train.epochs},
        {"batch_size", cfg.train.batch_size},
        {"learning_rate", cfg.train.learning_rate},
        {"beta1", cfg.train.beta1},
        {"beta2", cfg.train.beta2},
        {"epsilon", cfg.train.epsilon},
        {"seed", cfg.train.seed},
        {"shuffle", cfg.train.shuffle}}},
      {"threshold", cfg.threshold},
  };
}

template <typename T>
void read_opt(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

PipelineConfig config_from(const json& j) {
  if (!j.is_object()) throw Error(Errc::ParseError, "config must be a JSON object");
  PipelineConfig cfg;
  if (j.contains("binning")) {
    const auto& b = j.at("binning");
    const auto mode = b.value("mode", std::string("fixed_width"));
    if (mode == "fixed_width") {
      cfg.bins.mode = BinSpec::Mode::FixedWidth;
      read_opt(b, "width", cfg.bins.width);
    } else if (mode == "fixed_count") {
      cfg.bins.mode = BinSpec::Mode::FixedCount;
      read_opt(b, "count", cfg.bins.count);
    } else {
      throw Error(Errc::ParseError, fmt::format("unknown binning mode '{}'", mode));
    }
  }
  read_opt(j, "pca_k", cfg.pca_k);
  if (j.contains("split")) {
    read_opt(j.at("split"), "test_fraction", cfg.test_fraction);
    read_opt(j.at("split"), "seed", cfg.split_seed);
  }
  if (j.contains("smote")) read_opt(j.at("smote"), "k_neighbors", cfg.smote_k);
  if (j.contains("train")) {
    const auto& t = j.at("train");
    read_opt(t, "epochs", cfg.train.epochs);
    read_opt(t, "batch_size", cfg.train.batch_size);
    read_opt(t, "learning_rate", cfg.train.learning_rate);
    read_opt(t, "beta1", cfg.train.beta1);
    read_opt(t, "beta2", cfg.train.beta2);
    read_opt(t, "epsilon", cfg.train.epsilon);
    read_opt(t, "seed", cfg.train.seed);
    read_opt(t, "shuffle", cfg.train.shuffle);
  }
  read_opt(j, "threshold", cfg.threshold);
  return cfg;
}

json metric_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json evaluation_json(const Evaluation& e) {
  json predictions = json::array();
  for (std::size_t n = 0; n < e.case_ids.size(); ++n) {
    predictions.push_back({{"case_id", e.case_ids[n]},
                           {"probability", e.probabilities[n]},
                           {"predicted", e.predicted[n]},
                           {"actual", e.actual[n]}});
  }
  return {
      {"cases", e.case_ids.size()},
      {"confusion_matrix",
       {{"tp", e.confusion.tp}, {"fp", e.confusion.fp}, {"fn", e.confusion.fn}, {"tn", e.confusion.tn}}},
      {"metrics",
       {{"sensitivity", metric_json(e.metrics.sensitivity)},
        {"specificity", metric_json(e.metrics.specificity)},
        {"accuracy", metric_json(e.metrics.accuracy)},
        {"precision", metric_json(e.metrics.precision)}}},
      {"predictions", predictions},
  };
}

std::string percent(const std::optional<double>& v) {
  return v ? fmt::format("{:.1f}%", 100.0 * *v) : std::string("n/a");
}

}  // namespace

void PipelineConfig::validate() const {
  bins.validate();
  if (pca_k < 1) throw Error(Errc::InvalidArgument, "pca_k must be >= 1");
  if (smote_k < 1) throw Error(Errc::InvalidArgument, "smote k_neighbors must be >= 1");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(Errc::InvalidArgument, "test_fraction must lie in (0, 1)");
  }
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(Errc::InvalidArgument, "threshold must lie in [0, 1]");
  }
  train.validate();
}

std::uint64_t PipelineConfig::smote_seed() const noexcept {
  return split_seed ^ 0x5DEECE66DULL;
}

PipelineConfig parse_config(const std::string& json_text) {
  PipelineConfig cfg;
  try {
    cfg = config_from(json::parse(json_text));
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, fmt::format("config: {}", e.what()));
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) { return parse_config(read_text(path)); }

std::string config_to_json(const PipelineConfig& cfg) { return config_json(cfg).dump(2) + "\n"; }

std::string model_to_json(const PipelineModel& model) {
  json layers = json::array();
  for (const auto& layer : model.mlp.layers) {
    layers.push_back({{"activation", layer.activation == Activation::Relu ? "relu" : "sigmoid"},
                      {"weights", mat_json(layer.weights)},
                      {"bias", vec_json(layer.bias)}});
  }
  const json doc = {
      {"format_version", kModelFormatVersion},
      {"feature_names", model.feature_names},
      {"scaler",
       {{"mean", vec_json(model.scaler.mean)},
        {"std", vec_json(model.scaler.std)},
        {"constant", model.scaler.constant}}},
      {"pca",
       {{"k", model.pca.k},
        {"mean", vec_json(model.pca.mean)},
        {"components", mat_json(model.pca.components)},
        {"explained_variance", vec_json(model.pca.explained_variance)},
        {"explained_variance_ratio", vec_json(model.pca.explained_variance_ratio)}}},
      {"mlp", {{"layer_sizes", model.mlp.layer_sizes()}, {"layers", layers}}},
      {"config", config_json(model.config)},
      {"seeds", {{"split", model.config.split_seed}, {"train", model.config.train.seed}}},
  };
  return doc.dump(2) + "\n";
}

PipelineModel model_from_json(const std::string& json_text) {
  try {
    const auto doc = json::parse(json_text);
    const auto version = doc.value("format_version", std::string());
    if (version != kModelFormatVersion) {
      throw Error(Errc::ModelVersionMismatch,
                  fmt::format("expected '{}', found '{}'", kModelFormatVersion, version));
    }
    PipelineModel model;
    model.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    const auto& s = doc.at("scaler");
    model.scaler.mean = json_vec(s.at("mean"));
    model.scaler.std = json_vec(s.at("std"));
    model.scaler.constant = s.at("constant").get<std::vector<bool>>();
    const auto& p = doc.at("pca");
    model.pca.k = p.at("k").get<int>();
    model.pca.mean = json_vec(p.at("mean"));
    model.pca.components = json_mat(p.at("components"), model.pca.mean.size());
    model.pca.explained_variance = json_vec(p.at("explained_variance"));
    model.pca.explained_variance_ratio = json_vec(p.at("explained_variance_ratio"));
    for (const auto& layer : doc.at("mlp").at("layers")) {
      DenseLayer dense;
      const auto act = layer.at("activation").get<std::string>();
      if (act != "relu" && act != "sigmoid") {
        throw Error(Errc::ParseError, fmt::format("unknown activation '{}'", act));
      }
      dense.activation = act == "relu" ? Activation::Relu : Activation::Sigmoid;
      dense.weights = json_mat(layer.at("weights"));
      dense.bias = json_vec(layer.at("bias"));
      model.mlp.layers.push_back(std::move(dense));
    }
    model.config = config_from(doc.at("config"));

    const auto n = static_cast<Eigen::Index>(model.feature_names.size());
    if (model.scaler.mean.size() != n || model.scaler.std.size() != n ||
        static_cast<Eigen::Index>(model.scaler.constant.size()) != n || model.pca.mean.size() != n ||
        model.pca.components.cols() != n || model.pca.components.rows() != model.pca.k) {
      throw Error(Errc::ParseError, "model document shapes are inconsistent");
    }
    model.mlp.validate();
    if (model.mlp.input_width() != model.pca.k) {
      throw Error(Errc::ParseError, "network input width differs from PCA k");
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, fmt::format("model: {}", e.what()));
  }
}

void save_model(const std::filesystem::path& path, const PipelineModel& model) {
  write_text(path, model_to_json(model));
}

PipelineModel load_model(const std::filesystem::path& path) { return model_from_json(read_text(path)); }

TrainingOutcome fit_pipeline(const FeatureTable& table, const PipelineConfig& cfg) {
  stage("config", [&] { cfg.validate(); return 0; });
  TrainingOutcome out;

  const auto split = stage("split", [&] {
    table.validate();
    return stratified_split(table.labels, cfg.test_fraction, cfg.split_seed);
  });
  const FeatureTable train_table = table.select_rows(split.train);
  const FeatureTable test_table = table.select_rows(split.test);
  out.train_case_ids = train_table.case_ids;
  out.test_case_ids = test_table.case_ids;

  PipelineModel& model = out.model;
  model.feature_names = table.feature_names;
  model.config = cfg;

  const Eigen::MatrixXd scaled = stage("scaler", [&] {
    model.scaler = fit_scaler(train_table.values);
    return apply_scaler(model.scaler, train_table.values);
  });
  const Eigen::MatrixXd projected = stage("pca", [&] {
    model.pca = fit_pca(scaled, cfg.pca_k);
    return apply_pca(model.pca, scaled);
  });
  out.explained_variance_ratio = model.pca.explained_variance_ratio;

  const SmoteResult balanced = stage("smote", [&] {
    return smote(projected, train_table.labels, {cfg.smote_k, cfg.smote_seed()});
  });
  out.smote.train_cases = train_table.rows();
  out.smote.positives = static_cast<std::size_t>(
      std::count(train_table.labels.begin(), train_table.labels.end(), 1));
  out.smote.negatives = out.smote.train_cases - out.smote.positives;
  out.smote.synthetic = balanced.synthetic.size();
  out.smote.minority_label = balanced.minority_label;
  out.smote.balanced_rows = static_cast<std::size_t>(balanced.data.rows());
  out.smote.balanced_cols = static_cast<std::size_t>(balanced.data.cols());

  stage("train", [&] {
    const auto sizes = default_layer_sizes(cfg.pca_k);
    auto trained = train(init_mlp(cfg.train.seed, sizes), balanced.data, balanced.labels, cfg.train);
    model.mlp = std::move(trained.model);
    out.history = std::move(trained.history);
    const auto fitted = predict(model.mlp, balanced.data, cfg.threshold);
    std::size_t correct = 0;
    for (std::size_t n = 0; n < fitted.size(); ++n) correct += fitted[n] == balanced.labels[n];
    out.balanced_train_accuracy = static_cast<double>(correct) / static_cast<double>(fitted.size());
    return 0;
  });

  out.test = stage("evaluate", [&] { return evaluate_pipeline(model, test_table); });
  return out;
}

Evaluation evaluate_pipeline(const PipelineModel& model, const FeatureTable& table) {
  const FeatureTable aligned = table.with_columns(model.feature_names);
  aligned.validate();
  const Eigen::MatrixXd projected =
      apply_pca(model.pca, apply_scaler(model.scaler, aligned.values));
  const Eigen::VectorXd p = forward(model.mlp, projected);

  Evaluation e;
  e.case_ids = aligned.case_ids;
  e.actual = aligned.labels;
  e.probabilities.assign(p.data(), p.data() + p.size());
  for (double prob : e.probabilities) e.predicted.push_back(prob >= model.config.threshold ? 1 : 0);
  e.confusion = confusion_matrix(e.predicted, e.actual);
  e.metrics = metrics(e.confusion);
  return e;
}

std::string training_report_json(const TrainingOutcome& o) {
  std::vector<double> pct;
  double cumulative = 0.0;
  for (Eigen::Index c = 0; c < o.explained_variance_ratio.size(); ++c) {
    pct.push_back(100.0 * o.explained_variance_ratio[c]);
    cumulative += pct.back();
  }
  std::vector<int> epochs;
  for (std::size_t e = 0; e < o.history.loss.size(); ++e) epochs.push_back(static_cast<int>(e + 1));
  const json doc = {
      {"kind", "training"},
      {"format_version", kModelFormatVersion},
      {"pca",
       {{"k", o.model.pca.k},
        {"explained_variance_ratio", vec_json(o.explained_variance_ratio)},
        {"explained_variance_percent", pct},
        {"cumulative_percent", cumulative}}},
      {"split",
       {{"train_cases", o.train_case_ids.size()},
        {"test_cases", o.test_case_ids.size()},
        {"train_case_ids", o.train_case_ids},
        {"test_case_ids", o.test_case_ids}}},
      {"smote",
       {{"train_positive", o.smote.positives},
        {"train_negative", o.smote.negatives},
        {"minority_label", o.smote.minority_label},
        {"synthetic_rows", o.smote.synthetic},
        {"balanced_rows", o.smote.balanced_rows},
        {"balanced_cols", o.smote.balanced_cols}}},
      {"history", {{"epoch", epochs}, {"loss", o.history.loss}, {"accuracy", o.history.accuracy}}},
      {"train_accuracy", o.balanced_train_accuracy},
      {"test", evaluation_json(o.test)},
  };
  return doc.dump(2) + "\n";
}

std::string evaluation_report_json(const Evaluation& evaluation) {
  json doc = {{"kind", "evaluation"}, {"format_version", kModelFormatVersion}};
  doc.update(evaluation_json(evaluation));
  return doc.dump(2) + "\n";
}

std::string evaluation_report_text(const Evaluation& e) {
  std::string out;
  out += fmt::format("{:<12} {:>10} {:>14} {:>14} {:>10}\n", "", "precision", "specificity",
                     "sensitivity", "accuracy");
  out += fmt::format("{:<12} {:>10} {:>14} {:>14} {:>10}\n\n", "MLP", percent(e.metrics.precision),
                     percent(e.metrics.specificity), percent(e.metrics.sensitivity),
                     percent(e.metrics.accuracy));
  out += fmt::format("{:<26} {:>18} {:>22}\n", fmt::format("test cases = {}", e.confusion.total()),
                     "codeleted (actual)", "non-codeleted (actual)");
  out += fmt::format("{:<26} {:>18} {:>22}\n", "codeleted (predicted)", e.confusion.tp, e.confusion.fp);
  out += fmt::format("{:<26} {:>18} {:>22}\n", "non-codeleted (predicted)", e.confusion.fn,
                     e.confusion.tn);
  return out;
}

std::string training_report_text(const TrainingOutcome& o) {
  std::string out = "Principal components (% of variance)\n ";
  double cumulative = 0.0;
  for (Eigen::Index c = 0; c < o.explained_variance_ratio.size(); ++c) {
    const double pct = 100.0 * o.explained_variance_ratio[c];
    cumulative += pct;
    out += fmt::format(" PCA{}={:.0f}", c + 1, pct);
  }
  out += fmt::format("  (total {:.0f}%)\n\n", cumulative);

  out += fmt::format("Training partition: {} cases ({} codeleted / {} non-codeleted), test: {}\n",
                     o.smote.train_cases, o.smote.positives, o.smote.negatives,
                     o.test_case_ids.size());
  out += fmt::format("SMOTE: {} synthetic rows for label {}, balanced matrix {} x {}\n\n",
                     o.smote.synthetic, o.smote.minority_label, o.smote.balanced_rows,
                     o.smote.balanced_cols);

  if (!o.history.loss.empty()) {
    out += fmt::format("{:>8} {:>10} {:>10} {:>10} {:>10}\n", "epochs", "acc start", "acc end",
                       "loss start", "loss end");
    out += fmt::format("{:>8} {:>9.1f}% {:>9.1f}% {:>10.4f} {:>10.4f}\n\n", o.history.loss.size(),
                       100.0 * o.history.accuracy.front(), 100.0 * o.history.accuracy.back(),
                       o.history.loss.front(), o.history.loss.back());
  }
  out += fmt::format("Balanced training accuracy after training: {:.1f}%\n\n",
                     100.0 * o.balanced_train_accuracy);
  out += evaluation_report_text(o.test);
  return out;
}

}  // namespace lggrad
