#include "lggrad_cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <thread>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "lggrad/error.hpp"
#include "lggrad/features.hpp"
#include "lggrad/pipeline.hpp"
#include "lggrad/table.hpp"
#include "lggrad_cli/manifest.hpp"
#include "lggrad_cli/phantom.hpp"

namespace lggrad::cli {

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, fmt::format("cannot write '{}'", path.string()));
  out << text;
}

/// Adds the generated_at field to a report document.
std::string stamp(const std::string& report_json) {
  auto doc = nlohmann::json::parse(report_json);
  doc["generated_at"] = utc_timestamp();
  return doc.dump(2) + "\n";
}

void fail(std::ostream& log, std::string_view stage, const std::exception& e) {
  log << fmt::format("error [stage {}]: {}\n", stage, e.what());
}

struct CaseResult {
  std::vector<double> values;
  std::string error;
};

}  // namespace

std::filesystem::path text_report_path(const std::filesystem::path& json_report) {
  auto path = json_report;
  path.replace_extension(".txt");
  if (path == json_report) path += ".txt";
  return path;
}

int cmd_extract(const std::filesystem::path& manifest_path, const std::filesystem::path& config_path,
                const std::filesystem::path& out_csv, std::ostream& log) {
  std::vector<ManifestRow> manifest;
  PipelineConfig config;
  try {
    manifest = read_manifest(manifest_path);
  } catch (const std::exception& e) {
    fail(log, "manifest-parse", e);
    return kExitError;
  }
  try {
    config = load_config(config_path);
  } catch (const std::exception& e) {
    fail(log, "config", e);
    return kExitError;
  }

  std::vector<CaseResult> results(manifest.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (auto n = next.fetch_add(1); n < manifest.size(); n = next.fetch_add(1)) {
      const auto& row = manifest[n];
      try {
        const auto image = read_volume(row.image_path);
        const auto mask = read_mask(row.mask_path);
        results[n].values = extract_all(image, mask, row.roi_label, config.bins).values;
      } catch (const std::exception& e) {
        results[n].error = e.what();
      }
    }
  };
  const auto threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, manifest.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  std::vector<std::size_t> ok;
  for (std::size_t n = 0; n < manifest.size(); ++n) {
    if (results[n].error.empty()) {
      ok.push_back(n);
    } else {
      log << fmt::format("case {} skipped: {}\n", manifest[n].case_id, results[n].error);
    }
  }
  std::sort(ok.begin(), ok.end(),
            [&](auto a, auto b) { return manifest[a].case_id < manifest[b].case_id; });

  FeatureTable table;
  table.feature_names = feature_column_names();
  table.values.resize(static_cast<Eigen::Index>(ok.size()), static_cast<Eigen::Index>(kFeatureCount));
  for (std::size_t r = 0; r < ok.size(); ++r) {
    const auto& row = manifest[ok[r]];
    table.case_ids.push_back(row.case_id);
    table.labels.push_back(row.class_label);
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
      table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = results[ok[r]].values[c];
    }
  }
  try {
    write_feature_csv(out_csv, table);
  } catch (const std::exception& e) {
    fail(log, "write", e);
    return kExitError;
  }
  return ok.size() == manifest.size() ? kExitOk : kExitPartial;
}

int cmd_train(const std::filesystem::path& features_csv, const std::filesystem::path& config_path,
              const std::filesystem::path& model_out, const std::filesystem::path& report_out,
              const std::optional<std::filesystem::path>& test_split_out, std::ostream& log) {
  FeatureTable table;
  PipelineConfig config;
  try {
    table = read_feature_csv(features_csv);
  } catch (const std::exception& e) {
    fail(log, "csv-parse", e);
    return kExitError;
  }
  try {
    config = load_config(config_path);
  } catch (const std::exception& e) {
    fail(log, "config", e);
    return kExitError;
  }

  TrainingOutcome outcome;
  try {
    outcome = fit_pipeline(table, config);
  } catch (const StageError& e) {
    fail(log, e.stage(), e);
    return kExitError;
  } catch (const std::exception& e) {
    fail(log, "train", e);
    return kExitError;
  }

  try {
    save_model(model_out, outcome.model);
    write_text(report_out, stamp(training_report_json(outcome)));
    write_text(text_report_path(report_out), training_report_text(outcome));
    if (test_split_out) {
      std::vector<std::size_t> rows;
      for (std::size_t r = 0; r < table.rows(); ++r) {
        if (std::find(outcome.test_case_ids.begin(), outcome.test_case_ids.end(),
                      table.case_ids[r]) != outcome.test_case_ids.end()) {
          rows.push_back(r);
        }
      }
      write_feature_csv(*test_split_out, table.select_rows(rows));
    }
  } catch (const std::exception& e) {
    fail(log, "write", e);
    return kExitError;
  }
  return kExitOk;
}

int cmd_evaluate(const std::filesystem::path& model_path, const std::filesystem::path& features_csv,
                 const std::filesystem::path& report_out, std::ostream& log) {
  PipelineModel model;
  FeatureTable table;
  try {
    model = load_model(model_path);
  } catch (const std::exception& e) {
    fail(log, "model-load", e);
    return kExitError;
  }
  try {
    table = read_feature_csv(features_csv);
  } catch (const std::exception& e) {
    fail(log, "csv-parse", e);
    return kExitError;
  }
  try {
    const auto evaluation = evaluate_pipeline(model, table);
    write_text(report_out, stamp(evaluation_report_json(evaluation)));
    write_text(text_report_path(report_out), evaluation_report_text(evaluation));
  } catch (const std::exception& e) {
    fail(log, "evaluate", e);
    return kExitError;
  }
  return kExitOk;
}

int cmd_phantom(const std::filesystem::path& out_dir, int cases, std::uint64_t seed,
                std::ostream& log) {
  try {
    const auto manifest = write_phantom_suite(out_dir, cases, seed);
    log << fmt::format("wrote {} phantom cases; manifest {}\n", cases, manifest.string());
  } catch (const std::exception& e) {
    fail(log, "phantom", e);
    return kExitError;
  }
  return kExitOk;
}

}  // namespace lggrad::cli
