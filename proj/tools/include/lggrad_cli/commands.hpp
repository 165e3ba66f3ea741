#pragma once

#include <filesystem>
#include <optional>
#include <ostream>

namespace lggrad::cli {

/// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitPartial = 2;  ///< extract: some cases were skipped

/// Extracts 120 features per manifest row and writes the feature CSV, rows
/// ordered by case_id. Failing cases are logged to `log` and skipped.
int cmd_extract(const std::filesystem::path& manifest, const std::filesystem::path& config,
                const std::filesystem::path& out_csv, std::ostream& log);

/// split -> scaler -> PCA -> SMOTE -> train, then scores the held-out split.
/// Writes the model JSON, a JSON report, and a text report next to it
/// (`<report>.txt`). Optionally writes the held-out partition as CSV.
int cmd_train(const std::filesystem::path& features_csv, const std::filesystem::path& config,
              const std::filesystem::path& model_out, const std::filesystem::path& report_out,
              const std::optional<std::filesystem::path>& test_split_out, std::ostream& log);

/// Scores a feature CSV with a stored model; never refits anything.
int cmd_evaluate(const std::filesystem::path& model, const std::filesystem::path& features_csv,
                 const std::filesystem::path& report_out, std::ostream& log);

/// Writes a synthetic phantom suite and its manifest.
int cmd_phantom(const std::filesystem::path& out_dir, int cases, std::uint64_t seed,
                std::ostream& log);

/// Path of the text report written beside a JSON report.
std::filesystem::path text_report_path(const std::filesystem::path& json_report);

}  // namespace lggrad::cli
