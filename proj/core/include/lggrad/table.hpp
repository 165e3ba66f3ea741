#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace lggrad {

/// Cases x named features plus a binary label (1 = codeleted, the positive
/// class).
struct FeatureTable {
  std::vector<std::string> case_ids;
  std::vector<std::string> feature_names;
  Eigen::MatrixXd values;  ///< rows = cases, cols = features
  std::vector<int> labels;

  [[nodiscard]] std::size_t rows() const noexcept { return case_ids.size(); }
  [[nodiscard]] std::size_t cols() const noexcept { return feature_names.size(); }

  /// Throws unless shapes agree, names and ids are unique, values are finite
  /// and labels are 0/1.
  void validate() const;

  [[nodiscard]] FeatureTable select_rows(std::span<const std::size_t> rows) const;

  /// Columns re-ordered to `names`; throws FeatureNameMismatch unless the
  /// table holds exactly that set of names.
  [[nodiscard]] FeatureTable with_columns(std::span<const std::string> names) const;
};

/// Header `case_id,<feature...>,label`; the case_id and label columns may
/// appear at any position. Throws ParseError.
FeatureTable read_feature_csv(const std::filesystem::path& path);
FeatureTable parse_feature_csv(const std::string& text);

/// Floats are written with 17 significant digits.
void write_feature_csv(const std::filesystem::path& path, const FeatureTable& table);
std::string format_feature_csv(const FeatureTable& table);

}  // namespace lggrad
