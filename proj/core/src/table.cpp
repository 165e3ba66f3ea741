#include "lggrad/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

#include "lggrad/error.hpp"

namespace lggrad {

namespace {

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    auto field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.remove_suffix(1);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    out.emplace_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(std::string_view text, std::size_t line_no) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw Error(Errc::ParseError, fmt::format("line {}: bad number '{}'", line_no, text));
  }
  return value;
}

}  // namespace

void FeatureTable::validate() const {
  if (labels.size() != case_ids.size() || static_cast<std::size_t>(values.rows()) != rows() ||
      static_cast<std::size_t>(values.cols()) != cols()) {
    throw Error(Errc::ShapeMismatch, "feature table dimensions disagree");
  }
  if (std::set<std::string>(feature_names.begin(), feature_names.end()).size() != cols()) {
    throw Error(Errc::InvalidArgument, "duplicate feature column names");
  }
  if (std::set<std::string>(case_ids.begin(), case_ids.end()).size() != rows()) {
    throw Error(Errc::InvalidArgument, "duplicate case ids");
  }
  if (!values.allFinite()) throw Error(Errc::InvalidArgument, "feature table has NaN/Inf");
  for (int y : labels) {
    if (y != 0 && y != 1) throw Error(Errc::InvalidArgument, "labels must be 0 or 1");
  }
}

FeatureTable FeatureTable::select_rows(std::span<const std::size_t> picked) const {
  FeatureTable out;
  out.feature_names = feature_names;
  out.values.resize(static_cast<Eigen::Index>(picked.size()), values.cols());
  for (std::size_t r = 0; r < picked.size(); ++r) {
    const auto src = picked[r];
    if (src >= rows()) throw Error(Errc::InvalidArgument, "row index out of range");
    out.case_ids.push_back(case_ids[src]);
    out.labels.push_back(labels[src]);
    out.values.row(static_cast<Eigen::Index>(r)) = values.row(static_cast<Eigen::Index>(src));
  }
  return out;
}

FeatureTable FeatureTable::with_columns(std::span<const std::string> names) const {
  std::unordered_map<std::string, Eigen::Index> index;
  for (std::size_t c = 0; c < feature_names.size(); ++c) {
    index.emplace(feature_names[c], static_cast<Eigen::Index>(c));
  }
  std::vector<std::string> missing;
  for (const auto& name : names) {
    if (!index.contains(name)) missing.push_back(name);
  }
  if (!missing.empty() || names.size() != feature_names.size()) {
    std::string detail = missing.empty() ? std::string("unexpected extra columns")
                                         : fmt::format("missing '{}'", missing.front());
    throw Error(Errc::FeatureNameMismatch,
                fmt::format("{} ({} expected, {} present)", detail, names.size(),
                            feature_names.size()));
  }
  FeatureTable out;
  out.case_ids = case_ids;
  out.labels = labels;
  out.feature_names.assign(names.begin(), names.end());
  out.values.resize(values.rows(), static_cast<Eigen::Index>(names.size()));
  for (std::size_t c = 0; c < names.size(); ++c) {
    out.values.col(static_cast<Eigen::Index>(c)) = values.col(index.at(names[c]));
  }
  return out;
}

FeatureTable parse_feature_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) {
      header = split_line(line);
      break;
    }
  }
  if (header.empty()) throw Error(Errc::ParseError, "empty CSV");

  std::ptrdiff_t id_col = -1, label_col = -1;
  FeatureTable table;
  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "case_id") {
      id_col = static_cast<std::ptrdiff_t>(c);
    } else if (header[c] == "label") {
      label_col = static_cast<std::ptrdiff_t>(c);
    } else {
      table.feature_names.push_back(header[c]);
      feature_cols.push_back(c);
    }
  }
  if (id_col < 0) throw Error(Errc::ParseError, "missing 'case_id' column");
  if (label_col < 0) throw Error(Errc::ParseError, "missing 'label' column");
  if (table.feature_names.empty()) throw Error(Errc::ParseError, "no feature columns");

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != header.size()) {
      throw Error(Errc::ParseError, fmt::format("line {}: {} fields, header has {}", line_no,
                                                fields.size(), header.size()));
    }
    table.case_ids.push_back(fields[static_cast<std::size_t>(id_col)]);
    const auto& label = fields[static_cast<std::size_t>(label_col)];
    if (label != "0" && label != "1") {
      throw Error(Errc::ParseError, fmt::format("line {}: label must be 0 or 1", line_no));
    }
    table.labels.push_back(label == "1" ? 1 : 0);
    std::vector<double> row;
    row.reserve(feature_cols.size());
    for (auto c : feature_cols) row.push_back(parse_double(fields[c], line_no));
    rows.push_back(std::move(row));
  }

  table.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(feature_cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < feature_cols.size(); ++c) {
      table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  try {
    table.validate();
  } catch (const Error& e) {
    throw Error(Errc::ParseError, e.what());
  }
  return table;
}

FeatureTable read_feature_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, fmt::format("cannot open '{}'", path.string()));
  const std::string text(std::istreambuf_iterator<char>(in), {});
  return parse_feature_csv(text);
}

std::string format_feature_csv(const FeatureTable& table) {
  table.validate();
  std::string out = "case_id";
  for (const auto& name : table.feature_names) {
    if (name.find(',') != std::string::npos) {
      throw Error(Errc::InvalidArgument, "column names may not contain commas");
    }
    out += ',';
    out += name;
  }
  out += ",label\n";
  for (std::size_t r = 0; r < table.rows(); ++r) {
    if (table.case_ids[r].find(',') != std::string::npos) {
      throw Error(Errc::InvalidArgument, "case ids may not contain commas");
    }
    out += table.case_ids[r];
    for (Eigen::Index c = 0; c < table.values.cols(); ++c) {
      out += fmt::format(",{:.17g}", table.values(static_cast<Eigen::Index>(r), c));
    }
    out += fmt::format(",{}\n", table.labels[r]);
  }
  return out;
}

void write_feature_csv(const std::filesystem::path& path, const FeatureTable& table) {
  const auto text = format_feature_csv(table);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, fmt::format("cannot write '{}'", path.string()));
  out << text;
}

}  // namespace lggrad
