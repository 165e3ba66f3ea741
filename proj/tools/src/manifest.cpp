#include "lggrad_cli/manifest.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "lggrad/error.hpp"

namespace lggrad::cli {

namespace {

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) {
    while (!field.empty() && (field.back() == ' ' || field.back() == '\r')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_int(const std::string& text, std::size_t line_no, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(Errc::ParseError, fmt::format("manifest line {}: bad {} '{}'", line_no, what, text));
  }
  return value;
}

}  // namespace

std::vector<ManifestRow> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, fmt::format("cannot open manifest '{}'", path.string()));
  const auto base = path.parent_path();

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) header = fields_of(line);
  }
  const std::vector<std::string> expected = {"case_id", "image_path", "mask_path", "roi_label",
                                             "class_label"};
  if (header != expected) {
    throw Error(Errc::ParseError,
                "manifest header must be case_id,image_path,mask_path,roi_label,class_label");
  }

  std::vector<ManifestRow> rows;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = fields_of(line);
    if (f.size() != expected.size()) {
      throw Error(Errc::ParseError, fmt::format("manifest line {}: expected 5 fields", line_no));
    }
    ManifestRow row;
    row.case_id = f[0];
    if (row.case_id.empty()) {
      throw Error(Errc::ParseError, fmt::format("manifest line {}: empty case_id", line_no));
    }
    if (!seen.insert(row.case_id).second) {
      throw Error(Errc::ParseError, fmt::format("duplicate case_id '{}'", row.case_id));
    }
    row.image_path = f[1];
    row.mask_path = f[2];
    if (row.image_path.is_relative()) row.image_path = base / row.image_path;
    if (row.mask_path.is_relative()) row.mask_path = base / row.mask_path;
    row.roi_label = parse_int<std::int64_t>(f[3], line_no, "roi_label");
    row.class_label = parse_int<int>(f[4], line_no, "class_label");
    if (row.class_label != 0 && row.class_label != 1) {
      throw Error(Errc::ParseError, fmt::format("manifest line {}: class_label must be 0/1", line_no));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(Errc::ParseError, "manifest has no cases");
  return rows;
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestRow>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::Io, fmt::format("cannot write '{}'", path.string()));
  out << "case_id,image_path,mask_path,roi_label,class_label\n";
  for (const auto& r : rows) {
    out << r.case_id << ',' << r.image_path.generic_string() << ',' << r.mask_path.generic_string()
        << ',' << r.roi_label << ',' << r.class_label << '\n';
  }
}

}  // namespace lggrad::cli
