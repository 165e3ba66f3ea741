#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lggrad::cli {

struct ManifestRow {
  std::string case_id;
  std::filesystem::path image_path;
  std::filesystem::path mask_path;
  std::int64_t roi_label = 1;
  int class_label = 0;
};

/// CSV with header `case_id,image_path,mask_path,roi_label,class_label`.
/// Relative paths are resolved against the manifest's directory. Throws
/// Error(ParseError) on a malformed or empty manifest or duplicate ids.
std::vector<ManifestRow> read_manifest(const std::filesystem::path& path);

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestRow>& rows);

}  // namespace lggrad::cli
