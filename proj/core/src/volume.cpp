#include "lggrad/volume.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include <fmt/format.h>

#include "lggrad/error.hpp"

namespace lggrad {

namespace {

void check_geometry(const Geometry& g, std::size_t length) {
  for (std::size_t axis = 0; axis < 3; ++axis) {
    if (g.dims[axis] == 0) {
      throw Error(Errc::InvalidArgument, "dimension sizes must be positive");
    }
    if (!(g.spacing[axis] > 0.0) || !std::isfinite(g.spacing[axis])) {
      throw Error(Errc::InvalidArgument, "spacing must be finite and positive");
    }
  }
  if (length != g.voxel_count()) {
    throw Error(Errc::PayloadSizeMismatch,
                fmt::format("{} values for {}x{}x{} grid", length, g.dims[0],
                            g.dims[1], g.dims[2]));
  }
}

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::optional<VoxelType> parse_type(std::string_view name) {
  static const std::map<std::string, VoxelType, std::less<>> kTypes = {
      {"uchar", VoxelType::UChar},         {"unsigned char", VoxelType::UChar},
      {"uint8", VoxelType::UChar},         {"uint8_t", VoxelType::UChar},
      {"short", VoxelType::Short},         {"short int", VoxelType::Short},
      {"signed short", VoxelType::Short},  {"int16", VoxelType::Short},
      {"int16_t", VoxelType::Short},       {"ushort", VoxelType::UShort},
      {"unsigned short", VoxelType::UShort}, {"uint16", VoxelType::UShort},
      {"uint16_t", VoxelType::UShort},     {"int", VoxelType::Int},
      {"signed int", VoxelType::Int},      {"int32", VoxelType::Int},
      {"int32_t", VoxelType::Int},         {"float", VoxelType::Float},
      {"double", VoxelType::Double},
  };
  const auto it = kTypes.find(lower(name));
  if (it == kTypes.end()) return std::nullopt;
  return it->second;
}

std::string_view type_name(VoxelType type) {
  switch (type) {
    case VoxelType::UChar: return "uchar";
    case VoxelType::Short: return "short";
    case VoxelType::UShort: return "ushort";
    case VoxelType::Int: return "int";
    case VoxelType::Float: return "float";
    case VoxelType::Double: return "double";
  }
  return "double";
}

std::size_t type_size(VoxelType type) {
  switch (type) {
    case VoxelType::UChar: return 1;
    case VoxelType::Short:
    case VoxelType::UShort: return 2;
    case VoxelType::Int:
    case VoxelType::Float: return 4;
    case VoxelType::Double: return 8;
  }
  return 8;
}

bool is_integer(VoxelType type) {
  return type != VoxelType::Float && type != VoxelType::Double;
}

template <typename U>
U load_le(const unsigned char* p) {
  U value = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) {
    value |= static_cast<U>(static_cast<U>(p[b]) << (8 * b));
  }
  return value;
}

template <typename U>
void store_le(U value, std::string& out) {
  for (std::size_t b = 0; b < sizeof(U); ++b) {
    out.push_back(static_cast<char>((value >> (8 * b)) & 0xFFu));
  }
}

/// Decoded header plus the offset where the attached payload begins.
struct RawFile {
  Geometry geometry;
  VoxelType type;
  std::string bytes;
  std::size_t payload_offset = 0;
};

std::vector<double> parse_doubles(std::string_view key, std::string_view text) {
  std::vector<double> values;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw Error(Errc::MalformedHeader,
                  fmt::format("cannot parse '{}' in '{}'", token, key));
    }
  }
  return values;
}

RawFile read_raw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::Io, fmt::format("cannot open '{}'", path.string()));
  }
  RawFile raw;
  raw.bytes.assign(std::istreambuf_iterator<char>(in), {});

  std::map<std::string, std::string, std::less<>> fields;
  std::size_t pos = 0;
  bool first_line = true;
  bool header_closed = false;
  while (pos < raw.bytes.size()) {
    auto eol = raw.bytes.find('\n', pos);
    const bool last = eol == std::string::npos;
    if (last) eol = raw.bytes.size();
    const std::string_view line =
        trim(std::string_view(raw.bytes).substr(pos, eol - pos));
    pos = last ? eol : eol + 1;

    if (first_line) {
      if (line.size() != 8 || line.substr(0, 7) != "NRRD000" || line[7] < '1' ||
          line[7] > '5') {
        throw Error(Errc::MalformedHeader, "missing NRRD000X magic line");
      }
      first_line = false;
      continue;
    }
    if (line.empty()) {
      header_closed = true;
      break;
    }
    if (line.front() == '#') continue;
    if (line.find(":=") != std::string_view::npos) continue;
    const auto colon = line.find(": ");
    if (colon == std::string_view::npos) {
      throw Error(Errc::MalformedHeader, fmt::format("bad header line '{}'", line));
    }
    fields[lower(trim(line.substr(0, colon)))] = std::string(trim(line.substr(colon + 2)));
  }
  if (first_line) throw Error(Errc::MalformedHeader, "empty file");
  if (!header_closed) throw Error(Errc::MalformedHeader, "header not terminated by blank line");
  raw.payload_offset = pos;

  auto require = [&](std::string_view key) -> const std::string& {
    const auto it = fields.find(key);
    if (it == fields.end()) {
      throw Error(Errc::MissingHeaderKey, fmt::format("'{}' in {}", key, path.string()));
    }
    return it->second;
  };

  const auto& dimension_text = require("dimension");
  const auto& sizes_text = require("sizes");
  const auto& type_text = require("type");
  const auto& encoding_text = require("encoding");

  if (lower(encoding_text) != "raw") {
    throw Error(Errc::UnsupportedEncoding, encoding_text);
  }
  if (const auto it = fields.find("endian"); it != fields.end() && lower(it->second) != "little") {
    throw Error(Errc::UnsupportedEncoding, "endian: " + it->second);
  }
  if (fields.contains("data file") || fields.contains("datafile")) {
    throw Error(Errc::UnsupportedEncoding, "detached data files are not supported");
  }
  const auto type = parse_type(type_text);
  if (!type) throw Error(Errc::UnsupportedType, type_text);
  raw.type = *type;

  const auto dimension = parse_doubles("dimension", dimension_text);
  if (dimension.size() != 1 || (dimension[0] != 2.0 && dimension[0] != 3.0)) {
    throw Error(Errc::MalformedHeader, "dimension must be 2 or 3");
  }
  const auto ndim = static_cast<std::size_t>(dimension[0]);
  const auto sizes = parse_doubles("sizes", sizes_text);
  if (sizes.size() != ndim) {
    throw Error(Errc::MalformedHeader, "sizes does not match dimension");
  }
  for (std::size_t axis = 0; axis < ndim; ++axis) {
    if (sizes[axis] < 1.0 || sizes[axis] != std::floor(sizes[axis])) {
      throw Error(Errc::MalformedHeader, "sizes must be positive integers");
    }
    raw.geometry.dims[axis] = static_cast<std::size_t>(sizes[axis]);
  }
  if (const auto it = fields.find("spacings"); it != fields.end()) {
    const auto spacings = parse_doubles("spacings", it->second);
    if (spacings.size() != ndim) {
      throw Error(Errc::MalformedHeader, "spacings does not match dimension");
    }
    for (std::size_t axis = 0; axis < ndim; ++axis) {
      if (!(spacings[axis] > 0.0) || !std::isfinite(spacings[axis])) {
        throw Error(Errc::MalformedHeader, "spacings must be positive");
      }
      raw.geometry.spacing[axis] = spacings[axis];
    }
  }

  const std::size_t expected = raw.geometry.voxel_count() * type_size(raw.type);
  const std::size_t actual = raw.bytes.size() - raw.payload_offset;
  if (actual != expected) {
    throw Error(Errc::PayloadSizeMismatch,
                fmt::format("expected {} payload bytes, found {}", expected, actual));
  }
  return raw;
}

template <typename T>
std::vector<T> decode(const RawFile& raw) {
  const auto count = raw.geometry.voxel_count();
  const auto* p = reinterpret_cast<const unsigned char*>(raw.bytes.data()) + raw.payload_offset;
  std::vector<T> out(count);
  const auto stride = type_size(raw.type);
  for (std::size_t n = 0; n < count; ++n, p += stride) {
    switch (raw.type) {
      case VoxelType::UChar: out[n] = static_cast<T>(p[0]); break;
      case VoxelType::Short: out[n] = static_cast<T>(static_cast<std::int16_t>(load_le<std::uint16_t>(p))); break;
      case VoxelType::UShort: out[n] = static_cast<T>(load_le<std::uint16_t>(p)); break;
      case VoxelType::Int: out[n] = static_cast<T>(static_cast<std::int32_t>(load_le<std::uint32_t>(p))); break;
      case VoxelType::Float: out[n] = static_cast<T>(std::bit_cast<float>(load_le<std::uint32_t>(p))); break;
      case VoxelType::Double: out[n] = static_cast<T>(std::bit_cast<double>(load_le<std::uint64_t>(p))); break;
    }
  }
  return out;
}

std::string header(const Geometry& g, VoxelType type, bool force_3d) {
  // a 2D header cannot carry sz, so a single slice with sz != 1 stays 3D
  const bool three_d = force_3d || g.dims[2] != 1 || g.spacing[2] != 1.0;
  std::string out = "NRRD0004\n";
  out += fmt::format("type: {}\n", type_name(type));
  if (three_d) {
    out += "dimension: 3\n";
    out += fmt::format("sizes: {} {} {}\n", g.dims[0], g.dims[1], g.dims[2]);
    out += fmt::format("spacings: {:.17g} {:.17g} {:.17g}\n", g.spacing[0], g.spacing[1],
                       g.spacing[2]);
  } else {
    out += "dimension: 2\n";
    out += fmt::format("sizes: {} {}\n", g.dims[0], g.dims[1]);
    out += fmt::format("spacings: {:.17g} {:.17g}\n", g.spacing[0], g.spacing[1]);
  }
  out += "endian: little\nencoding: raw\n\n";
  return out;
}

template <typename T>
void encode(VoxelType type, T value, std::string& out) {
  switch (type) {
    case VoxelType::UChar: out.push_back(static_cast<char>(static_cast<std::uint8_t>(value))); break;
    case VoxelType::Short: store_le(static_cast<std::uint16_t>(static_cast<std::int16_t>(value)), out); break;
    case VoxelType::UShort: store_le(static_cast<std::uint16_t>(value), out); break;
    case VoxelType::Int: store_le(static_cast<std::uint32_t>(static_cast<std::int32_t>(value)), out); break;
    case VoxelType::Float: store_le(std::bit_cast<std::uint32_t>(static_cast<float>(value)), out); break;
    case VoxelType::Double: store_le(std::bit_cast<std::uint64_t>(static_cast<double>(value)), out); break;
  }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, fmt::format("cannot write '{}'", path.string()));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(Errc::Io, fmt::format("short write to '{}'", path.string()));
}

}  // namespace

Volume::Volume(Geometry geometry, std::vector<double> data)
    : geometry_(geometry), data_(std::move(data)) {
  check_geometry(geometry_, data_.size());
  if (!std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); })) {
    throw Error(Errc::NonFiniteIntensity, "image contains NaN or Inf");
  }
}

MaskVolume::MaskVolume(Geometry geometry, std::vector<std::int64_t> labels)
    : geometry_(geometry), labels_(std::move(labels)) {
  check_geometry(geometry_, labels_.size());
  if (std::any_of(labels_.begin(), labels_.end(), [](std::int64_t v) { return v < 0; })) {
    throw Error(Errc::NegativeLabel, "mask labels must be non-negative");
  }
}

Volume read_volume(const std::filesystem::path& path) {
  const auto raw = read_raw(path);
  return Volume(raw.geometry, decode<double>(raw));
}

MaskVolume read_mask(const std::filesystem::path& path) {
  const auto raw = read_raw(path);
  if (!is_integer(raw.type)) {
    throw Error(Errc::NonIntegerMaskType,
                fmt::format("mask '{}' stores {}", path.string(), type_name(raw.type)));
  }
  return MaskVolume(raw.geometry, decode<std::int64_t>(raw));
}

void write_volume(const std::filesystem::path& path, const Volume& volume, VoxelType type,
                  bool force_3d) {
  auto content = header(volume.geometry(), type, force_3d);
  content.reserve(content.size() + volume.data().size() * type_size(type));
  for (double v : volume.data()) encode(type, v, content);
  write_file(path, content);
}

void write_mask(const std::filesystem::path& path, const MaskVolume& mask, VoxelType type,
                bool force_3d) {
  if (!is_integer(type)) {
    throw Error(Errc::NonIntegerMaskType, "masks must be written with an integer type");
  }
  auto content = header(mask.geometry(), type, force_3d);
  for (auto v : mask.labels()) encode(type, v, content);
  write_file(path, content);
}

void validate_geometry(const Volume& image, const MaskVolume& mask) {
  if (image.dims() != mask.dims()) {
    throw Error(Errc::DimsMismatch,
                fmt::format("image {}x{}x{} vs mask {}x{}x{}", image.dims()[0], image.dims()[1],
                            image.dims()[2], mask.dims()[0], mask.dims()[1], mask.dims()[2]));
  }
  for (std::size_t axis = 0; axis < 3; ++axis) {
    const double a = image.spacing()[axis];
    const double b = mask.spacing()[axis];
    if (std::abs(a - b) > 1e-4 * std::max(std::abs(a), std::abs(b))) {
      throw Error(Errc::SpacingMismatch,
                  fmt::format("axis {}: image {} vs mask {}", axis, a, b));
    }
  }
}

}  // namespace lggrad
