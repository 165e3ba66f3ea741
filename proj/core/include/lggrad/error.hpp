#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lggrad {

enum class Errc {
  // volume_io
  MissingHeaderKey,
  MalformedHeader,
  UnsupportedEncoding,
  UnsupportedType,
  PayloadSizeMismatch,
  NonFiniteIntensity,
  NonIntegerMaskType,
  NegativeLabel,
  DimsMismatch,
  SpacingMismatch,
  Io,
  // extraction
  EmptyRoi,
  // tabular preparation
  EmptyTable,
  RankTooLow,
  ClassTooSmall,
  MinorityTooSmall,
  // classifier
  ShapeMismatch,
  EmptyTrainingSet,
  // metrics
  LengthMismatch,
  // persistence and CLI
  ParseError,
  ModelVersionMismatch,
  FeatureNameMismatch,
  InvalidArgument,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the Errc codes so
/// callers (and tests) can branch on the kind rather than the message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace lggrad
