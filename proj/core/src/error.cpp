#include "lggrad/error.hpp"

namespace lggrad {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::MissingHeaderKey: return "MissingHeaderKey";
    case Errc::MalformedHeader: return "MalformedHeader";
    case Errc::UnsupportedEncoding: return "UnsupportedEncoding";
    case Errc::UnsupportedType: return "UnsupportedType";
    case Errc::PayloadSizeMismatch: return "PayloadSizeMismatch";
    case Errc::NonFiniteIntensity: return "NonFiniteIntensity";
    case Errc::NonIntegerMaskType: return "NonIntegerMaskType";
    case Errc::NegativeLabel: return "NegativeLabel";
    case Errc::DimsMismatch: return "DimsMismatch";
    case Errc::SpacingMismatch: return "SpacingMismatch";
    case Errc::Io: return "Io";
    case Errc::EmptyRoi: return "EmptyRoi";
    case Errc::EmptyTable: return "EmptyTable";
    case Errc::RankTooLow: return "RankTooLow";
    case Errc::ClassTooSmall: return "ClassTooSmall";
    case Errc::MinorityTooSmall: return "MinorityTooSmall";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::EmptyTrainingSet: return "EmptyTrainingSet";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::ParseError: return "ParseError";
    case Errc::ModelVersionMismatch: return "ModelVersionMismatch";
    case Errc::FeatureNameMismatch: return "FeatureNameMismatch";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace lggrad
