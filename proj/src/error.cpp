#include "sweeprl/error.hpp"

namespace sweeprl {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoFreeCell: return "NoFreeCell";
    case ErrorCode::InvalidMap: return "InvalidMap";
    case ErrorCode::EpisodeFinished: return "EpisodeFinished";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptyBuffer: return "EmptyBuffer";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::Trapped: return "Trapped";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::ObservationMismatch: return "ObservationMismatch";
    case ErrorCode::MalformedCsv: return "MalformedCsv";
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::UnknownChar: return "UnknownChar";
    case ErrorCode::MultipleStarts: return "MultipleStarts";
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::ArchMismatch: return "ArchMismatch";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace sweeprl
