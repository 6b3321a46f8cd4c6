#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sweeprl {

enum class ErrorCode {
  NoFreeCell,
  InvalidMap,
  EpisodeFinished,
  ShapeMismatch,
  EmptyBuffer,
  InsufficientSamples,
  Trapped,
  Unreachable,
  ObservationMismatch,
  MalformedCsv,
  RaggedRows,
  UnknownChar,
  MultipleStarts,
  Empty,
  BadMagic,
  ArchMismatch,
  TruncatedFile,
  InvalidConfig,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sweeprl
