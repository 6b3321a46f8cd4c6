#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "sweeprl/neural.hpp"
#include "sweeprl/percept.hpp"

namespace sweeprl {

inline constexpr std::string_view kPolicyMagic = "SWEEPRL1";

struct PolicyMeta {
  std::string algo = "ppo";
  long episodes = 0;
  std::uint64_t seed = 0;
  std::string config_hash;
};

/// A trained network plus everything needed to feed it.
struct PolicyFile {
  Network network;
  ObservationConfig observation;
  PolicyMeta meta;
};

/// Layout: the 8-byte magic and LF, one line of JSON describing the
/// architecture, observation layout, metadata and payload length, then the
/// parameters as little-endian IEEE-754 binary64.
void save_policy(const PolicyFile& policy, std::ostream& out);
void save_policy(const PolicyFile& policy, const std::filesystem::path& path);

/// Errors: BadMagic, ArchMismatch (header/payload disagree), TruncatedFile.
PolicyFile load_policy(std::istream& in);
PolicyFile load_policy(const std::filesystem::path& path);

/// Throws Error(ArchMismatch) unless the network input width matches the
/// observation the policy would receive on `map`.
void check_compatible(const PolicyFile& policy, const GridMap& map);

}  // namespace sweeprl
