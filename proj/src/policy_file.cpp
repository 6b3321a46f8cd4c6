#include "sweeprl/policy_file.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "sweeprl/error.hpp"

namespace sweeprl {

namespace {

using nlohmann::json;

std::string_view layout_name(HeadLayout h) {
  switch (h) {
    case HeadLayout::ActorCritic: return "actor_critic";
    case HeadLayout::Q: return "q";
    case HeadLayout::Dueling: return "dueling";
  }
  return "?";
}

HeadLayout layout_from(const std::string& s) {
  if (s == "actor_critic") return HeadLayout::ActorCritic;
  if (s == "q") return HeadLayout::Q;
  if (s == "dueling") return HeadLayout::Dueling;
  throw Error(ErrorCode::ArchMismatch, "unknown head layout '" + s + "'");
}

}  // namespace

void save_policy(const PolicyFile& policy, std::ostream& out) {
  const Architecture& arch = policy.network.architecture();
  json header = {
      {"architecture",
       {{"inputs", arch.inputs},
        {"hidden", arch.hidden},
        {"heads", layout_name(arch.heads)},
        {"actions", arch.actions}}},
      {"observation",
       {{"mode", policy.observation.mode == ObservationMode::Local ? "local" : "global"},
        {"dnut", policy.observation.dnut},
        {"heading", policy.observation.heading}}},
      {"meta",
       {{"algo", policy.meta.algo},
        {"episodes", policy.meta.episodes},
        {"seed", policy.meta.seed},
        {"config_hash", policy.meta.config_hash}}},
      {"payload_doubles", policy.network.num_params()},
  };
  out << kPolicyMagic << '\n' << header.dump() << '\n';
  std::array<char, 8> bytes{};
  for (const double v : policy.network.params()) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (std::size_t i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
    out.write(bytes.data(), 8);
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing policy");
}

void save_policy(const PolicyFile& policy, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  save_policy(policy, out);
}

PolicyFile load_policy(std::istream& in) {
  std::string magic;
  if (!std::getline(in, magic)) throw Error(ErrorCode::TruncatedFile, "missing magic");
  if (magic != kPolicyMagic) throw Error(ErrorCode::BadMagic, "not a policy file");
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::TruncatedFile, "missing header");

  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ArchMismatch, std::string("unreadable header: ") + e.what());
  }

  PolicyFile p;
  std::size_t payload = 0;
  try {
    const auto& a = header.at("architecture");
    Architecture arch;
    arch.inputs = a.at("inputs").get<std::size_t>();
    arch.hidden = a.at("hidden").get<std::vector<std::size_t>>();
    arch.heads = layout_from(a.at("heads").get<std::string>());
    arch.actions = a.at("actions").get<std::size_t>();
    p.network = Network(arch);

    const auto& o = header.at("observation");
    p.observation.mode =
        o.at("mode").get<std::string>() == "global" ? ObservationMode::Global : ObservationMode::Local;
    p.observation.dnut = o.at("dnut").get<bool>();
    p.observation.heading = o.at("heading").get<bool>();

    const auto& m = header.at("meta");
    p.meta.algo = m.at("algo").get<std::string>();
    p.meta.episodes = m.at("episodes").get<long>();
    p.meta.seed = m.at("seed").get<std::uint64_t>();
    p.meta.config_hash = m.at("config_hash").get<std::string>();
    payload = header.at("payload_doubles").get<std::size_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ArchMismatch, std::string("bad header: ") + e.what());
  }
  if (payload != p.network.num_params())
    throw Error(ErrorCode::ArchMismatch,
                "payload holds " + std::to_string(payload) + " parameters, architecture needs " +
                    std::to_string(p.network.num_params()));

  std::array<char, 8> bytes{};
  for (double& v : p.network.params()) {
    if (!in.read(bytes.data(), 8)) throw Error(ErrorCode::TruncatedFile, "payload ends early");
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < 8; ++i)
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[i])) << (8 * i);
    v = std::bit_cast<double>(bits);
  }
  if (in.peek() != std::char_traits<char>::eof())
    throw Error(ErrorCode::ArchMismatch, "trailing bytes after payload");
  return p;
}

PolicyFile load_policy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return load_policy(in);
}

void check_compatible(const PolicyFile& policy, const GridMap& map) {
  const std::size_t want = observation_size(policy.observation, map);
  if (policy.network.architecture().inputs != want)
    throw Error(ErrorCode::ArchMismatch,
                "policy expects " + std::to_string(policy.network.architecture().inputs) +
                    " inputs but this map yields " + std::to_string(want));
}

}  // namespace sweeprl
