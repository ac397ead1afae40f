#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace agarcl::harness::wire {

// Byte layout: docs/protocol.md. Every message is an 8-byte header
// (type u8, version u8, reserved u16 = 0, payload length u32, little-endian)
// followed by the payload. One message per websocket binary frame.
constexpr std::uint8_t kVersion = 1;
constexpr std::size_t kHeaderSize = 8;
constexpr std::uint32_t kMaxPayload = 64u << 20;

enum class Type : std::uint8_t {
  Hello = 1,
  ServerConfig = 2,
  Action = 3,
  Frame = 4,
  Snapshot = 5,
  Stats = 6,
  Reset = 7,
  Error = 8,
};

enum class Role : std::uint8_t { Agent, Human, Spectator };

enum class ErrorCode : std::uint32_t {
  Malformed = 1,
  VersionMismatch = 2,
  UnexpectedMessage = 3,
  BadConfig = 4,
  EnvProtocol = 5,
  Timeout = 6,
  Internal = 7,
};

/// JSON payload: {"role", "scenario", "seed", "obs", "frame_skip"?, "noise_std"?, "protocol"}.
struct Hello {
  Role role = Role::Agent;
  std::string scenario = "full";
  std::uint64_t seed = 0;
  std::string obs = "pixel";
  std::optional<std::uint32_t> frame_skip;
  std::optional<double> noise_std;
  std::uint8_t protocol = kVersion;
};

/// JSON payload echoing the effective scenario.
struct ServerConfig {
  std::uint8_t protocol = kVersion;
  std::string role;
  double tick_rate = 60.0;
  std::string scenario;
  std::string scenario_yaml;
  std::string obs;
  std::uint32_t frame_skip = 4;
  std::uint32_t resolution = 128;
  std::uint32_t snapshot_every = 2;
};

/// 12 bytes: cursor_x f32, cursor_y f32, discrete u8, 3 bytes zero.
struct ActionMsg {
  float x = 0.0f;
  float y = 0.0f;
  std::uint8_t discrete = 0;
};

enum class ObsKind : std::uint8_t { Pixel = 0, Symbolic = 1, None = 2 };

/// 44-byte prefix then the observation: raw float32 plane-major for pixel,
/// UTF-8 JSON for symbolic.
struct Frame {
  std::uint64_t tick = 0;
  std::uint64_t step = 0;
  double reward = 0.0;
  double mass = 0.0;
  std::uint32_t deaths = 0;
  std::uint8_t terminated = 0;
  std::uint8_t truncated = 0;
  ObsKind obs_kind = ObsKind::None;
  std::uint32_t resolution = 0;
  std::vector<std::uint8_t> obs;
};

/// JSON payload: the symbolic observation plus tick and stats.
struct Snapshot {
  std::string json;
};

struct Stats {
  double fps = 0.0;
  double mass = 0.0;
  std::uint64_t deaths = 0;
  std::uint64_t tick = 0;
};

struct Reset {};

/// code u32, then UTF-8 text.
struct Error {
  ErrorCode code = ErrorCode::Internal;
  std::string text;
};

using Message = std::variant<Hello, ServerConfig, ActionMsg, Frame, Snapshot, Stats, Reset, Error>;

class DecodeError : public std::runtime_error {
 public:
  DecodeError(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

std::vector<std::uint8_t> encode(const Message& m);
/// Throws DecodeError (Malformed or VersionMismatch).
Message decode(std::span<const std::uint8_t> bytes);

std::string to_string(Role r);
std::optional<Role> role_from_string(const std::string& s);
Type type_of(const Message& m);

}  // namespace agarcl::harness::wire
