#include "protocol.hpp"

#include <bit>
#include <cstring>

#include <json.hpp>

namespace agarcl::harness::wire {
namespace {

using nlohmann::json;

class Writer {
 public:
  void u8(std::uint8_t v) { buf.push_back(v); }
  void u16(std::uint16_t v) { le(v, 2); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void bytes(std::span<const std::uint8_t> b) { buf.insert(buf.end(), b.begin(), b.end()); }
  void text(const std::string& s) { buf.insert(buf.end(), s.begin(), s.end()); }
  std::vector<std::uint8_t> buf;

 private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}
  std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::span<const std::uint8_t> rest() {
    auto r = b_.subspan(pos_);
    pos_ = b_.size();
    return r;
  }
  std::string rest_text() {
    auto r = rest();
    return {r.begin(), r.end()};
  }
  std::size_t remaining() const { return b_.size() - pos_; }

 private:
  std::uint64_t le(int n) {
    if (remaining() < static_cast<std::size_t>(n)) throw DecodeError(ErrorCode::Malformed, "payload too short");
    std::uint64_t v = 0;
    for (int i = n - 1; i >= 0; --i) v = (v << 8) | b_[pos_ + i];
    pos_ += n;
    return v;
  }
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

json parse_json(Reader& r) {
  try {
    return json::parse(r.rest_text());
  } catch (const json::exception& e) {
    throw DecodeError(ErrorCode::Malformed, std::string("bad JSON payload: ") + e.what());
  }
}

void payload(Writer& w, const Hello& m) {
  json j = {{"role", to_string(m.role)}, {"scenario", m.scenario}, {"seed", std::to_string(m.seed)},
            {"obs", m.obs}, {"protocol", m.protocol}};
  if (m.frame_skip) j["frame_skip"] = *m.frame_skip;
  if (m.noise_std) j["noise_std"] = *m.noise_std;
  w.text(j.dump());
}
void payload(Writer& w, const ServerConfig& m) {
  json j = {{"protocol", m.protocol},     {"role", m.role},
            {"tick_rate", m.tick_rate},   {"scenario", m.scenario},
            {"scenario_yaml", m.scenario_yaml}, {"obs", m.obs},
            {"frame_skip", m.frame_skip}, {"resolution", m.resolution},
            {"snapshot_every", m.snapshot_every}};
  w.text(j.dump());
}
void payload(Writer& w, const ActionMsg& m) {
  w.f32(m.x);
  w.f32(m.y);
  w.u8(m.discrete);
  w.u8(0);
  w.u16(0);
}
void payload(Writer& w, const Frame& m) {
  w.u64(m.tick);
  w.u64(m.step);
  w.f64(m.reward);
  w.f64(m.mass);
  w.u32(m.deaths);
  w.u8(m.terminated);
  w.u8(m.truncated);
  w.u8(static_cast<std::uint8_t>(m.obs_kind));
  w.u8(0);
  w.u32(m.resolution);
  w.bytes(m.obs);
}
void payload(Writer& w, const Snapshot& m) { w.text(m.json); }
void payload(Writer& w, const Stats& m) {
  w.text(json{{"fps", m.fps}, {"mass", m.mass}, {"deaths", m.deaths}, {"tick", m.tick}}.dump());
}
void payload(Writer&, const Reset&) {}
void payload(Writer& w, const Error& m) {
  w.u32(static_cast<std::uint32_t>(m.code));
  w.text(m.text);
}

Hello decode_hello(Reader& r) {
  const json j = parse_json(r);
  Hello m;
  try {
    const auto role = role_from_string(j.at("role").get<std::string>());
    if (!role) throw DecodeError(ErrorCode::Malformed, "unknown role");
    m.role = *role;
    m.scenario = j.value("scenario", m.scenario);
    if (j.contains("seed")) {
      const auto& s = j.at("seed");
      m.seed = s.is_string() ? std::stoull(s.get<std::string>()) : s.get<std::uint64_t>();
    }
    m.obs = j.value("obs", m.obs);
    if (j.contains("frame_skip")) m.frame_skip = j.at("frame_skip").get<std::uint32_t>();
    if (j.contains("noise_std")) m.noise_std = j.at("noise_std").get<double>();
    m.protocol = j.value("protocol", kVersion);
  } catch (const json::exception& e) {
    throw DecodeError(ErrorCode::Malformed, std::string("bad hello: ") + e.what());
  } catch (const std::logic_error& e) {
    throw DecodeError(ErrorCode::Malformed, std::string("bad hello: ") + e.what());
  }
  if (m.protocol != kVersion)
    throw DecodeError(ErrorCode::VersionMismatch, "client speaks protocol " + std::to_string(m.protocol));
  return m;
}

ServerConfig decode_config(Reader& r) {
  const json j = parse_json(r);
  ServerConfig m;
  try {
    m.protocol = j.at("protocol").get<std::uint8_t>();
    m.role = j.at("role").get<std::string>();
    m.tick_rate = j.at("tick_rate").get<double>();
    m.scenario = j.at("scenario").get<std::string>();
    m.scenario_yaml = j.at("scenario_yaml").get<std::string>();
    m.obs = j.at("obs").get<std::string>();
    m.frame_skip = j.at("frame_skip").get<std::uint32_t>();
    m.resolution = j.at("resolution").get<std::uint32_t>();
    m.snapshot_every = j.at("snapshot_every").get<std::uint32_t>();
  } catch (const json::exception& e) {
    throw DecodeError(ErrorCode::Malformed, std::string("bad server config: ") + e.what());
  }
  return m;
}

Stats decode_stats(Reader& r) {
  const json j = parse_json(r);
  try {
    return {j.at("fps").get<double>(), j.at("mass").get<double>(), j.at("deaths").get<std::uint64_t>(),
            j.at("tick").get<std::uint64_t>()};
  } catch (const json::exception& e) {
    throw DecodeError(ErrorCode::Malformed, std::string("bad stats: ") + e.what());
  }
}

}  // namespace

std::string to_string(Role r) {
  switch (r) {
    case Role::Agent: return "agent";
    case Role::Human: return "human";
    case Role::Spectator: return "spectator";
  }
  return "agent";
}

std::optional<Role> role_from_string(const std::string& s) {
  if (s == "agent") return Role::Agent;
  if (s == "human") return Role::Human;
  if (s == "spectator") return Role::Spectator;
  return std::nullopt;
}

Type type_of(const Message& m) { return static_cast<Type>(m.index() + 1); }

std::vector<std::uint8_t> encode(const Message& m) {
  Writer body;
  std::visit([&](const auto& msg) { payload(body, msg); }, m);
  Writer w;
  w.u8(static_cast<std::uint8_t>(type_of(m)));
  w.u8(kVersion);
  w.u16(0);
  w.u32(static_cast<std::uint32_t>(body.buf.size()));
  w.bytes(body.buf);
  return std::move(w.buf);
}

Message decode(std::span<const std::uint8_t> bytes) {
  Reader h(bytes);
  if (bytes.size() < kHeaderSize) throw DecodeError(ErrorCode::Malformed, "message shorter than its header");
  const std::uint8_t type = h.u8();
  const std::uint8_t version = h.u8();
  const std::uint16_t reserved = h.u16();
  const std::uint32_t len = h.u32();
  if (version != kVersion)
    throw DecodeError(ErrorCode::VersionMismatch, "message version " + std::to_string(version));
  if (reserved != 0) throw DecodeError(ErrorCode::Malformed, "reserved header bytes must be zero");
  if (len > kMaxPayload || len != bytes.size() - kHeaderSize)
    throw DecodeError(ErrorCode::Malformed, "payload length does not match the message size");
  Reader r(bytes.subspan(kHeaderSize));
  switch (static_cast<Type>(type)) {
    case Type::Hello: return decode_hello(r);
    case Type::ServerConfig: return decode_config(r);
    case Type::Action: {
      if (len != 12) throw DecodeError(ErrorCode::Malformed, "action payload must be 12 bytes");
      ActionMsg m;
      m.x = r.f32();
      m.y = r.f32();
      m.discrete = r.u8();
      if (r.u8() != 0 || r.u16() != 0) throw DecodeError(ErrorCode::Malformed, "action padding must be zero");
      return m;
    }
    case Type::Frame: {
      Frame m;
      m.tick = r.u64();
      m.step = r.u64();
      m.reward = r.f64();
      m.mass = r.f64();
      m.deaths = r.u32();
      m.terminated = r.u8();
      m.truncated = r.u8();
      const std::uint8_t kind = r.u8();
      if (kind > static_cast<std::uint8_t>(ObsKind::None)) throw DecodeError(ErrorCode::Malformed, "bad obs kind");
      m.obs_kind = static_cast<ObsKind>(kind);
      (void)r.u8();
      m.resolution = r.u32();
      const auto rest = r.rest();
      m.obs.assign(rest.begin(), rest.end());
      return m;
    }
    case Type::Snapshot: return Snapshot{r.rest_text()};
    case Type::Stats: return decode_stats(r);
    case Type::Reset:
      if (len != 0) throw DecodeError(ErrorCode::Malformed, "reset carries no payload");
      return Reset{};
    case Type::Error: {
      Error m;
      m.code = static_cast<ErrorCode>(r.u32());
      m.text = r.rest_text();
      return m;
    }
  }
  throw DecodeError(ErrorCode::Malformed, "unknown message type " + std::to_string(type));
}

}  // namespace agarcl::harness::wire
