#include "trajectory.hpp"

#include <bit>
#include <cstring>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace agarcl::harness {
namespace {

void put_u64(std::uint8_t* p, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}
void put_u32(std::uint8_t* p, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}
std::uint64_t get_u64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}
std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

[[noreturn]] void io_fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

}  // namespace

void encode_record(const StepRecord& r, std::uint8_t* out) {
  put_u64(out + 0, r.tick);
  put_u64(out + 8, std::bit_cast<std::uint64_t>(r.cursor_x));
  put_u64(out + 16, std::bit_cast<std::uint64_t>(r.cursor_y));
  out[24] = r.discrete;
  out[25] = r.flags;
  out[26] = out[27] = 0;
  put_u32(out + 28, r.deaths);
  put_u64(out + 32, std::bit_cast<std::uint64_t>(r.reward));
  put_u64(out + 40, std::bit_cast<std::uint64_t>(r.mass));
  put_u64(out + 48, r.state_hash);
}

StepRecord decode_record(const std::uint8_t* in) {
  StepRecord r;
  r.tick = get_u64(in + 0);
  r.cursor_x = std::bit_cast<double>(get_u64(in + 8));
  r.cursor_y = std::bit_cast<double>(get_u64(in + 16));
  r.discrete = in[24];
  r.flags = in[25];
  r.deaths = get_u32(in + 28);
  r.reward = std::bit_cast<double>(get_u64(in + 32));
  r.mass = std::bit_cast<double>(get_u64(in + 40));
  r.state_hash = get_u64(in + 48);
  return r;
}

std::string header_to_json(const TrajectoryHeader& h) {
  nlohmann::json j = {
      {"format", "agarcl-trajectory"},
      {"version", h.version},
      {"scenario", h.scenario},
      {"scenario_yaml", h.scenario_yaml},
      // 64-bit values as decimal strings: JSON numbers lose precision past 2^53.
      {"config_digest", std::to_string(h.config_digest)},
      {"seed", std::to_string(h.seed)},
      {"frame_skip", h.frame_skip},
      {"obs_mode", h.obs_mode},
      {"noise_std", h.noise_std},
      {"hash_every", h.hash_every},
      {"initial_hash", std::to_string(h.initial_hash)},
      {"policy", h.policy},
      {"record_size", kStepRecordSize},
  };
  return j.dump();
}

TrajectoryHeader header_from_json(const std::string& line) {
  const auto j = nlohmann::json::parse(line);
  if (j.value("format", "") != "agarcl-trajectory") throw std::runtime_error("not an agarcl trajectory");
  TrajectoryHeader h;
  h.version = j.at("version").get<int>();
  if (h.version != kTrajectoryVersion)
    throw std::runtime_error("unsupported trajectory version " + std::to_string(h.version));
  if (j.value("record_size", kStepRecordSize) != kStepRecordSize) throw std::runtime_error("unexpected record size");
  h.scenario = j.at("scenario").get<std::string>();
  h.scenario_yaml = j.at("scenario_yaml").get<std::string>();
  h.config_digest = std::stoull(j.at("config_digest").get<std::string>());
  h.seed = std::stoull(j.at("seed").get<std::string>());
  h.frame_skip = j.at("frame_skip").get<std::uint32_t>();
  h.obs_mode = j.at("obs_mode").get<std::string>();
  h.noise_std = j.at("noise_std").get<double>();
  h.hash_every = j.at("hash_every").get<std::uint32_t>();
  h.initial_hash = std::stoull(j.at("initial_hash").get<std::string>());
  h.policy = j.value("policy", "");
  return h;
}

TrajectoryWriter::TrajectoryWriter(const std::string& path, const TrajectoryHeader& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) io_fail(path_, "cannot open for writing");
  out_ << header_to_json(header) << '\n';
  if (!out_) io_fail(path_, "write failed");
}

TrajectoryWriter::~TrajectoryWriter() {
  try {
    close();
  } catch (...) {
  }
}

void TrajectoryWriter::append(const StepRecord& r) {
  std::uint8_t buf[kStepRecordSize];
  encode_record(r, buf);
  out_.write(reinterpret_cast<const char*>(buf), sizeof buf);
  if (!out_) io_fail(path_, "write failed");
  if (r.flags & kHasHash) index_.emplace_back(count_, r.state_hash);
  ++count_;
}

void TrajectoryWriter::close() {
  if (closed_) return;
  closed_ = true;
  std::uint8_t buf[16];
  for (const auto& [step, hash] : index_) {
    put_u64(buf, step);
    put_u64(buf + 8, hash);
    out_.write(reinterpret_cast<const char*>(buf), 16);
  }
  put_u64(buf, index_.size());
  out_.write(reinterpret_cast<const char*>(buf), 8);
  out_.write(kIndexMagic, sizeof kIndexMagic);
  out_.close();
  if (!out_) io_fail(path_, "write failed");
}

Trajectory read_trajectory(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail(path, "cannot open for reading");
  std::string header_line;
  if (!std::getline(in, header_line)) io_fail(path, "missing header line");
  Trajectory t;
  try {
    t.header = header_from_json(header_line);
  } catch (const std::exception& e) {
    io_fail(path, std::string("bad header: ") + e.what());
  }
  std::vector<std::uint8_t> body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  std::size_t record_bytes = body.size();
  if (body.size() >= 16 && std::memcmp(body.data() + body.size() - 8, kIndexMagic, 8) == 0) {
    const std::uint64_t n = get_u64(body.data() + body.size() - 16);
    const std::size_t trailer = 16 + 16 * n;
    if (n <= body.size() / 16 && trailer <= body.size() && (body.size() - trailer) % kStepRecordSize == 0) {
      record_bytes = body.size() - trailer;
      t.has_index = true;
      const std::uint8_t* p = body.data() + record_bytes;
      for (std::uint64_t i = 0; i < n; ++i) t.index.emplace_back(get_u64(p + 16 * i), get_u64(p + 16 * i + 8));
    }
  }
  const std::size_t count = record_bytes / kStepRecordSize;
  t.steps.reserve(count);
  for (std::size_t i = 0; i < count; ++i) t.steps.push_back(decode_record(body.data() + i * kStepRecordSize));
  return t;
}

}  // namespace agarcl::harness
