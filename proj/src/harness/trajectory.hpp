#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace agarcl::harness {

constexpr int kTrajectoryVersion = 1;
constexpr std::size_t kStepRecordSize = 56;
constexpr char kIndexMagic[8] = {'A', 'G', 'T', 'R', 'I', 'D', 'X', '1'};

/// First line of a trajectory file, stored as JSON.
struct TrajectoryHeader {
  int version = kTrajectoryVersion;
  std::string scenario;
  std::string scenario_yaml;  // fully expanded, so replay needs no catalog
  std::uint64_t config_digest = 0;
  std::uint64_t seed = 0;
  std::uint32_t frame_skip = 4;
  std::string obs_mode = "pixel";
  double noise_std = 1.0;
  std::uint32_t hash_every = 1;
  std::uint64_t initial_hash = 0;
  std::string policy;
};

enum StepFlags : std::uint8_t {
  kTerminated = 1,
  kTruncated = 2,
  kResetBefore = 4,  // env was reset before this step was taken
  kHasHash = 8,
};

/// One decision. Stored as a fixed 56-byte little-endian record:
/// tick u64 | cursor_x f64 | cursor_y f64 | discrete u8 | flags u8 | pad u16 |
/// deaths u32 | reward f64 | mass f64 | state_hash u64.
struct StepRecord {
  std::uint64_t tick = 0;
  double cursor_x = 0.0;
  double cursor_y = 0.0;
  std::uint8_t discrete = 0;
  std::uint8_t flags = 0;
  std::uint32_t deaths = 0;
  double reward = 0.0;
  double mass = 0.0;
  std::uint64_t state_hash = 0;  // meaningful only with kHasHash

  bool operator==(const StepRecord&) const = default;
};

void encode_record(const StepRecord& r, std::uint8_t* out);
StepRecord decode_record(const std::uint8_t* in);

std::string header_to_json(const TrajectoryHeader& h);
TrajectoryHeader header_from_json(const std::string& line);

/// Streams records to disk; the hash index is appended by close().
class TrajectoryWriter {
 public:
  TrajectoryWriter(const std::string& path, const TrajectoryHeader& header);
  ~TrajectoryWriter();
  TrajectoryWriter(const TrajectoryWriter&) = delete;
  TrajectoryWriter& operator=(const TrajectoryWriter&) = delete;

  void append(const StepRecord& r);
  void close();
  std::uint64_t count() const { return count_; }

 private:
  std::string path_;
  std::ofstream out_;
  std::uint64_t count_ = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> index_;
  bool closed_ = false;
};

struct Trajectory {
  TrajectoryHeader header;
  std::vector<StepRecord> steps;
  bool has_index = false;
  /// (step index, hash) pairs from the trailer, when present.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> index;
};

/// Throws std::runtime_error with the path on I/O or format errors. A file
/// cut short (no trailer, partial last record) yields the complete records.
Trajectory read_trajectory(const std::string& path);

}  // namespace agarcl::harness
