#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "commands.hpp"

namespace agarcl::harness {

enum class ServeMode { Agent, Human };

struct ServerOptions {
  std::string address = "127.0.0.1";
  std::uint16_t port = 0;  // 0: pick a free port
  ServeMode mode = ServeMode::Agent;
  /// Defaults for sessions; an agent's hello may override scenario, seed,
  /// obs, frame skip and noise. Human mode uses these for its shared world.
  EnvSpec env;
  std::uint32_t snapshot_every = 2;   // human mode, in ticks
  double tick_rate = 60.0;            // human mode wall-clock rate
  double idle_timeout_seconds = 30.0; // agent mode: silent clients are dropped
  /// Agent mode: "<prefix>-<session>.traj" per session. Human mode: the path itself.
  std::string record;
  std::uint32_t hash_every = 1;
};

/// Websocket session server. Single-threaded: all sessions and the human-mode
/// world live on one event loop, so no env is touched by two writers.
class Server {
 public:
  explicit Server(ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  std::uint16_t port() const;
  /// Serves until stop() (or SIGINT/SIGTERM when handle_signals).
  void run(bool handle_signals = false);
  /// Safe to call from any thread.
  void stop();

  struct Impl;

 private:
  std::shared_ptr<Impl> impl_;
};

}  // namespace agarcl::harness
