#include "server.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstring>
#include <deque>
#include <iostream>
#include <optional>
#include <set>

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/signal_set.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "protocol.hpp"

namespace agarcl::harness {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;
using Bytes = std::shared_ptr<const std::vector<std::uint8_t>>;

namespace {

constexpr std::size_t kMaxQueuedSnapshots = 64;

Bytes pack(const wire::Message& m) { return std::make_shared<const std::vector<std::uint8_t>>(wire::encode(m)); }

std::vector<std::uint8_t> observation_bytes(CEnv& env, int obs_mode, std::uint32_t& resolution) {
  if (obs_mode == AGARCL_OBS_PIXEL) {
    const auto px = env.pixels();
    resolution = env.info().obs_resolution;
    std::vector<std::uint8_t> out(px.size() * 4);
    for (std::size_t i = 0; i < px.size(); ++i) {
      const auto bits = std::bit_cast<std::uint32_t>(px[i]);
      for (int b = 0; b < 4; ++b) out[4 * i + b] = static_cast<std::uint8_t>(bits >> (8 * b));
    }
    return out;
  }
  resolution = 0;
  const std::string j = env.symbolic_json();
  return {j.begin(), j.end()};
}

}  // namespace

class Session;

struct Server::Impl : std::enable_shared_from_this<Server::Impl> {
  explicit Impl(ServerOptions o) : options(std::move(o)), acceptor(ioc), timer(ioc), signals(ioc) {}

  ServerOptions options;
  net::io_context ioc{1};
  tcp::acceptor acceptor;
  net::steady_timer timer;
  net::signal_set signals;
  std::set<std::shared_ptr<Session>> sessions;
  std::uint64_t next_session_id = 1;
  bool stopping = false;

  // Human mode: one shared world driven by the wall clock.
  std::optional<CEnv> world;
  std::optional<TrajectoryWriter> human_log;
  std::weak_ptr<Session> human;
  bool ticking = false;
  wire::ActionMsg latest;
  std::uint8_t pending_discrete = 0;
  bool needs_reset = false;
  std::uint64_t human_steps = 0;
  std::uint64_t human_deaths = 0;
  double human_reward = 0.0;
  std::chrono::steady_clock::time_point next_tick;
  std::chrono::steady_clock::time_point fps_window_start;
  std::uint64_t fps_window_ticks = 0;
  double fps = 0.0;

  void start_accept();
  void on_session_closed(const std::shared_ptr<Session>& s);
  void broadcast(const Bytes& msg);
  void start_ticking();
  void schedule_tick();
  void tick();
  void shutdown();
  wire::ServerConfig config_for(CEnv& env, const std::string& role, const std::string& obs) const;
};

class Session : public std::enable_shared_from_this<Session> {
 public:
  Session(tcp::socket socket, std::shared_ptr<Server::Impl> server, std::uint64_t id)
      : ws_(std::move(socket)), server_(std::move(server)), id_(id) {}

  void start() {
    ws_.binary(true);
    ws_.read_message_max(1u << 20);
    if (server_->options.mode == ServeMode::Agent) {
      websocket::stream_base::timeout t{};
      t.handshake_timeout = std::chrono::seconds(30);
      t.idle_timeout = std::chrono::milliseconds(static_cast<long>(server_->options.idle_timeout_seconds * 1000));
      t.keep_alive_pings = false;
      ws_.set_option(t);
    } else {
      ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    }
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) return self->finish();
      self->read();
    });
  }

  /// Queues a message; snapshots are dropped for clients too slow to keep up.
  void send(const Bytes& msg, bool droppable = false) {
    if (closed_) return;
    if (droppable && queue_.size() >= kMaxQueuedSnapshots) return;
    queue_.push_back(msg);
    if (queue_.size() == 1) write_next();
  }

  /// Sends an error then closes the connection.
  void fail(wire::ErrorCode code, const std::string& text) {
    send(pack(wire::Error{code, text}));
    close_after_flush_ = true;
  }

  void close() {
    if (closed_) return;
    close_after_flush_ = true;
    if (queue_.empty()) do_close();
  }

  bool joined() const { return joined_; }
  wire::Role role() const { return role_; }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->finish();
      const auto data = self->buffer_.cdata();
      std::vector<std::uint8_t> bytes(static_cast<const std::uint8_t*>(data.data()),
                                      static_cast<const std::uint8_t*>(data.data()) + data.size());
      self->buffer_.consume(self->buffer_.size());
      self->handle(bytes);
      if (!self->close_after_flush_ && !self->closed_) self->read();
    });
  }

  void handle(const std::vector<std::uint8_t>& bytes) {
    if (!ws_.got_binary()) return fail(wire::ErrorCode::Malformed, "expected a binary message");
    wire::Message msg;
    try {
      msg = wire::decode(bytes);
    } catch (const wire::DecodeError& e) {
      return fail(e.code(), e.what());
    }
    try {
      if (!joined_) {
        if (!std::holds_alternative<wire::Hello>(msg))
          return fail(wire::ErrorCode::UnexpectedMessage, "first message must be hello");
        return on_hello(std::get<wire::Hello>(msg));
      }
      if (server_->options.mode == ServeMode::Agent) return on_agent_message(msg);
      return on_human_message(msg);
    } catch (const ApiError& e) {
      const auto code = e.status() == AGARCL_E_PROTOCOL ? wire::ErrorCode::EnvProtocol
                        : e.status() == AGARCL_E_CONFIG ? wire::ErrorCode::BadConfig
                                                        : wire::ErrorCode::Internal;
      return fail(code, e.what());
    } catch (const std::exception& e) {
      return fail(wire::ErrorCode::Internal, e.what());
    }
  }

  void on_hello(const wire::Hello& h) {
    const ServerOptions& opt = server_->options;
    if (opt.mode == ServeMode::Agent) {
      if (h.role != wire::Role::Agent)
        return fail(wire::ErrorCode::UnexpectedMessage, "this server runs in agent mode; role must be agent");
      EnvSpec spec = opt.env;
      if (!h.scenario.empty()) {
        spec.scenario = h.scenario;
        spec.scenario_file.clear();
      }
      spec.seed = h.seed;
      spec.obs = h.obs;
      if (h.frame_skip) spec.frame_skip = *h.frame_skip;
      if (h.noise_std) spec.noise_std = *h.noise_std;
      try {
        obs_mode_ = obs_mode_from_string(spec.obs);
        env_.emplace(open_env(spec));
      } catch (const std::invalid_argument& e) {
        return fail(wire::ErrorCode::BadConfig, e.what());
      } catch (const ApiError& e) {
        return fail(wire::ErrorCode::BadConfig, e.what());
      }
      if (!opt.record.empty()) {
        const agarcl_env_info info = env_->info();
        TrajectoryHeader th;
        th.scenario = env_->scenario_name();
        th.scenario_yaml = env_->scenario_yaml();
        th.config_digest = env_->config_digest();
        th.seed = spec.seed;
        th.frame_skip = info.frame_skip;
        th.obs_mode = spec.obs;
        th.noise_std = info.noise_std;
        th.hash_every = opt.hash_every;
        th.initial_hash = env_->state_hash();
        th.policy = "remote-agent";
        log_.emplace(opt.record + "-" + std::to_string(id_) + ".traj", th);
      }
      role_ = wire::Role::Agent;
      joined_ = true;
      send(pack(server_->config_for(*env_, "agent", spec.obs)));
      return;
    }
    if (h.role == wire::Role::Agent)
      return fail(wire::ErrorCode::UnexpectedMessage, "this server runs in human mode; role must be human or spectator");
    if (h.role == wire::Role::Human) {
      if (auto current = server_->human.lock(); current && current.get() != this)
        return fail(wire::ErrorCode::UnexpectedMessage, "a human player is already connected");
      server_->human = weak_from_this();
    }
    role_ = h.role;
    joined_ = true;
    send(pack(server_->config_for(*server_->world, wire::to_string(h.role), "snapshot")));
    if (h.role == wire::Role::Human) server_->start_ticking();
  }

  void on_agent_message(const wire::Message& msg) {
    if (const auto* a = std::get_if<wire::ActionMsg>(&msg)) {
      if (a->discrete > AGARCL_EJECT) return fail(wire::ErrorCode::Malformed, "discrete must be 0, 1 or 2");
      const Action act{static_cast<double>(a->x), static_cast<double>(a->y), a->discrete};
      const agarcl_step_result r = env_->step(act);
      ++steps_;
      if (log_) {
        StepRecord rec{r.tick, act.x, act.y, act.discrete, pending_flags_, r.deaths, r.reward, r.mass, 0};
        if (r.terminated) rec.flags |= kTerminated;
        if (r.truncated) rec.flags |= kTruncated;
        if (steps_ % server_->options.hash_every == 0) {
          rec.flags |= kHasHash;
          rec.state_hash = env_->state_hash();
        }
        log_->append(rec);
      }
      pending_flags_ = 0;
      send_frame(r.tick, r.reward, r.mass, r.deaths, r.terminated, r.truncated);
      return;
    }
    if (std::holds_alternative<wire::Reset>(msg)) {
      // Before the first step a reset just returns the initial observation.
      if (steps_ > 0 || env_->info().episode_over) {
        env_->reset();
        pending_flags_ = kResetBefore;
      }
      const agarcl_env_info info = env_->info();
      send_frame(info.tick, 0.0, info.mass, 0, 0, 0);
      return;
    }
    fail(wire::ErrorCode::UnexpectedMessage, "agents may send only action and reset messages");
  }

  void on_human_message(const wire::Message& msg) {
    if (role_ != wire::Role::Human) return fail(wire::ErrorCode::UnexpectedMessage, "spectators only listen");
    if (const auto* a = std::get_if<wire::ActionMsg>(&msg)) {
      if (a->discrete > AGARCL_EJECT) return fail(wire::ErrorCode::Malformed, "discrete must be 0, 1 or 2");
      server_->latest = *a;
      server_->latest.x = std::clamp(a->x, -1.0f, 1.0f);
      server_->latest.y = std::clamp(a->y, -1.0f, 1.0f);
      if (a->discrete != 0) server_->pending_discrete = a->discrete;
      return;
    }
    fail(wire::ErrorCode::UnexpectedMessage, "human clients send only action messages");
  }

  void send_frame(std::uint64_t tick, double reward, double mass, std::uint32_t deaths, int terminated,
                  int truncated) {
    wire::Frame f;
    f.tick = tick;
    f.step = steps_;
    f.reward = reward;
    f.mass = mass;
    f.deaths = deaths;
    f.terminated = static_cast<std::uint8_t>(terminated);
    f.truncated = static_cast<std::uint8_t>(truncated);
    f.obs_kind = obs_mode_ == AGARCL_OBS_PIXEL ? wire::ObsKind::Pixel : wire::ObsKind::Symbolic;
    f.obs = observation_bytes(*env_, obs_mode_, f.resolution);
    send(pack(f));
  }

  void write_next() {
    ws_.async_write(net::buffer(*queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->finish();
      self->queue_.pop_front();
      if (!self->queue_.empty()) return self->write_next();
      if (self->close_after_flush_) self->do_close();
    });
  }

  void do_close() {
    if (closing_) return;
    closing_ = true;
    ws_.async_close(websocket::close_code::normal,
                    [self = shared_from_this()](beast::error_code) { self->finish(); });
  }

  void finish() {
    if (closed_) return;
    closed_ = true;
    if (log_) log_->close();
    beast::error_code ignored;
    beast::get_lowest_layer(ws_).socket().close(ignored);
    server_->on_session_closed(shared_from_this());
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::shared_ptr<Server::Impl> server_;
  std::uint64_t id_;
  std::deque<Bytes> queue_;
  bool joined_ = false;
  bool close_after_flush_ = false;
  bool closing_ = false;
  bool closed_ = false;
  wire::Role role_ = wire::Role::Agent;
  std::optional<CEnv> env_;
  std::optional<TrajectoryWriter> log_;
  int obs_mode_ = AGARCL_OBS_PIXEL;
  std::uint64_t steps_ = 0;
  std::uint8_t pending_flags_ = 0;
};

wire::ServerConfig Server::Impl::config_for(CEnv& env, const std::string& role, const std::string& obs) const {
  const agarcl_env_info info = env.info();
  wire::ServerConfig c;
  c.role = role;
  c.tick_rate = options.mode == ServeMode::Human ? options.tick_rate : 60.0;
  c.scenario = env.scenario_name();
  c.scenario_yaml = env.scenario_yaml();
  c.obs = obs;
  c.frame_skip = info.frame_skip;
  c.resolution = info.obs_resolution;
  c.snapshot_every = options.snapshot_every;
  return c;
}

void Server::Impl::start_accept() {
  acceptor.async_accept([self = shared_from_this()](beast::error_code ec, tcp::socket socket) {
    if (self->stopping) return;
    if (!ec) {
      // Lock-step traffic is small request/response pairs; Nagle would stall each one.
      beast::error_code ignored;
      socket.set_option(tcp::no_delay(true), ignored);
      auto s = std::make_shared<Session>(std::move(socket), self, self->next_session_id++);
      self->sessions.insert(s);
      s->start();
    }
    self->start_accept();
  });
}

void Server::Impl::on_session_closed(const std::shared_ptr<Session>& s) { sessions.erase(s); }

void Server::Impl::broadcast(const Bytes& msg) {
  for (const auto& s : sessions)
    if (s->joined()) s->send(msg, true);
}

void Server::Impl::start_ticking() {
  if (ticking) return;
  ticking = true;
  next_tick = std::chrono::steady_clock::now();
  fps_window_start = next_tick;
  schedule_tick();
}

void Server::Impl::schedule_tick() {
  const auto period = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(1.0 / options.tick_rate));
  next_tick += period;
  timer.expires_at(next_tick);
  timer.async_wait([self = shared_from_this()](beast::error_code ec) {
    if (ec || self->stopping) return;
    try {
      self->tick();
    } catch (const std::exception& e) {
      std::cerr << "agarcl serve: tick failed: " << e.what() << "\n";
      self->broadcast(pack(wire::Error{wire::ErrorCode::Internal, e.what()}));
      return;
    }
    self->schedule_tick();
  });
}

void Server::Impl::tick() {
  std::uint8_t flags = 0;
  if (needs_reset) {
    world->reset();
    flags |= kResetBefore;
    needs_reset = false;
  }
  // Cursor is level-held; a discrete press is used once.
  const Action a{static_cast<double>(latest.x), static_cast<double>(latest.y), pending_discrete};
  pending_discrete = 0;
  const agarcl_step_result r = world->step(a);
  ++human_steps;
  human_deaths += r.deaths;
  human_reward += r.reward;
  if (r.terminated) flags |= kTerminated;
  if (r.truncated) flags |= kTruncated;
  if (world->info().episodic && (r.terminated || r.truncated)) needs_reset = true;
  if (human_log) {
    StepRecord rec{r.tick, a.x, a.y, a.discrete, flags, r.deaths, r.reward, r.mass, 0};
    if (human_steps % options.hash_every == 0) {
      rec.flags |= kHasHash;
      rec.state_hash = world->state_hash();
    }
    human_log->append(rec);
  }

  ++fps_window_ticks;
  const auto now = std::chrono::steady_clock::now();
  const double window = std::chrono::duration<double>(now - fps_window_start).count();
  if (window >= 1.0) {
    fps = static_cast<double>(fps_window_ticks) / window;
    fps_window_ticks = 0;
    fps_window_start = now;
    broadcast(pack(wire::Stats{fps, r.mass, human_deaths, r.tick}));
  }
  if (human_steps % options.snapshot_every == 0) {
    std::string json = "{\"tick\":" + std::to_string(r.tick) + ",\"step\":" + std::to_string(human_steps) +
                       ",\"mass\":" + std::to_string(r.mass) + ",\"deaths\":" + std::to_string(human_deaths) +
                       ",\"total_reward\":" + std::to_string(human_reward) + ",\"obs\":" + world->symbolic_json() +
                       "}";
    broadcast(pack(wire::Snapshot{std::move(json)}));
  }
}

void Server::Impl::shutdown() {
  if (stopping) return;
  stopping = true;
  beast::error_code ignored;
  acceptor.close(ignored);
  timer.cancel();
  signals.cancel();
  for (const auto& s : std::set<std::shared_ptr<Session>>(sessions)) s->close();
  if (human_log) human_log->close();
  // Give sessions a moment to flush their close frames.
  auto grace = std::make_shared<net::steady_timer>(ioc, std::chrono::milliseconds(200));
  grace->async_wait([self = shared_from_this(), grace](beast::error_code) { self->ioc.stop(); });
}

Server::Server(ServerOptions options) : impl_(std::make_shared<Impl>(std::move(options))) {
  auto& o = impl_->options;
  if (o.snapshot_every == 0) throw std::invalid_argument("snapshot_every must be >= 1");
  if (o.hash_every == 0) throw std::invalid_argument("hash_every must be >= 1");
  if (!(o.tick_rate > 0.0)) throw std::invalid_argument("tick_rate must be positive");
  if (o.mode == ServeMode::Human) {
    EnvSpec spec = o.env;
    // A person steers directly: one tick per input, no actuation noise unless asked.
    if (spec.frame_skip == 0) spec.frame_skip = 1;
    if (!spec.noise_std) spec.noise_std = 0.0;
    impl_->world.emplace(open_env(spec));
    if (!o.record.empty()) {
      const agarcl_env_info info = impl_->world->info();
      TrajectoryHeader th;
      th.scenario = impl_->world->scenario_name();
      th.scenario_yaml = impl_->world->scenario_yaml();
      th.config_digest = impl_->world->config_digest();
      th.seed = spec.seed;
      th.frame_skip = info.frame_skip;
      th.obs_mode = spec.obs;
      th.noise_std = info.noise_std;
      th.hash_every = o.hash_every;
      th.initial_hash = impl_->world->state_hash();
      th.policy = "human";
      impl_->human_log.emplace(o.record, th);
    }
  }
  const tcp::endpoint endpoint(net::ip::make_address(o.address), o.port);
  impl_->acceptor.open(endpoint.protocol());
  impl_->acceptor.set_option(net::socket_base::reuse_address(true));
  impl_->acceptor.bind(endpoint);
  impl_->acceptor.listen(net::socket_base::max_listen_connections);
}

Server::~Server() = default;

std::uint16_t Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::run(bool handle_signals) {
  if (handle_signals) {
    impl_->signals.add(SIGINT);
    impl_->signals.add(SIGTERM);
    impl_->signals.async_wait([impl = impl_](beast::error_code ec, int) {
      if (!ec) impl->shutdown();
    });
  }
  impl_->start_accept();
  impl_->ioc.run();
}

void Server::stop() {
  net::post(impl_->ioc, [impl = impl_] { impl->shutdown(); });
}

}  // namespace agarcl::harness
