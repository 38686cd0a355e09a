#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "crossdrop/hub/hub.hpp"

namespace crossdrop::hub {

struct ServerOptions {
  std::string bind_address = "127.0.0.1";
  std::uint16_t port = 0;  // 0 picks an ephemeral port
  double tick_hz = 60.0;
  // Hub time advances exactly 1/tick_hz per tick instead of following the wall clock.
  bool virtual_clock = false;
};

// Serves the hub over TCP. Each connection is either raw length-prefixed
// frames or, if it opens with an HTTP upgrade, a WebSocket whose binary
// messages carry the same frames.
//
// Threads: one acceptor, one reader per connection, one event loop. Readers
// only decode and enqueue; the event loop is the single writer of hub state
// and the only thread that sends hub traffic.
class HubServer {
 public:
  HubServer(Hub hub, ServerOptions options);
  ~HubServer();

  HubServer(const HubServer&) = delete;
  HubServer& operator=(const HubServer&) = delete;

  // Binds and starts serving; returns the bound port. Throws std::system_error.
  std::uint16_t start();
  void stop();

  std::uint16_t port() const noexcept { return port_; }
  HubState state_copy() const;

 private:
  struct Connection;
  struct Inbound {
    enum class Kind { kOpen, kMessage, kBadFrame, kClose } kind;
    std::string session_id;
    std::optional<Message> message;
    std::string detail;
  };

  void accept_loop();
  void read_loop(std::shared_ptr<Connection> conn);
  void event_loop();
  void push(Inbound inbound);
  void process(Inbound& inbound, double now);
  void flush();
  bool write_all(Connection& conn, std::span<const std::uint8_t> bytes);

  mutable std::mutex hub_mutex_;
  Hub hub_;
  ServerOptions options_;
  std::uint16_t port_ = 0;
  int listen_fd_ = -1;
  std::atomic<bool> stopping_{false};
  std::atomic<std::uint64_t> next_connection_{1};

  std::mutex queue_mutex_;
  std::condition_variable queue_cv_;
  std::deque<Inbound> queue_;

  std::mutex connections_mutex_;
  std::map<std::string, std::shared_ptr<Connection>> connections_;

  std::thread acceptor_;
  std::thread loop_;
};

}  // namespace crossdrop::hub
