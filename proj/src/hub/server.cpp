#include "crossdrop/hub/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <system_error>

#include "crossdrop/hub/websocket.hpp"

namespace crossdrop::hub {

struct HubServer::Connection {
  int fd = -1;
  std::string session_id;
  bool websocket = false;
  std::mutex write_mutex;
  std::thread reader;
};

namespace {

constexpr std::size_t kReadChunk = 64 * 1024;
constexpr std::size_t kMaxHandshake = 16 * 1024;

[[noreturn]] void throw_errno(const char* what) { throw std::system_error(errno, std::generic_category(), what); }

}  // namespace

HubServer::HubServer(Hub hub, ServerOptions options) : hub_(std::move(hub)), options_(std::move(options)) {}

HubServer::~HubServer() { stop(); }

std::uint16_t HubServer::start() {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) {
    throw_errno("socket");
  }
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(options_.port);
  if (::inet_pton(AF_INET, options_.bind_address.c_str(), &addr.sin_addr) != 1) {
    throw std::system_error(EINVAL, std::generic_category(), "bad bind address " + options_.bind_address);
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
    throw_errno("bind");
  }
  if (::listen(listen_fd_, 64) < 0) {
    throw_errno("listen");
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);

  loop_ = std::thread([this] { event_loop(); });
  acceptor_ = std::thread([this] { accept_loop(); });
  return port_;
}

void HubServer::stop() {
  if (stopping_.exchange(true)) {
    return;
  }
  queue_cv_.notify_all();
  if (acceptor_.joinable()) {
    acceptor_.join();
  }
  if (loop_.joinable()) {
    loop_.join();
  }
  std::map<std::string, std::shared_ptr<Connection>> remaining;
  {
    std::lock_guard lock(connections_mutex_);
    remaining.swap(connections_);
  }
  for (auto& [id, conn] : remaining) {
    ::shutdown(conn->fd, SHUT_RDWR);
  }
  for (auto& [id, conn] : remaining) {
    if (conn->reader.joinable()) {
      conn->reader.join();
    }
    ::close(conn->fd);
  }
  if (listen_fd_ >= 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
}

HubState HubServer::state_copy() const {
  std::lock_guard lock(hub_mutex_);
  return hub_.state();
}

void HubServer::push(Inbound inbound) {
  {
    std::lock_guard lock(queue_mutex_);
    queue_.push_back(std::move(inbound));
  }
  queue_cv_.notify_one();
}

void HubServer::accept_loop() {
  while (!stopping_) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    if (::poll(&pfd, 1, 50) <= 0) {
      continue;
    }
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      continue;
    }
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    auto conn = std::make_shared<Connection>();
    conn->fd = fd;
    conn->session_id = "s" + std::to_string(next_connection_++);
    {
      std::lock_guard lock(connections_mutex_);
      connections_[conn->session_id] = conn;
    }
    push({Inbound::Kind::kOpen, conn->session_id, std::nullopt, {}});
    conn->reader = std::thread([this, conn] { read_loop(conn); });
  }
}

bool HubServer::write_all(Connection& conn, std::span<const std::uint8_t> bytes) {
  std::lock_guard lock(conn.write_mutex);
  while (!bytes.empty()) {
    const ssize_t n = ::send(conn.fd, bytes.data(), bytes.size(), MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) {
      continue;
    }
    if (n <= 0) {
      return false;
    }
    bytes = bytes.subspan(static_cast<std::size_t>(n));
  }
  return true;
}

void HubServer::read_loop(std::shared_ptr<Connection> conn) {
  FrameReader frames;
  ws::Decoder ws_decoder;
  std::vector<std::uint8_t> chunk(kReadChunk);
  std::string handshake;
  bool sniffed = false;

  const auto deliver = [&](std::span<const std::uint8_t> bytes) -> bool {
    frames.append(bytes);
    try {
      while (auto frame = frames.next_frame()) {
        try {
          Message m = decode(*frame);
          m.session_id = conn->session_id;
          push({Inbound::Kind::kMessage, conn->session_id, std::move(m), {}});
        } catch (const ProtocolError& e) {
          push({Inbound::Kind::kBadFrame, conn->session_id, std::nullopt, e.detail()});
        }
      }
    } catch (const ProtocolError& e) {
      push({Inbound::Kind::kBadFrame, conn->session_id, std::nullopt, e.detail()});
      return false;  // framing lost
    }
    return true;
  };

  bool open = true;
  while (open && !stopping_) {
    const ssize_t n = ::recv(conn->fd, chunk.data(), chunk.size(), 0);
    if (n < 0 && errno == EINTR) {
      continue;
    }
    if (n <= 0) {
      break;
    }
    std::span<const std::uint8_t> bytes(chunk.data(), static_cast<std::size_t>(n));
    if (!sniffed) {
      handshake.append(reinterpret_cast<const char*>(bytes.data()), bytes.size());
      if (handshake.size() < 4) {
        continue;
      }
      if (handshake.compare(0, 4, "GET ") != 0) {
        sniffed = true;
        const std::vector<std::uint8_t> buffered(handshake.begin(), handshake.end());
        open = deliver(buffered);
        continue;
      }
      const auto end = handshake.find("\r\n\r\n");
      if (end == std::string::npos) {
        if (handshake.size() > kMaxHandshake) {
          break;
        }
        continue;
      }
      const auto key = ws::upgrade_key(std::string_view(handshake).substr(0, end + 4));
      if (!key) {
        const std::string reply = "HTTP/1.1 400 Bad Request\r\nContent-Length: 0\r\n\r\n";
        write_all(*conn, {reinterpret_cast<const std::uint8_t*>(reply.data()), reply.size()});
        break;
      }
      const std::string reply = ws::handshake_response(*key);
      write_all(*conn, {reinterpret_cast<const std::uint8_t*>(reply.data()), reply.size()});
      {
        std::lock_guard lock(conn->write_mutex);
        conn->websocket = true;
      }
      sniffed = true;
      const std::vector<std::uint8_t> rest(handshake.begin() + static_cast<std::ptrdiff_t>(end + 4), handshake.end());
      bytes = rest;
      ws_decoder.append(bytes);
    } else if (conn->websocket) {
      ws_decoder.append(bytes);
    } else {
      open = deliver(bytes);
      continue;
    }

    if (conn->websocket) {
      try {
        while (auto frame = ws_decoder.next()) {
          if (frame->opcode == ws::Opcode::kClose) {
            const auto reply = ws::encode_frame({}, ws::Opcode::kClose);
            write_all(*conn, reply);
            open = false;
            break;
          }
          if (frame->opcode == ws::Opcode::kPing) {
            write_all(*conn, ws::encode_frame(frame->payload, ws::Opcode::kPong));
            continue;
          }
          if (frame->opcode == ws::Opcode::kBinary || frame->opcode == ws::Opcode::kText) {
            if (!deliver(frame->payload)) {
              open = false;
              break;
            }
          }
        }
      } catch (const ProtocolError&) {
        open = false;
      }
    }
  }
  push({Inbound::Kind::kClose, conn->session_id, std::nullopt, {}});
}

void HubServer::process(Inbound& inbound, double now) {
  switch (inbound.kind) {
    case Inbound::Kind::kOpen:
      hub_.open_session(inbound.session_id, now);
      break;
    case Inbound::Kind::kMessage:
      if (hub_.has_session(inbound.session_id)) {
        hub_.handle(*inbound.message, now);
      }
      break;
    case Inbound::Kind::kBadFrame:
      hub_.report_error(inbound.session_id, 0, ErrorCode::kProtocolError, inbound.detail);
      break;
    case Inbound::Kind::kClose: {
      hub_.close_session(inbound.session_id, now);
      std::shared_ptr<Connection> conn;
      {
        std::lock_guard lock(connections_mutex_);
        const auto it = connections_.find(inbound.session_id);
        if (it != connections_.end()) {
          conn = it->second;
          connections_.erase(it);
        }
      }
      if (conn) {
        ::shutdown(conn->fd, SHUT_RDWR);
        if (conn->reader.joinable()) {
          conn->reader.join();
        }
        ::close(conn->fd);
      }
      break;
    }
  }
}

void HubServer::flush() {
  std::vector<std::shared_ptr<Connection>> conns;
  {
    std::lock_guard lock(connections_mutex_);
    for (auto& [id, conn] : connections_) {
      conns.push_back(conn);
    }
  }
  for (auto& conn : conns) {
    for (const auto& m : hub_.drain(conn->session_id)) {
      const auto frame = encode(m);
      bool ws_mode = false;
      {
        std::lock_guard lock(conn->write_mutex);
        ws_mode = conn->websocket;
      }
      const bool ok = ws_mode ? write_all(*conn, ws::encode_frame(frame)) : write_all(*conn, frame);
      if (!ok) {
        ::shutdown(conn->fd, SHUT_RDWR);  // reader notices and reports the close
        break;
      }
    }
  }
}

void HubServer::event_loop() {
  using clock = std::chrono::steady_clock;
  const auto started = clock::now();
  const auto period = std::chrono::duration<double>(1.0 / options_.tick_hz);
  std::uint64_t ticks = 0;
  auto next_tick = started + std::chrono::duration_cast<clock::duration>(period);

  const auto hub_now = [&] {
    if (options_.virtual_clock) {
      return static_cast<double>(ticks) / options_.tick_hz;
    }
    return std::chrono::duration<double>(clock::now() - started).count();
  };

  while (!stopping_) {
    std::deque<Inbound> batch;
    {
      std::unique_lock lock(queue_mutex_);
      queue_cv_.wait_until(lock, next_tick, [&] { return stopping_ || !queue_.empty(); });
      batch.swap(queue_);
    }
    std::lock_guard hub_lock(hub_mutex_);
    for (auto& inbound : batch) {
      process(inbound, hub_now());
    }
    if (clock::now() >= next_tick) {
      ++ticks;
      hub_.tick(hub_now());
      next_tick += std::chrono::duration_cast<clock::duration>(period);
      if (next_tick < clock::now()) {
        next_tick = clock::now() + std::chrono::duration_cast<clock::duration>(period);
      }
    }
    flush();
  }
}

}  // namespace crossdrop::hub
