#pragma once

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crossdrop/hub/engine.hpp"
#include "crossdrop/hub/protocol.hpp"

namespace crossdrop::hub {

struct Session {
  std::string session_id;
  std::optional<Role> role;            // unset until RegisterOperator/RegisterDisplay
  std::uint64_t last_seq = 0;          // highest inbound seq accepted
  std::uint64_t out_seq = 0;           // last outbound seq issued
  std::optional<DisplayId> display_id;
  double deadline = std::numeric_limits<double>::infinity();
  std::optional<std::uint64_t> last_gesture_seq;
};

// Single-threaded authoritative hub. Every call mutates state in arrival order;
// the caller (server event loop or scenario runner) serializes them.
//
// Outbound traffic is queued per session and collected with drain(). Each
// registered session receives a Snapshot on registration followed by every
// Delta, so its delta seqs are contiguous from the snapshot.
class Hub {
 public:
  using Observer = std::function<void(const Message&)>;

  Hub(HubContext ctx, HubState initial, double session_timeout = std::numeric_limits<double>::infinity());

  // Opens a session; generates "s<N>" when no id is given. Throws
  // Error{kInvalidArgument} if the id is already open.
  std::string open_session(std::optional<std::string> id = std::nullopt, double now = 0.0);
  // Drops the session; a display session's display is disconnected.
  void close_session(const std::string& session_id, double now);
  bool has_session(const std::string& session_id) const { return sessions_.contains(session_id); }

  // `message.session_id` names the sending session.
  void handle(const Message& message, double now);

  // Advances the clock: completes due transfers and expires idle sessions.
  // Throws Error{kInvalidArgument} if now is earlier than the previous tick.
  void tick(double now);

  std::vector<Message> drain(const std::string& session_id);

  // Queues an Error for a session, e.g. for a frame that failed to decode.
  void report_error(const std::string& session_id, std::uint64_t seq, ErrorCode code, std::string detail);

  const HubState& state() const noexcept { return state_; }
  const HubContext& context() const noexcept { return ctx_; }
  const Session* session(const std::string& session_id) const;
  std::optional<std::string> operator_session() const;
  double now() const noexcept { return last_tick_; }

  // Sees every Delta (session_id "*", seq = delta seq) and every Error
  // (session_id of the offender, seq of the offending message) once, in
  // emission order.
  void set_observer(Observer observer) { observer_ = std::move(observer); }

 private:
  void send(Session& session, Body body);
  void reject(Session& session, std::uint64_t seq, ErrorCode code, std::string detail);
  void publish(EventResult result, Session* origin, std::uint64_t origin_seq);
  void close_session_internal(const std::string& session_id);

  HubContext ctx_;
  HubState state_;
  double session_timeout_;
  double last_tick_ = 0.0;
  std::uint64_t next_session_ = 1;
  std::map<std::string, Session> sessions_;
  std::map<std::string, std::vector<Message>> outbox_;
  Observer observer_;
};

}  // namespace crossdrop::hub
