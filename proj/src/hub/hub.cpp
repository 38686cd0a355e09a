#include "crossdrop/hub/hub.hpp"

#include "crossdrop/core/error.hpp"
#include "crossdrop/core/overloaded.hpp"

namespace crossdrop::hub {

Hub::Hub(HubContext ctx, HubState initial, double session_timeout)
    : ctx_(std::move(ctx)), state_(std::move(initial)), session_timeout_(session_timeout) {}

std::string Hub::open_session(std::optional<std::string> id, double now) {
  std::string session_id;
  if (id) {
    session_id = std::move(*id);
  } else {
    do {
      session_id = "s" + std::to_string(next_session_++);
    } while (sessions_.contains(session_id));
  }
  if (sessions_.contains(session_id)) {
    throw Error(ErrorCode::kInvalidArgument, "session '" + session_id + "' already open");
  }
  Session s;
  s.session_id = session_id;
  s.deadline = now + session_timeout_;
  sessions_.emplace(session_id, std::move(s));
  return session_id;
}

const Session* Hub::session(const std::string& session_id) const {
  const auto it = sessions_.find(session_id);
  return it == sessions_.end() ? nullptr : &it->second;
}

std::optional<std::string> Hub::operator_session() const {
  for (const auto& [id, s] : sessions_) {
    if (s.role == Role::kOperator) {
      return id;
    }
  }
  return std::nullopt;
}

void Hub::send(Session& session, Body body) {
  outbox_[session.session_id].push_back(Message{session.session_id, ++session.out_seq, std::move(body)});
}

void Hub::reject(Session& session, std::uint64_t seq, ErrorCode code, std::string detail) {
  msg::Error error{code, std::move(detail)};
  if (observer_) {
    observer_(Message{session.session_id, seq, error});
  }
  send(session, std::move(error));
}

void Hub::publish(EventResult result, Session* origin, std::uint64_t origin_seq) {
  if (result.error) {
    if (origin != nullptr) {
      reject(*origin, origin_seq, result.error->code, result.error->detail);
    }
    return;
  }
  state_ = std::move(result.state);
  for (auto& delta : result.deltas) {
    if (observer_) {
      observer_(Message{"*", delta.seq, delta});
    }
    for (auto& [id, s] : sessions_) {
      if (s.role) {
        send(s, delta);
      }
    }
  }
}

void Hub::handle(const Message& message, double now) {
  const auto it = sessions_.find(message.session_id);
  if (it == sessions_.end()) {
    throw Error(ErrorCode::kNotFound, "unknown session '" + message.session_id + "'");
  }
  Session& s = it->second;
  if (message.seq <= s.last_seq) {
    reject(s, message.seq, ErrorCode::kProtocolError,
           "seq " + std::to_string(message.seq) + " not above " + std::to_string(s.last_seq));
    return;
  }
  s.last_seq = message.seq;
  s.deadline = now + session_timeout_;

  const auto& body = message.body;
  if (std::holds_alternative<msg::RegisterOperator>(body)) {
    if (s.role) {
      reject(s, message.seq, ErrorCode::kForbidden, "session already registered");
    } else if (operator_session()) {
      reject(s, message.seq, ErrorCode::kForbidden, "an operator is already attached");
    } else {
      s.role = Role::kOperator;
      send(s, msg::Snapshot{state_});
      send(s, msg::Ack{message.seq});
    }
    return;
  }
  if (const auto* reg = std::get_if<msg::RegisterDisplay>(&body)) {
    if (s.role) {
      reject(s, message.seq, ErrorCode::kForbidden, "session already registered");
      return;
    }
    for (const auto& [id, other] : sessions_) {
      if (other.display_id == reg->profile.id) {
        reject(s, message.seq, ErrorCode::kForbidden, "display '" + reg->profile.id + "' is owned by another session");
        return;
      }
    }
    auto result = apply_event(state_, message, Role::kDisplay, now, ctx_);
    const bool accepted = !result.error;
    publish(std::move(result), &s, message.seq);
    if (accepted) {
      s.role = Role::kDisplay;
      s.display_id = reg->profile.id;
      send(s, msg::Snapshot{state_});
      send(s, msg::Ack{message.seq});
    }
    return;
  }
  if (std::holds_alternative<msg::SnapshotRequest>(body)) {
    if (!s.role) {
      reject(s, message.seq, ErrorCode::kForbidden, "register before requesting a snapshot");
    } else {
      send(s, msg::Snapshot{state_});
    }
    return;
  }
  if (std::holds_alternative<msg::Ack>(body)) {
    return;  // client heartbeat / delivery acknowledgement
  }
  if (!s.role) {
    reject(s, message.seq, ErrorCode::kForbidden, "session is not registered");
    return;
  }
  if (const auto* g = std::get_if<msg::Gesture>(&body); g && s.role == Role::kOperator) {
    if (s.last_gesture_seq && g->event.seq <= *s.last_gesture_seq) {
      reject(s, message.seq, ErrorCode::kInvalidArgument, "gesture seq must increase");
      return;
    }
    s.last_gesture_seq = g->event.seq;
  }
  auto result = apply_event(state_, message, *s.role, now, ctx_);
  const bool accepted = !result.error;
  publish(std::move(result), &s, message.seq);
  if (accepted) {
    send(s, msg::Ack{message.seq});
  }
}

void Hub::tick(double now) {
  if (now < last_tick_) {
    throw Error(ErrorCode::kInvalidArgument, "clock went backwards");
  }
  last_tick_ = now;
  std::vector<std::string> expired;
  for (const auto& [id, s] : sessions_) {
    if (s.deadline < now) {
      expired.push_back(id);
    }
  }
  for (const auto& id : expired) {
    close_session_internal(id);
  }
  publish(hub::tick(state_, now, ctx_), nullptr, 0);
}

void Hub::close_session(const std::string& session_id, double now) {
  (void)now;
  close_session_internal(session_id);
}

void Hub::close_session_internal(const std::string& session_id) {
  const auto it = sessions_.find(session_id);
  if (it == sessions_.end()) {
    return;
  }
  const std::optional<DisplayId> display = it->second.display_id;
  sessions_.erase(it);
  outbox_.erase(session_id);
  if (display && state_.world.displays.contains(*display)) {
    publish(disconnect_display(state_, *display, ctx_), nullptr, 0);
  }
}

void Hub::report_error(const std::string& session_id, std::uint64_t seq, ErrorCode code, std::string detail) {
  const auto it = sessions_.find(session_id);
  if (it != sessions_.end()) {
    reject(it->second, seq, code, std::move(detail));
  }
}

std::vector<Message> Hub::drain(const std::string& session_id) {
  const auto it = outbox_.find(session_id);
  if (it == outbox_.end()) {
    return {};
  }
  std::vector<Message> out = std::move(it->second);
  outbox_.erase(it);
  return out;
}

}  // namespace crossdrop::hub
