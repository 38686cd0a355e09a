#include "crossdrop/core/lifecycle.hpp"

#include "crossdrop/core/error.hpp"
#include "crossdrop/core/overloaded.hpp"

namespace crossdrop {

namespace {

[[noreturn]] void reject(const PlacementState& state, std::string_view event) {
  throw Error(ErrorCode::kTransitionRejected,
              std::string(event) + " is not allowed from " + std::string(to_string(node_of(state))));
}

PlacementState to_state(const std::variant<InControl, Displayed>& resting) {
  return std::visit([](const auto& s) -> PlacementState { return s; }, resting);
}

// The resting state a transit in `direction` ends at (forward) or returns to (!forward).
bool resting_matches(TransferDirection direction, bool forward, const std::variant<InControl, Displayed>& resting) {
  const bool to_display = (direction == TransferDirection::kPlacement) == forward;
  return to_display ? std::holds_alternative<Displayed>(resting) : std::holds_alternative<InControl>(resting);
}

}  // namespace

LifecycleNode node_of(const PlacementState& state) noexcept {
  if (std::holds_alternative<InControl>(state)) {
    return LifecycleNode::kInControl;
  }
  if (const auto* transit = std::get_if<InTransit>(&state)) {
    return transit->direction == TransferDirection::kPlacement ? LifecycleNode::kInTransitPlacement
                                                               : LifecycleNode::kInTransitRetrieval;
  }
  return LifecycleNode::kDisplayed;
}

std::string_view to_string(LifecycleNode node) {
  switch (node) {
    case LifecycleNode::kInControl:
      return "InControl";
    case LifecycleNode::kInTransitPlacement:
      return "InTransit(Placement)";
    case LifecycleNode::kInTransitRetrieval:
      return "InTransit(Retrieval)";
    case LifecycleNode::kDisplayed:
      return "Displayed";
  }
  return "?";
}

PlacementState apply_transition(const PlacementState& state, const LifecycleEvent& event) {
  return std::visit(
      overloaded{
          [&](const lifecycle::BeginPlacement& e) -> PlacementState {
            if (!std::holds_alternative<InControl>(state)) {
              reject(state, "BeginPlacement");
            }
            return InTransit{e.plan_id, TransferDirection::kPlacement};
          },
          [&](const lifecycle::BeginRetrieval& e) -> PlacementState {
            if (!std::holds_alternative<Displayed>(state)) {
              reject(state, "BeginRetrieval");
            }
            return InTransit{e.plan_id, TransferDirection::kRetrieval};
          },
          [&](const lifecycle::TransitComplete& e) -> PlacementState {
            const auto* transit = std::get_if<InTransit>(&state);
            if (transit == nullptr) {
              reject(state, "TransitComplete");
            }
            if (transit->plan_id != e.plan_id) {
              throw Error(ErrorCode::kTransitionRejected,
                          "TransitComplete for plan '" + e.plan_id + "' but in transit on '" + transit->plan_id + "'");
            }
            if (!resting_matches(transit->direction, true, e.arrival)) {
              throw Error(ErrorCode::kTransitionRejected, "TransitComplete arrival does not match transfer direction");
            }
            return to_state(e.arrival);
          },
          [&](const lifecycle::Cancel& e) -> PlacementState {
            const auto* transit = std::get_if<InTransit>(&state);
            if (transit == nullptr) {
              reject(state, "Cancel");
            }
            if (transit->plan_id != e.plan_id) {
              throw Error(ErrorCode::kTransitionRejected,
                          "Cancel for plan '" + e.plan_id + "' but in transit on '" + transit->plan_id + "'");
            }
            if (!resting_matches(transit->direction, false, e.origin)) {
              throw Error(ErrorCode::kTransitionRejected, "Cancel origin does not match transfer direction");
            }
            return to_state(e.origin);
          },
      },
      event);
}

}  // namespace crossdrop
