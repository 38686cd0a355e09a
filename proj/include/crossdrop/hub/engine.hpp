#pragma once

#include <optional>
#include <vector>

#include "crossdrop/hub/protocol.hpp"
#include "crossdrop/hub/state.hpp"
#include "crossdrop/interpreter/interpreter.hpp"
#include "crossdrop/selection/selection.hpp"
#include "crossdrop/transfer/transfer.hpp"

namespace crossdrop::hub {

struct HubContext {
  interpreter::RuleSet ruleset = interpreter::default_ruleset();
  transfer::TransferPolicy policy{};
  selection::SelectionConfig selection{};
};

enum class Role { kOperator, kDisplay };

struct EventResult {
  HubState state;
  std::vector<Delta> deltas;
  std::optional<msg::Error> error;  // set iff the event was rejected; state is then unchanged
};

// Applies one client message to the authoritative state at hub time `clock`.
//
//   Gesture            operator only; selection -> transfer plan -> lifecycle
//   PlaceCommand       operator only; content must be InControl
//   RetrieveCommand    operator only; content must be Displayed
//   RegisterDisplay    adds the profile (re-registering an identical profile is a no-op)
//
// Gesture semantics:
//   Grab               picks the InControl content under the hand
//   Release            places the held content on the display hit by the ray,
//                      or (no ray) the display the hand is touching
//   PalmRay Push       places the held content on the display the palm points at
//   PalmRay Pull       retrieves the most recently placed content from that display
//   GazePinch Push     holds the InControl content the operator looks at
//   GazePinch Pull     retrieves the displayed content the operator looks at
//
// Session-level messages (RegisterOperator, SnapshotRequest) and hub-to-client
// messages leave the state unchanged here; Hub handles them.
EventResult apply_event(const HubState& state, const Message& message, Role sender, double clock,
                        const HubContext& ctx);

// Completes every plan whose elapsed time has reached its duration, one delta
// per plan in creation order.
EventResult tick(const HubState& state, double now, const HubContext& ctx);

// Sends contents shown on the display back to their home pose, cancels
// placements still flying towards it and removes the display.
EventResult disconnect_display(const HubState& state, const DisplayId& display_id, const HubContext& ctx);

// Tolerance on "elapsed >= duration" so tick grids that land exactly on the
// duration complete on that tick despite rounding.
inline constexpr double kCompletionSlack = 1e-9;

}  // namespace crossdrop::hub
