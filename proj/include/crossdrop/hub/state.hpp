#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "crossdrop/core/world.hpp"
#include "crossdrop/interpreter/interpreter.hpp"
#include "crossdrop/transfer/transfer.hpp"

namespace crossdrop::hub {

struct ActivePlan {
  transfer::TransferPlan plan;
  double started_at = 0.0;       // hub clock, s
  std::uint64_t created_seq = 0;  // world seq of the delta that started it
  DisplayId display_id;           // target of a placement, source of a retrieval

  friend bool operator==(const ActivePlan&, const ActivePlan&) = default;
};

// Everything the hub owns. `world` carries the placement lifecycle; the rest is
// bookkeeping that clients mirror so they can animate and render transfers.
struct HubState {
  WorldState world;
  std::map<std::string, ActivePlan> plans;  // by plan id
  std::map<ContentId, interpreter::Representation> representations;  // Displayed contents
  std::map<DisplayId, std::vector<ContentId>> stacks;  // placement order per display
  std::map<ContentId, Pose> home_poses;  // control-space rest pose
  std::optional<ContentId> selected;     // content the operator is holding

  friend bool operator==(const HubState&, const HubState&) = default;
};

// Initial state: every item InControl at its home pose.
HubState make_hub_state(WorldState world);

// WorldState invariants plus: every InTransit references a live plan for that
// content, every plan's content is InTransit on it, representations exist
// exactly for Displayed contents, and stacks only list contents headed to or
// shown on that display.
ValidationReport check_hub_state(const HubState& state);

namespace change {

struct SetPlacement {
  ContentId content_id;
  PlacementState state;
  friend bool operator==(const SetPlacement&, const SetPlacement&) = default;
};
struct PutPlan {
  ActivePlan plan;
  friend bool operator==(const PutPlan&, const PutPlan&) = default;
};
struct ErasePlan {
  std::string plan_id;
  friend bool operator==(const ErasePlan&, const ErasePlan&) = default;
};
struct PutRepresentation {
  ContentId content_id;
  interpreter::Representation representation;
  friend bool operator==(const PutRepresentation&, const PutRepresentation&) = default;
};
struct EraseRepresentation {
  ContentId content_id;
  friend bool operator==(const EraseRepresentation&, const EraseRepresentation&) = default;
};
struct PutDisplay {
  DisplayProfile profile;
  friend bool operator==(const PutDisplay&, const PutDisplay&) = default;
};
struct EraseDisplay {
  DisplayId display_id;
  friend bool operator==(const EraseDisplay&, const EraseDisplay&) = default;
};
// An empty list removes the stack.
struct SetStack {
  DisplayId display_id;
  std::vector<ContentId> content_ids;
  friend bool operator==(const SetStack&, const SetStack&) = default;
};
struct SetSelection {
  std::optional<ContentId> content_id;
  friend bool operator==(const SetSelection&, const SetSelection&) = default;
};

}  // namespace change

using Change = std::variant<change::SetPlacement, change::PutPlan, change::ErasePlan, change::PutRepresentation,
                            change::EraseRepresentation, change::PutDisplay, change::EraseDisplay, change::SetStack,
                            change::SetSelection>;

struct Delta {
  std::uint64_t seq = 0;  // world seq after applying
  std::vector<Change> changes;

  friend bool operator==(const Delta&, const Delta&) = default;
};

// Changes that turn `before` into `after` (ignoring world.seq), in a fixed
// order: displays, placements, plans, representations, stacks, selection.
std::vector<Change> diff_states(const HubState& before, const HubState& after);

void apply_change(HubState& state, const Change& change);

// Client-side reconstruction. Deltas must continue from state.world.seq with
// no gaps, else Error{kDesyncError}.
HubState replay(const HubState& snapshot, const std::vector<Delta>& deltas);

void to_json(nlohmann::json& j, const ActivePlan& p);
void from_json(const nlohmann::json& j, ActivePlan& p);
void to_json(nlohmann::json& j, const HubState& s);
void from_json(const nlohmann::json& j, HubState& s);
void to_json(nlohmann::json& j, const Change& c);
void from_json(const nlohmann::json& j, Change& c);
void to_json(nlohmann::json& j, const Delta& d);
void from_json(const nlohmann::json& j, Delta& d);

}  // namespace crossdrop::hub
