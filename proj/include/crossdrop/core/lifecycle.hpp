#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "crossdrop/core/math.hpp"
#include "crossdrop/core/model.hpp"

namespace crossdrop {

struct InControl {
  Pose hold_pose{};
  friend bool operator==(const InControl&, const InControl&) = default;
};

struct InTransit {
  std::string plan_id;
  TransferDirection direction = TransferDirection::kPlacement;
  friend bool operator==(const InTransit&, const InTransit&) = default;
};

struct Displayed {
  DisplayId display_id;
  std::string representation_id;
  Pose anchor_pose{};
  friend bool operator==(const Displayed&, const Displayed&) = default;
};

using PlacementState = std::variant<InControl, InTransit, Displayed>;

// The four nodes of the lifecycle graph; InTransit splits by direction.
enum class LifecycleNode { kInControl, kInTransitPlacement, kInTransitRetrieval, kDisplayed };

LifecycleNode node_of(const PlacementState& state) noexcept;
std::string_view to_string(LifecycleNode node);

namespace lifecycle {

struct BeginPlacement {
  std::string plan_id;
};

struct BeginRetrieval {
  std::string plan_id;
};

// `arrival` is the resting state at the far end of the plan: Displayed for a
// placement, InControl for a retrieval.
struct TransitComplete {
  std::string plan_id;
  std::variant<InControl, Displayed> arrival;
};

// `origin` is the state the content left when the plan began.
struct Cancel {
  std::string plan_id;
  std::variant<InControl, Displayed> origin;
};

}  // namespace lifecycle

using LifecycleEvent =
    std::variant<lifecycle::BeginPlacement, lifecycle::BeginRetrieval, lifecycle::TransitComplete, lifecycle::Cancel>;

// Legal edges:
//   InControl --BeginPlacement--> InTransit(Placement) --TransitComplete--> Displayed
//   Displayed --BeginRetrieval--> InTransit(Retrieval) --TransitComplete--> InControl
//   InTransit(*) --Cancel--> origin
// Anything else throws Error{kTransitionRejected}. TransitComplete and Cancel must
// name the in-flight plan and carry a state of the kind the edge leads to.
PlacementState apply_transition(const PlacementState& state, const LifecycleEvent& event);

}  // namespace crossdrop
