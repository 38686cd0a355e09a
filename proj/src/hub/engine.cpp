#include "crossdrop/hub/engine.hpp"

#include <algorithm>

#include "crossdrop/core/error.hpp"
#include "crossdrop/core/overloaded.hpp"

namespace crossdrop::hub {

namespace {

using selection::PushPull;

const ContentItem& content_or_throw(const HubState& s, const ContentId& id) {
  const auto it = s.world.contents.find(id);
  if (it == s.world.contents.end()) {
    throw Error(ErrorCode::kNotFound, "unknown content '" + id + "'");
  }
  return it->second;
}

const DisplayProfile& display_or_throw(const HubState& s, const DisplayId& id) {
  const auto it = s.world.displays.find(id);
  if (it == s.world.displays.end()) {
    throw Error(ErrorCode::kNotFound, "unknown display '" + id + "'");
  }
  return it->second;
}

std::vector<DisplayProfile> display_list(const HubState& s) {
  std::vector<DisplayProfile> out;
  out.reserve(s.world.displays.size());
  for (const auto& [id, d] : s.world.displays) {
    out.push_back(d);
  }
  return out;
}

void require_ray(const selection::Ray& ray) {
  if (!ray.is_valid()) {
    throw Error(ErrorCode::kInvalidArgument, "ray direction must be a finite unit vector");
  }
}

std::string next_plan_id(const HubState& s) { return "plan-" + std::to_string(s.world.seq + 1); }

void remove_from_stacks(HubState& s, const ContentId& id) {
  for (auto it = s.stacks.begin(); it != s.stacks.end();) {
    auto& ids = it->second;
    ids.erase(std::remove(ids.begin(), ids.end(), id), ids.end());
    it = ids.empty() ? s.stacks.erase(it) : std::next(it);
  }
}

void start_placement(HubState& s, const ContentId& id, const Pose& release_pose, const DisplayId& display_id,
                     double clock, const HubContext& ctx) {
  const ContentItem& item = content_or_throw(s, id);
  const DisplayProfile& display = display_or_throw(s, display_id);
  const std::string plan_id = next_plan_id(s);
  PlacementState& placement = s.world.placements.at(id);
  PlacementState next = apply_transition(placement, lifecycle::BeginPlacement{plan_id});

  auto& stack = s.stacks[display_id];
  auto plan = transfer::plan_placement(plan_id, item, release_pose, display, item.appearance, ctx.policy,
                                       stack.size());
  stack.push_back(id);
  s.plans[plan_id] = ActivePlan{std::move(plan), clock, s.world.seq + 1, display_id};
  placement = std::move(next);
  if (s.selected == id) {
    s.selected.reset();
  }
}

void start_retrieval(HubState& s, const ContentId& id, const Pose& hand_pose, double clock, const HubContext& ctx) {
  const ContentItem& item = content_or_throw(s, id);
  const std::string plan_id = next_plan_id(s);
  PlacementState& placement = s.world.placements.at(id);
  PlacementState next = apply_transition(placement, lifecycle::BeginRetrieval{plan_id});

  const auto& shown = std::get<Displayed>(placement);
  const auto& rep = s.representations.at(id);
  auto plan = transfer::plan_retrieval(plan_id, item, placement, rep.appearance.scale, rep.appearance.opacity,
                                       hand_pose, item.appearance, ctx.policy);
  s.plans[plan_id] = ActivePlan{std::move(plan), clock, s.world.seq + 1, shown.display_id};
  s.representations.erase(id);
  remove_from_stacks(s, id);
  placement = std::move(next);
}

const InControl& held_content(const HubState& s, ContentId& id_out) {
  if (!s.selected) {
    throw Error(ErrorCode::kInvalidState, "operator is not holding any content");
  }
  id_out = *s.selected;
  const auto* held = std::get_if<InControl>(&s.world.placements.at(id_out));
  if (held == nullptr) {
    throw Error(ErrorCode::kInvalidState, "held content '" + id_out + "' is not in control space");
  }
  return *held;
}

DisplayId palm_target(const HubState& s, const selection::Ray& ray, const HubContext& ctx) {
  require_ray(ray);
  const auto displays = display_list(s);
  const auto hit = selection::select_display_by_palm(ray, displays, ctx.selection);
  if (!hit) {
    throw Error(ErrorCode::kNoTarget, "ray does not hit any display");
  }
  return hit->display_id;
}

// Display whose quad the hand is physically at: within grab_radius of the
// plane and inside the (grab_radius-inflated) extents. Nearest plane wins.
DisplayId touch_target(const HubState& s, const Vec3& hand, const HubContext& ctx) {
  const double r = ctx.selection.grab_radius;
  std::optional<DisplayId> best;
  double best_distance = 0.0;
  for (const auto& [id, d] : s.world.displays) {
    const Vec3 offset = hand - d.surface_pose.position;
    const double plane_distance = std::abs(offset.dot(d.normal()));
    if (plane_distance > r || std::abs(offset.dot(d.surface_pose.axis_x())) > d.width / 2 + r ||
        std::abs(offset.dot(d.surface_pose.axis_y())) > d.height / 2 + r) {
      continue;
    }
    if (!best || plane_distance < best_distance - selection::kTieEpsilon) {
      best = id;
      best_distance = plane_distance;
    }
  }
  if (!best) {
    throw Error(ErrorCode::kNoTarget, "release point is not at any display");
  }
  return *best;
}

Vec3 content_center(const ContentItem& item, const Pose& pose, double scale) {
  return pose.transform_point(item.bounds.center * scale);
}

void apply_gesture(HubState& s, const selection::GestureEvent& event, double clock, const HubContext& ctx) {
  std::visit(
      overloaded{
          [&](const selection::gesture::Grab& g) {
            std::vector<selection::GrabCandidate> candidates;
            for (const auto& [id, placement] : s.world.placements) {
              if (const auto* held = std::get_if<InControl>(&placement)) {
                const auto& item = s.world.contents.at(id);
                candidates.push_back({id, world_bounds(item, held->hold_pose, item.appearance.scale)});
              }
            }
            const auto picked = selection::select_content_by_grab(g.hand_pos, candidates, ctx.selection);
            if (!picked) {
              throw Error(ErrorCode::kNoTarget, "no content within reach of the hand");
            }
            s.selected = *picked;
          },
          [&](const selection::gesture::Release& r) {
            ContentId id;
            held_content(s, id);
            const DisplayId target =
                r.ray ? palm_target(s, *r.ray, ctx) : touch_target(s, r.release_pose.position, ctx);
            start_placement(s, id, r.release_pose, target, clock, ctx);
          },
          [&](const selection::gesture::PalmRay& p) {
            if (p.action == PushPull::kPush) {
              ContentId id;
              const Pose hold = held_content(s, id).hold_pose;
              start_placement(s, id, hold, palm_target(s, p.ray, ctx), clock, ctx);
              return;
            }
            const DisplayId source = palm_target(s, p.ray, ctx);
            const auto stack = s.stacks.find(source);
            if (stack != s.stacks.end()) {
              for (auto it = stack->second.rbegin(); it != stack->second.rend(); ++it) {
                if (std::holds_alternative<Displayed>(s.world.placements.at(*it))) {
                  const ContentId id = *it;
                  start_retrieval(s, id, {p.ray.origin, UnitQuat::identity()}, clock, ctx);
                  return;
                }
              }
            }
            throw Error(ErrorCode::kNoTarget, "display '" + source + "' shows no content");
          },
          [&](const selection::gesture::GazePinch& g) {
            require_ray(g.gaze);
            std::vector<selection::GazeCandidate> candidates;
            for (const auto& [id, placement] : s.world.placements) {
              const auto& item = s.world.contents.at(id);
              if (g.action == PushPull::kPush) {
                if (const auto* held = std::get_if<InControl>(&placement)) {
                  candidates.push_back({id, content_center(item, held->hold_pose, item.appearance.scale)});
                }
              } else if (const auto* shown = std::get_if<Displayed>(&placement)) {
                candidates.push_back(
                    {id, content_center(item, shown->anchor_pose, s.representations.at(id).appearance.scale)});
              }
            }
            const auto picked = selection::select_content_by_gaze(g.gaze, candidates, ctx.selection);
            if (!picked) {
              throw Error(ErrorCode::kNoTarget, "no content inside the gaze cone");
            }
            if (g.action == PushPull::kPush) {
              s.selected = *picked;
            } else {
              start_retrieval(s, *picked, {g.gaze.origin, UnitQuat::identity()}, clock, ctx);
            }
          },
      },
      event.payload);
}

void require_operator(Role sender) {
  if (sender != Role::kOperator) {
    throw Error(ErrorCode::kForbidden, "only the operator may issue transfers");
  }
}

// Runs `mutate` on a copy; one delta if anything changed, the error otherwise.
template <typename Mutate>
EventResult transact(const HubState& state, Mutate&& mutate) {
  EventResult result{state, {}, std::nullopt};
  try {
    mutate(result.state);
  } catch (const Error& e) {
    result.state = state;
    result.error = msg::Error{e.code(), e.detail()};
    return result;
  }
  auto changes = diff_states(state, result.state);
  if (!changes.empty()) {
    result.state.world.seq = state.world.seq + 1;
    result.deltas.push_back(Delta{result.state.world.seq, std::move(changes)});
  }
  return result;
}

}  // namespace

EventResult apply_event(const HubState& state, const Message& message, Role sender, double clock,
                        const HubContext& ctx) {
  return transact(state, [&](HubState& s) {
    std::visit(overloaded{
                   [&](const msg::Gesture& g) {
                     require_operator(sender);
                     apply_gesture(s, g.event, clock, ctx);
                   },
                   [&](const msg::PlaceCommand& c) {
                     require_operator(sender);
                     content_or_throw(s, c.content_id);
                     display_or_throw(s, c.display_id);
                     const auto* held = std::get_if<InControl>(&s.world.placements.at(c.content_id));
                     const Pose release = held ? held->hold_pose : Pose{};
                     start_placement(s, c.content_id, release, c.display_id, clock, ctx);
                   },
                   [&](const msg::RetrieveCommand& c) {
                     require_operator(sender);
                     content_or_throw(s, c.content_id);
                     start_retrieval(s, c.content_id, s.home_poses.at(c.content_id), clock, ctx);
                   },
                   [&](const msg::RegisterDisplay& r) {
                     if (sender != Role::kDisplay) {
                       throw Error(ErrorCode::kForbidden, "only display sessions may register displays");
                     }
                     if (const auto report = validate_display(r.profile); !report.ok()) {
                       throw Error(ErrorCode::kInvalidArgument, report.violations.front());
                     }
                     const auto it = s.world.displays.find(r.profile.id);
                     if (it != s.world.displays.end() && !(it->second == r.profile)) {
                       throw Error(ErrorCode::kForbidden, "display id '" + r.profile.id + "' is already registered");
                     }
                     s.world.displays[r.profile.id] = r.profile;
                   },
                   [&](const msg::Snapshot&) { throw Error(ErrorCode::kForbidden, "clients may not send Snapshot"); },
                   [&](const Delta&) { throw Error(ErrorCode::kForbidden, "clients may not send Delta"); },
                   [&](const msg::Error&) { throw Error(ErrorCode::kForbidden, "clients may not send Error"); },
                   [](const auto&) {},
               },
               message.body);
  });
}

EventResult tick(const HubState& state, double now, const HubContext& ctx) {
  std::vector<const ActivePlan*> due;
  for (const auto& [id, active] : state.plans) {
    if (now - active.started_at >= active.plan.duration - kCompletionSlack) {
      due.push_back(&active);
    }
  }
  std::sort(due.begin(), due.end(),
            [](const ActivePlan* a, const ActivePlan* b) { return a->created_seq < b->created_seq; });
  std::vector<ActivePlan> ordered;
  for (const auto* p : due) {
    ordered.push_back(*p);
  }

  EventResult result{state, {}, std::nullopt};
  for (const auto& active : ordered) {
    auto step = transact(result.state, [&](HubState& s) {
      const auto& plan = active.plan;
      const ContentItem& item = s.world.contents.at(plan.content_id);
      PlacementState& placement = s.world.placements.at(plan.content_id);
      if (plan.direction == TransferDirection::kPlacement) {
        const DisplayProfile& display = display_or_throw(s, active.display_id);
        Appearance adapted = item.appearance;
        adapted.scale = plan.end.scale;
        adapted.opacity = plan.end.opacity;
        auto rep = interpreter::interpret(item, display, ctx.ruleset, adapted, plan.end.pose);
        placement = apply_transition(
            placement, lifecycle::TransitComplete{plan.plan_id, Displayed{display.id, rep.representation_id,
                                                                          plan.end.pose}});
        s.representations[plan.content_id] = std::move(rep);
      } else {
        placement = apply_transition(placement, lifecycle::TransitComplete{plan.plan_id, InControl{plan.end.pose}});
      }
      s.plans.erase(plan.plan_id);
    });
    if (step.error) {
      return {state, {}, step.error};
    }
    result.state = std::move(step.state);
    for (auto& d : step.deltas) {
      result.deltas.push_back(std::move(d));
    }
  }
  return result;
}

EventResult disconnect_display(const HubState& state, const DisplayId& display_id, const HubContext&) {
  return transact(state, [&](HubState& s) {
    display_or_throw(s, display_id);
    for (auto& [id, placement] : s.world.placements) {
      if (const auto* shown = std::get_if<Displayed>(&placement); shown && shown->display_id == display_id) {
        // Instant retrieval: the display that would animate it is gone.
        const std::string plan_id = "drop-" + display_id + "-" + id;
        const PlacementState transit = apply_transition(placement, lifecycle::BeginRetrieval{plan_id});
        placement = apply_transition(transit, lifecycle::TransitComplete{plan_id, InControl{s.home_poses.at(id)}});
        s.representations.erase(id);
      }
    }
    for (auto it = s.plans.begin(); it != s.plans.end();) {
      const ActivePlan& active = it->second;
      if (active.display_id == display_id && active.plan.direction == TransferDirection::kPlacement) {
        PlacementState& placement = s.world.placements.at(active.plan.content_id);
        placement = apply_transition(placement, lifecycle::Cancel{active.plan.plan_id, InControl{active.plan.start.pose}});
        it = s.plans.erase(it);
      } else {
        ++it;
      }
    }
    s.stacks.erase(display_id);
    s.world.displays.erase(display_id);
  });
}

}  // namespace crossdrop::hub
