#include <algorithm>

#include "crossdrop/core/error.hpp"
#include "crossdrop/core/json_io.hpp"
#include "crossdrop/core/overloaded.hpp"
#include "crossdrop/hub/state.hpp"

namespace crossdrop::hub {

namespace {

// Upserts for new/changed keys and erases for vanished keys of one map.
template <typename Map, typename MakePut, typename MakeErase>
void diff_map(const Map& before, const Map& after, std::vector<Change>& out, MakePut put, MakeErase erase) {
  for (const auto& [key, value] : before) {
    if (!after.contains(key)) {
      out.push_back(erase(key));
    }
  }
  for (const auto& [key, value] : after) {
    const auto it = before.find(key);
    if (it == before.end() || !(it->second == value)) {
      out.push_back(put(key, value));
    }
  }
}

}  // namespace

HubState make_hub_state(WorldState world) {
  HubState state;
  for (const auto& [id, placement] : world.placements) {
    if (const auto* held = std::get_if<InControl>(&placement)) {
      state.home_poses[id] = held->hold_pose;
    }
  }
  state.world = std::move(world);
  return state;
}

ValidationReport check_hub_state(const HubState& state) {
  ValidationReport report = check_world(state.world);
  auto& v = report.violations;
  for (const auto& [id, placement] : state.world.placements) {
    if (const auto* transit = std::get_if<InTransit>(&placement)) {
      const auto it = state.plans.find(transit->plan_id);
      if (it == state.plans.end()) {
        v.push_back("content '" + id + "' in transit on dead plan '" + transit->plan_id + "'");
      } else if (it->second.plan.content_id != id || it->second.plan.direction != transit->direction) {
        v.push_back("plan '" + transit->plan_id + "' does not match content '" + id + "'");
      }
    }
    const bool displayed = std::holds_alternative<Displayed>(placement);
    if (displayed != state.representations.contains(id)) {
      v.push_back("content '" + id + "' representation presence disagrees with its state");
    }
    if (const auto* shown = std::get_if<Displayed>(&placement); shown && state.representations.contains(id) &&
                                                                 state.representations.at(id).representation_id !=
                                                                     shown->representation_id) {
      v.push_back("content '" + id + "' representation id mismatch");
    }
  }
  for (const auto& [plan_id, active] : state.plans) {
    const auto it = state.world.placements.find(active.plan.content_id);
    const auto* transit = it == state.world.placements.end() ? nullptr : std::get_if<InTransit>(&it->second);
    if (transit == nullptr || transit->plan_id != plan_id) {
      v.push_back("plan '" + plan_id + "' has no content in transit on it");
    }
  }
  for (const auto& [display_id, ids] : state.stacks) {
    if (!state.world.displays.contains(display_id)) {
      v.push_back("stack for unknown display '" + display_id + "'");
    }
    for (const auto& id : ids) {
      const auto it = state.world.placements.find(id);
      if (it == state.world.placements.end()) {
        v.push_back("stack lists unknown content '" + id + "'");
        continue;
      }
      const auto* shown = std::get_if<Displayed>(&it->second);
      const auto* transit = std::get_if<InTransit>(&it->second);
      const bool here = (shown && shown->display_id == display_id) ||
                        (transit && transit->direction == TransferDirection::kPlacement &&
                         state.plans.contains(transit->plan_id) &&
                         state.plans.at(transit->plan_id).display_id == display_id);
      if (!here) {
        v.push_back("stack '" + display_id + "' lists content '" + id + "' that is not there");
      }
    }
  }
  // A content may appear in at most one stack.
  std::map<ContentId, int> appearances;
  for (const auto& [display_id, ids] : state.stacks) {
    for (const auto& id : ids) {
      if (++appearances[id] > 1) {
        v.push_back("content '" + id + "' stacked on more than one display");
      }
    }
  }
  if (state.selected) {
    const auto it = state.world.placements.find(*state.selected);
    if (it == state.world.placements.end() || !std::holds_alternative<InControl>(it->second)) {
      v.push_back("selected content '" + *state.selected + "' is not in control space");
    }
  }
  return report;
}

std::vector<Change> diff_states(const HubState& before, const HubState& after) {
  std::vector<Change> out;
  diff_map(
      before.world.displays, after.world.displays, out,
      [](const DisplayId&, const DisplayProfile& p) -> Change { return change::PutDisplay{p}; },
      [](const DisplayId& id) -> Change { return change::EraseDisplay{id}; });
  diff_map(
      before.world.placements, after.world.placements, out,
      [](const ContentId& id, const PlacementState& s) -> Change { return change::SetPlacement{id, s}; },
      [](const ContentId& id) -> Change {
        throw Error(ErrorCode::kInvalidState, "content '" + id + "' vanished from the world");
      });
  diff_map(
      before.plans, after.plans, out, [](const std::string&, const ActivePlan& p) -> Change { return change::PutPlan{p}; },
      [](const std::string& id) -> Change { return change::ErasePlan{id}; });
  diff_map(
      before.representations, after.representations, out,
      [](const ContentId& id, const interpreter::Representation& r) -> Change {
        return change::PutRepresentation{id, r};
      },
      [](const ContentId& id) -> Change { return change::EraseRepresentation{id}; });
  diff_map(
      before.stacks, after.stacks, out,
      [](const DisplayId& id, const std::vector<ContentId>& ids) -> Change { return change::SetStack{id, ids}; },
      [](const DisplayId& id) -> Change { return change::SetStack{id, {}}; });
  if (before.selected != after.selected) {
    out.push_back(change::SetSelection{after.selected});
  }
  return out;
}

void apply_change(HubState& state, const Change& c) {
  std::visit(overloaded{
                 [&](const change::SetPlacement& x) {
                   if (!state.world.contents.contains(x.content_id)) {
                     throw Error(ErrorCode::kDesyncError, "placement for unknown content '" + x.content_id + "'");
                   }
                   state.world.placements[x.content_id] = x.state;
                 },
                 [&](const change::PutPlan& x) { state.plans[x.plan.plan.plan_id] = x.plan; },
                 [&](const change::ErasePlan& x) { state.plans.erase(x.plan_id); },
                 [&](const change::PutRepresentation& x) { state.representations[x.content_id] = x.representation; },
                 [&](const change::EraseRepresentation& x) { state.representations.erase(x.content_id); },
                 [&](const change::PutDisplay& x) { state.world.displays[x.profile.id] = x.profile; },
                 [&](const change::EraseDisplay& x) { state.world.displays.erase(x.display_id); },
                 [&](const change::SetStack& x) {
                   if (x.content_ids.empty()) {
                     state.stacks.erase(x.display_id);
                   } else {
                     state.stacks[x.display_id] = x.content_ids;
                   }
                 },
                 [&](const change::SetSelection& x) { state.selected = x.content_id; },
             },
             c);
}

HubState replay(const HubState& snapshot, const std::vector<Delta>& deltas) {
  HubState state = snapshot;
  for (const auto& delta : deltas) {
    if (delta.seq != state.world.seq + 1) {
      throw Error(ErrorCode::kDesyncError, "expected delta " + std::to_string(state.world.seq + 1) + ", got " +
                                               std::to_string(delta.seq));
    }
    for (const auto& c : delta.changes) {
      apply_change(state, c);
    }
    state.world.seq = delta.seq;
  }
  return state;
}

void to_json(nlohmann::json& j, const ActivePlan& p) {
  j = {{"plan", p.plan}, {"started_at", p.started_at}, {"created_seq", p.created_seq}, {"display_id", p.display_id}};
}

void from_json(const nlohmann::json& j, ActivePlan& p) {
  p.plan = j.at("plan").get<transfer::TransferPlan>();
  p.started_at = j.at("started_at").get<double>();
  p.created_seq = get_unsigned(j, "created_seq");
  p.display_id = j.at("display_id").get<std::string>();
}

void to_json(nlohmann::json& j, const HubState& s) {
  j = {{"world", s.world},
       {"plans", s.plans},
       {"representations", s.representations},
       {"stacks", s.stacks},
       {"home_poses", s.home_poses},
       {"selected", s.selected ? nlohmann::json(*s.selected) : nlohmann::json(nullptr)}};
}

void from_json(const nlohmann::json& j, HubState& s) {
  s.world = j.at("world").get<WorldState>();
  s.plans = j.at("plans").get<std::map<std::string, ActivePlan>>();
  s.representations = j.at("representations").get<std::map<ContentId, interpreter::Representation>>();
  s.stacks = j.at("stacks").get<std::map<DisplayId, std::vector<ContentId>>>();
  s.home_poses = j.at("home_poses").get<std::map<ContentId, Pose>>();
  const auto& selected = j.at("selected");
  s.selected = selected.is_null() ? std::nullopt : std::optional<ContentId>(selected.get<std::string>());
}

void to_json(nlohmann::json& j, const Change& c) {
  using nlohmann::json;
  std::visit(overloaded{
                 [&](const change::SetPlacement& x) {
                   j = {{"op", "set_placement"}, {"content_id", x.content_id}, {"state", x.state}};
                 },
                 [&](const change::PutPlan& x) { j = {{"op", "put_plan"}, {"plan", x.plan}}; },
                 [&](const change::ErasePlan& x) { j = {{"op", "erase_plan"}, {"plan_id", x.plan_id}}; },
                 [&](const change::PutRepresentation& x) {
                   j = {{"op", "put_representation"}, {"content_id", x.content_id}, {"representation", x.representation}};
                 },
                 [&](const change::EraseRepresentation& x) {
                   j = {{"op", "erase_representation"}, {"content_id", x.content_id}};
                 },
                 [&](const change::PutDisplay& x) { j = {{"op", "put_display"}, {"profile", x.profile}}; },
                 [&](const change::EraseDisplay& x) { j = {{"op", "erase_display"}, {"display_id", x.display_id}}; },
                 [&](const change::SetStack& x) {
                   j = {{"op", "set_stack"}, {"display_id", x.display_id}, {"content_ids", x.content_ids}};
                 },
                 [&](const change::SetSelection& x) {
                   j = {{"op", "set_selection"},
                        {"content_id", x.content_id ? json(*x.content_id) : json(nullptr)}};
                 },
             },
             c);
}

void from_json(const nlohmann::json& j, Change& c) {
  const auto op = j.at("op").get<std::string>();
  if (op == "set_placement") {
    c = change::SetPlacement{j.at("content_id").get<std::string>(), j.at("state").get<PlacementState>()};
  } else if (op == "put_plan") {
    c = change::PutPlan{j.at("plan").get<ActivePlan>()};
  } else if (op == "erase_plan") {
    c = change::ErasePlan{j.at("plan_id").get<std::string>()};
  } else if (op == "put_representation") {
    c = change::PutRepresentation{j.at("content_id").get<std::string>(),
                                  j.at("representation").get<interpreter::Representation>()};
  } else if (op == "erase_representation") {
    c = change::EraseRepresentation{j.at("content_id").get<std::string>()};
  } else if (op == "put_display") {
    c = change::PutDisplay{j.at("profile").get<DisplayProfile>()};
  } else if (op == "erase_display") {
    c = change::EraseDisplay{j.at("display_id").get<std::string>()};
  } else if (op == "set_stack") {
    c = change::SetStack{j.at("display_id").get<std::string>(), j.at("content_ids").get<std::vector<std::string>>()};
  } else if (op == "set_selection") {
    const auto& id = j.at("content_id");
    c = change::SetSelection{id.is_null() ? std::nullopt : std::optional<ContentId>(id.get<std::string>())};
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown change op '" + op + "'");
  }
}

// Change is a std::variant alias, which ADL cannot route to the overloads above.
void to_json(nlohmann::json& j, const Delta& d) {
  auto changes = nlohmann::json::array();
  for (const auto& c : d.changes) {
    nlohmann::json cj;
    to_json(cj, c);
    changes.push_back(std::move(cj));
  }
  j = {{"seq", d.seq}, {"changes", std::move(changes)}};
}

void from_json(const nlohmann::json& j, Delta& d) {
  d.seq = get_unsigned(j, "seq");
  d.changes.clear();
  for (const auto& cj : j.at("changes")) {
    Change c;
    from_json(cj, c);
    d.changes.push_back(std::move(c));
  }
}

}  // namespace crossdrop::hub
