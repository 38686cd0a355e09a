// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include "crossdrop/core/error.hpp"
#include "crossdrop/core/json_io.hpp"
#include "crossdrop/hub/hub.hpp"
#include "crossdrop/hub/server.hpp"
#include "crossdrop/sim/event_log.hpp"
#include "crossdrop/sim/scenario.hpp"
#include "support/generators.hpp"
#include "support/hub_driver.hpp"
#include "support/loopback_client.hpp"
#include "support/oracles.hpp"

using namespace crossdrop;
using namespace crossdrop::hub;
using namespace crossdrop::testing;

namespace {

const std::filesystem::path kSource = CROSSDROP_SOURCE_DIR;

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Records the first failure; later ones only bump the count.
struct Failures {
  std::size_t count = 0;
  std::string first;

  void add(const std::string& what) {
    if (count++ == 0) {
      first = what;
    }
  }
  bool none() const { return count == 0; }
  std::string describe() const { return std::to_string(count) + " violations, first: " + first; }
};

template <typename T>
const T* body_as(const Message& m) {
  return std::get_if<T>(&m.body);
}

HubState small_world(Rng& rng, int contents, int displays) {
  std::vector<ContentItem> items;
  for (int i = 0; i < contents; ++i) {
    items.push_back(random_item(rng, "c" + std::to_string(i)));
  }
  return make_hub_state(make_world(items, ring_of_displays(rng, displays)));
}

// No content listed on two stacks; Displayed content sits on its display's stack.
std::optional<std::string> placement_violation(const HubState& s) {
  std::map<ContentId, int> listed;
  for (const auto& [display, ids] : s.stacks) {
    for (const auto& id : ids) {
      if (++listed[id] > 1) {
        return "content " + id + " stacked twice";
      }
    }
  }
  for (const auto& [id, placement] : s.world.placements) {
    if (const auto* d = std::get_if<Displayed>(&placement)) {
      const auto it = s.stacks.find(d->display_id);
      if (it == s.stacks.end() || std::find(it->second.begin(), it->second.end(), id) == it->second.end()) {
        return "displayed content " + id + " missing from its stack";
      }
    } else if (std::holds_alternative<InControl>(placement) && listed.contains(id)) {
      return "content " + id + " both in control and stacked";
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

Outcome lifecycle_safety() {
  constexpr int kSequences = 10000;
  constexpr int kSteps = 12;
  Rng rng(101);
  Failures f;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  const HubContext ctx{};
  for (int run = 0; run < kSequences; ++run) {
    HubState state = small_world(rng, 3, 3);
    double clock = 0.0;
    for (int step = 0; step < kSteps; ++step) {
      if (coin(rng)) {
        clock += uniform(rng, 0.0, 0.8);
        auto ticked = tick(state, clock, ctx);
        if (ticked.error) {
          f.add("tick rejected: " + ticked.error->detail);
        }
        state = std::move(ticked.state);
      }
      const Message m{"op", static_cast<std::uint64_t>(step + 1),
                      random_operator_body(rng, state, static_cast<std::uint64_t>(step + 1))};
      auto result = apply_event(state, m, Role::kOperator, clock, ctx);
      if (result.error) {
        ++rejected;
        if (!(result.state == state) || !result.deltas.empty()) {
          f.add("rejected event changed state (run " + std::to_string(run) + ")");
        }
        continue;
      }
      ++accepted;
      state = std::move(result.state);
      if (const auto report = check_hub_state(state); !report.ok()) {
        f.add("invalid state (run " + std::to_string(run) + "): " + report.violations.front());
      }
      if (const auto v = placement_violation(state)) {
        f.add(*v + " (run " + std::to_string(run) + ")");
      }
    }
  }

  // Raw lifecycle edges under random events, including ones that must be rejected.
  for (int run = 0; run < kSequences; ++run) {
    PlacementState s = InControl{};
    for (int step = 0; step < 20; ++step) {
      const std::string plan = coin(rng) ? "a" : "b";
      const std::variant<InControl, Displayed> end =
          coin(rng) ? std::variant<InControl, Displayed>(InControl{})
                    : std::variant<InControl, Displayed>(Displayed{"d", "r", {}});
      const int kind = uniform_int(rng, 0, 3);
      LifecycleEvent e;
      switch (kind) {
        case 0: e = lifecycle::BeginPlacement{plan}; break;
        case 1: e = lifecycle::BeginRetrieval{plan}; break;
        case 2: e = lifecycle::TransitComplete{plan, end}; break;
        default: e = lifecycle::Cancel{plan, end};
      }
      const auto before = s;
      const int from = static_cast<int>(node_of(before));
      try {
        s = apply_transition(s, e);
        if (kAdjacency[from][kind] != static_cast<int>(node_of(s))) {
          f.add("lifecycle took an edge missing from the table");
        }
      } catch (const Error& err) {
        if (err.code() != ErrorCode::kTransitionRejected || !(s == before)) {
          f.add("rejected lifecycle event was not clean");
        }
      }
    }
  }
  if (!f.none()) {
    return {false, f.describe()};
  }
  return {true, std::to_string(kSequences) + " hub sequences (" + std::to_string(accepted) + " accepted, " +
                    std::to_string(rejected) + " rejected) + " + std::to_string(kSequences) +
                    " lifecycle sequences, 0 invalid states, 0 dual placements"};
}

// ---------------------------------------------------------------------------

Outcome selection_oracle() {
  constexpr int kScenes = 1000;
  constexpr int kRaysPerScene = 20;
  Rng rng(202);
  const selection::SelectionConfig cfg{};
  Failures f;
  std::size_t palm_hits = 0;
  std::size_t gaze_hits = 0;
  for (int scene = 0; scene < kScenes; ++scene) {
    std::vector<DisplayProfile> displays;
    const int nd = uniform_int(rng, 1, 10);
    for (int i = 0; i < nd; ++i) {
      displays.push_back(random_display(rng, "d" + std::to_string(i)));
    }
    std::vector<selection::GazeCandidate> contents;
    const int nc = uniform_int(rng, 1, 20);
    for (int i = 0; i < nc; ++i) {
      contents.push_back({"c" + std::to_string(i), random_vec(rng, -5, 5)});
    }
    for (int r = 0; r < kRaysPerScene; ++r) {
      const auto& target = displays[static_cast<std::size_t>(uniform_int(rng, 0, nd - 1))];
      const auto ray = ray_towards(rng, target.surface_pose.position, uniform(rng, 0.0, 1.0));
      const auto got = selection::select_display_by_palm(ray, displays, cfg);
      const auto want = oracle_palm(ray, displays, cfg.max_ray_distance);
      if (got.has_value() != want.has_value() || (got && got->display_id != want->id)) {
        f.add("palm mismatch in scene " + std::to_string(scene));
      }
      palm_hits += got.has_value();

      const auto& look = contents[static_cast<std::size_t>(uniform_int(rng, 0, nc - 1))];
      const auto gaze = ray_towards(rng, look.world_center, uniform(rng, 0.0, 0.15));
      const auto g = selection::select_content_by_gaze(gaze, contents, cfg);
      const auto w = oracle_gaze(gaze, contents, cfg.gaze_cone_half_angle);
      if (g != w) {
        f.add("gaze mismatch in scene " + std::to_string(scene));
      }
      gaze_hits += g.has_value();
    }
  }
  if (!f.none()) {
    return {false, f.describe()};
  }
  return {true, std::to_string(kScenes) + " scenes, " + std::to_string(kScenes * kRaysPerScene) +
                    " palm rays (" + std::to_string(palm_hits) + " hits) and gaze rays (" + std::to_string(gaze_hits) +
                    " hits) equal to the oracles"};
}

// ---------------------------------------------------------------------------

struct PlacementCase {
  ContentItem item;
  DisplayProfile display;
  UnitQuat release_orientation;
  HubState displayed;  // after the transfer completed
};

// Grab the item at its hold pose, release it at the display with a random
// orientation, and tick past the transfer.
std::optional<PlacementCase> place_one(Rng& rng, Failures& f) {
  ContentItem item = random_item(rng, "c0");
  item.appearance.color = random_color(rng);
  item.appearance.opacity = uniform(rng, 0.05, 1.0);
  DisplayProfile display = ring_of_displays(rng, 1).front();
  display.opacity_multiplier = uniform(rng, 0.0, 1.0);
  HubState s = make_hub_state(make_world(std::vector{item}, std::vector{display}));
  const HubContext ctx{};
  const Vec3 hand = std::get<InControl>(s.world.placements.at("c0")).hold_pose.position;

  auto grabbed = apply_event(s, {"op", 1, msg::Gesture{{1, 0.0, selection::gesture::Grab{hand}}}}, Role::kOperator,
                             0.0, ctx);
  if (grabbed.error) {
    f.add("grab rejected: " + grabbed.error->detail);
    return std::nullopt;
  }
  const UnitQuat q = random_quat(rng);
  const selection::Ray ray{hand, (display.surface_pose.position - hand).normalized()};
  auto released = apply_event(grabbed.state,
                              {"op", 2, msg::Gesture{{2, 0.1, selection::gesture::Release{{hand, q}, ray}}}},
                              Role::kOperator, 0.1, ctx);
  if (released.error) {
    f.add("release rejected: " + released.error->detail);
    return std::nullopt;
  }
  auto landed = tick(released.state, 0.1 + ctx.policy.duration, ctx);
  if (!std::holds_alternative<Displayed>(landed.state.world.placements.at("c0"))) {
    f.add("placement did not complete");
    return std::nullopt;
  }
  return PlacementCase{std::move(item), std::move(display), q, std::move(landed.state)};
}

Outcome basic_interface() {
  constexpr int kCases = 1000;
  Rng rng(303);
  Failures f;
  double worst_dot = 1.0;
  double worst_opacity = 0.0;
  for (int i = 0; i < kCases; ++i) {
    const auto c = place_one(rng, f);
    if (!c) {
      continue;
    }
    const auto& shown = std::get<Displayed>(c->displayed.world.placements.at("c0"));
    const auto& rep = c->displayed.representations.at("c0");
    if (rep.appearance.color != c->item.appearance.color) {
      f.add("colour changed in case " + std::to_string(i));
    }
    const UnitQuat& a = shown.anchor_pose.orientation;
    const UnitQuat& b = c->release_orientation;
    const double dot = std::abs(a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z);
    worst_dot = std::min(worst_dot, dot);
    if (dot < 1.0 - 1e-9) {
      f.add("orientation changed in case " + std::to_string(i));
    }
    const Vec3& h = c->item.bounds.half_extents;
    const double extent = 2.0 * std::max({h.x, h.y, h.z}) * rep.appearance.scale;
    if (extent > std::min(c->display.width, c->display.height) + 1e-9) {
      f.add("fit violated in case " + std::to_string(i));
    }
    const double err = std::abs(rep.appearance.opacity - c->item.appearance.opacity * c->display.opacity_multiplier);
    worst_opacity = std::max(worst_opacity, err);
    if (err > 1e-12) {
      f.add("opacity off by " + std::to_string(err) + " in case " + std::to_string(i));
    }
  }
  if (!f.none()) {
    return {false, f.describe()};
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d placements, min |dot| %.17g, max opacity error %.3g", kCases, worst_dot,
                worst_opacity);
  return {true, buf};
}

Outcome round_trip() {
  constexpr int kCases = 1000;
  Rng rng(404);
  Failures f;
  double worst = 0.0;
  const HubContext ctx{};
  for (int i = 0; i < kCases; ++i) {
    const auto c = place_one(rng, f);
    if (!c) {
      continue;
    }
    const double t0 = 10.0;
    auto retrieving = apply_event(c->displayed, {"op", 3, msg::RetrieveCommand{"c0"}}, Role::kOperator, t0, ctx);
    if (retrieving.error || retrieving.state.plans.size() != 1) {
      f.add("retrieval rejected in case " + std::to_string(i));
      continue;
    }
    const auto& plan = retrieving.state.plans.begin()->second.plan;
    const auto end = transfer::step_transit(plan, plan.duration);
    const double err = std::max(std::abs(end.scale - c->item.appearance.scale),
                                 std::abs(end.opacity - c->item.appearance.opacity));
    worst = std::max(worst, err);
    if (err > 1e-9) {
      f.add("control-space appearance not restored in case " + std::to_string(i));
    }
    const auto back = tick(retrieving.state, t0 + plan.duration, ctx);
    if (!std::holds_alternative<InControl>(back.state.world.placements.at("c0")) ||
        !back.state.representations.empty()) {
      f.add("retrieval did not return to control in case " + std::to_string(i));
    }
  }
  if (!f.none()) {
    return {false, f.describe()};
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "%d place/retrieve cycles, max error %.3g", kCases, worst);
  return {true, buf};
}

// ---------------------------------------------------------------------------

// Components packed around the origin so that most assemblies start overlapping.
ContentItem clustered_assembly(Rng& rng, int count) {
  ContentItem item;
  item.id = "asm";
  item.kind = ContentKind::kAssembly;
  item.bounds = {{0, 0, 0}, {0.5, 0.5, 0.5}};
  std::vector<Vec3> centers;
  while (static_cast<int>(centers.size()) < count) {
    const Vec3 c = random_vec(rng, -0.12, 0.12);
    if (std::all_of(centers.begin(), centers.end(), [&](const Vec3& o) { return (o - c).norm() > 0.02; })) {
      centers.push_back(c);
    }
  }
  for (int i = 0; i < count; ++i) {
    Component comp;
    comp.id = "p" + std::to_string(i);
    comp.local_pose = {centers[static_cast<std::size_t>(i)] - Vec3{0.01, 0, 0}, random_quat(rng)};
    comp.bounds = {{0.01, 0, 0}, random_vec(rng, 0.02, 0.07)};
    item.components.push_back(std::move(comp));
  }
  return item;
}

Outcome exploded_law() {
  constexpr int kAssemblies = 100;
  Rng rng(505);
  Failures f;
  double worst = 0.0;
  double largest_e = 0.0;
  int overlapping_at_rest = 0;
  for (int i = 0; i < kAssemblies; ++i) {
    const ContentItem item = clustered_assembly(rng, uniform_int(rng, 2, 8));
    const Pose base = random_pose(rng);
    const double scale = uniform(rng, 0.3, 3.0);
    const double e = uniform(rng, 0.0, 3.0);

    // Component centres in the assembly frame, computed without the library.
    std::vector<Vec3> local;
    Vec3 centroid{};
    for (const auto& c : item.components) {
      local.push_back(c.local_pose.position + c.local_pose.orientation.rotate(c.bounds.center));
      centroid = centroid + local.back();
    }
    centroid = centroid / static_cast<double>(local.size());

    const auto poses = interpreter::explode_assembly(item, base, scale, e);
    const Vec3 world_centroid = base.transform_point(centroid * scale);
    for (std::size_t k = 0; k < poses.size(); ++k) {
      const Vec3 center = poses[k].world_pose.transform_point(item.components[k].bounds.center * scale);
      const double got = (center - world_centroid).norm();
      const double want = (1.0 + e) * scale * (local[k] - centroid).norm();
      worst = std::max(worst, std::abs(got - want));
      if (std::abs(got - want) > 1e-9) {
        f.add("distance law off by " + std::to_string(got - want) + " in assembly " + std::to_string(i));
      }
    }

    const double star = interpreter::separating_explosion_factor(item, base, scale);
    largest_e = std::max(largest_e, star);
    const auto rest = interpreter::explode_assembly(item, base, scale, 0.0);
    const auto apart = interpreter::explode_assembly(item, base, scale, star * 1.01);
    double at_rest = 0.0;
    for (std::size_t a = 0; a < apart.size(); ++a) {
      for (std::size_t b = a + 1; b < apart.size(); ++b) {
        const auto& ca = item.components[a].bounds;
        const auto& cb = item.components[b].bounds;
        at_rest += oracle_overlap(oracle_transformed_bounds(ca, rest[a].world_pose, scale),
                                  oracle_transformed_bounds(cb, rest[b].world_pose, scale));
        const double v = oracle_overlap(oracle_transformed_bounds(ca, apart[a].world_pose, scale),
                                        oracle_transformed_bounds(cb, apart[b].world_pose, scale));
        if (v > 0.0) {
          f.add("overlap " + std::to_string(v) + " at 1.01 e* in assembly " + std::to_string(i));
        }
      }
    }
    overlapping_at_rest += at_rest > 0.0;
  }
  if (!f.none()) {
    return {false, f.describe()};
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "%d assemblies (%d overlapping at rest), max distance error %.3g, max e* %.4g",
                kAssemblies, overlapping_at_rest, worst, largest_e);
  return {true, buf};
}

// ---------------------------------------------------------------------------

Outcome protocol() {
  constexpr int kMessages = 10000;
  constexpr int kRuns = 100;
  constexpr int kEvents = 100;
  Rng rng(606);
  Failures f;
  for (int i = 0; i < kMessages; ++i) {
    const Message m = random_message(rng);
    if (!(decode(encode(m)) == m)) {
      f.add("round trip changed a " + std::string(type_name(m.body)) + " message");
    }
  }
  for (int run = 0; run < kRuns; ++run) {
    Hub hub(HubContext{}, small_world(rng, 4, 3));
    const HubState initial = hub.state();
    std::vector<Delta> deltas;
    hub.set_observer([&](const Message& m) {
      if (const auto* d = body_as<Delta>(m)) {
        deltas.push_back(*d);
      }
    });
    const auto op = hub.open_session("op", 0.0);
    std::uint64_t seq = 0;
    hub.handle({op, ++seq, msg::RegisterOperator{}}, 0.0);
    double clock = 0.0;
    std::optional<HubState> midway;
    std::size_t midway_index = 0;
    int guard = 0;
    while (deltas.size() < static_cast<std::size_t>(kEvents) && ++guard < 100000) {
      if (coin(rng)) {
        clock += uniform(rng, 0.0, 0.7);
        hub.tick(clock);
      }
      hub.handle({op, ++seq, random_operator_body(rng, hub.state(), seq)}, clock);
      hub.drain(op);
      if (!midway && deltas.size() >= kEvents / 2) {
        midway = hub.state();
        midway_index = deltas.size();
      }
    }
    if (deltas.size() < static_cast<std::size_t>(kEvents)) {
      f.add("run " + std::to_string(run) + " produced only " + std::to_string(deltas.size()) + " deltas");
      continue;
    }
    // Deltas also go over the wire before replay.
    for (auto& d : deltas) {
      d = std::get<Delta>(decode(encode(Message{"*", d.seq, d})).body);
    }
    if (!(replay(initial, deltas) == hub.state())) {
      f.add("replay from the initial snapshot diverged in run " + std::to_string(run));
    }
    const std::vector<Delta> tail(deltas.begin() + static_cast<std::ptrdiff_t>(midway_index), deltas.end());
    if (!(replay(*midway, tail) == hub.state())) {
      f.add("replay from a mid-run snapshot diverged in run " + std::to_string(run));
    }
  }
  if (!f.none()) {
    return {false, f.describe()};
  }
  return {true, std::to_string(kMessages) + " messages round-tripped, " + std::to_string(kRuns) + " runs of " +
                    std::to_string(kEvents) + "+ deltas replayed"};
}

// ---------------------------------------------------------------------------

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const auto scenario = sim::load_scenario(kSource / "scenarios/cad_demo.json");
  const auto first = sim::serialize_log(sim::run_scenario(scenario, 60));
  const auto second = sim::serialize_log(sim::run_scenario(scenario, 60));
  if (first != second) {
    return {false, "two runs differ"};
  }
  const auto golden_path = kSource / "tests/golden/cad_demo.ndjson";
  if (!std::filesystem::exists(golden_path)) {
    return {false, "golden log missing"};
  }
  const auto golden = read_file(golden_path);
  if (first != golden) {
    const auto diff = sim::diff_logs(first, golden);
    return {false, "log differs from golden at record " + (diff.index ? std::to_string(*diff.index) : "?")};
  }

  std::vector<Delta> deltas;
  std::istringstream lines(golden);
  for (std::string line; std::getline(lines, line);) {
    const auto m = message_from_json(nlohmann::json::parse(line).at("message"));
    if (const auto* d = body_as<Delta>(m)) {
      deltas.push_back(*d);
    }
  }
  const auto final_state = replay(
      make_hub_state(make_world(load_content_library(scenario.content_library), scenario.displays)), deltas);
  const std::map<DisplayId, interpreter::RepresentationMode> expected{
      {"wall-engineer", interpreter::RepresentationMode::kExploded},
      {"table-designer", interpreter::RepresentationMode::kDesignEmphasis},
      {"laptop-manager", interpreter::RepresentationMode::kSummary},
  };
  std::map<DisplayId, std::string> shown;
  for (const auto& [id, placement] : final_state.world.placements) {
    if (const auto* d = std::get_if<Displayed>(&placement)) {
      const auto mode = final_state.representations.at(id).mode;
      const auto want = expected.find(d->display_id);
      if (want == expected.end() || want->second != mode) {
        return {false, id + " shown as " + std::string(interpreter::to_string(mode)) + " on " + d->display_id};
      }
      shown[d->display_id] = id;
    }
  }
  if (shown.size() != expected.size()) {
    return {false, "only " + std::to_string(shown.size()) + " of 3 displays show content"};
  }
  return {true, "two runs byte-identical and equal to golden (" + std::to_string(golden.size()) +
                    " bytes); Exploded/DesignEmphasis/Summary on engineer/designer/manager displays"};
}

// ---------------------------------------------------------------------------

// One client's view: snapshot then strictly consecutive deltas.
struct Mirror {
  std::optional<HubState> state;
  std::uint64_t last_out_seq = 0;
  std::size_t deltas = 0;
  std::optional<std::string> fault;

  void accept(const Message& m) {
    if (m.seq <= last_out_seq && !fault) {
      fault = "outbound seq " + std::to_string(m.seq) + " after " + std::to_string(last_out_seq);
    }
    last_out_seq = m.seq;
    if (const auto* snap = body_as<msg::Snapshot>(m)) {
      state = snap->state;
    } else if (const auto* delta = body_as<Delta>(m)) {
      if (!state) {
        fault = fault ? fault : std::optional<std::string>("delta before snapshot");
        return;
      }
      if (delta->seq != state->world.seq + 1 && !fault) {
        fault = "delta gap: " + std::to_string(state->world.seq) + " -> " + std::to_string(delta->seq);
      }
      state = replay(*state, {*delta});
      ++deltas;
    }
  }
};

Outcome hub_scale() {
  constexpr int kDisplays = 8;
  constexpr int kEvents = 1000;
  Rng rng(808);
  std::vector<ContentItem> items;
  for (int i = 0; i < 6; ++i) {
    items.push_back(random_item(rng, "c" + std::to_string(i)));
  }
  const auto profiles = ring_of_displays(rng, kDisplays);
  HubContext ctx;
  // Transfers must finish between operator events or contents stay in transit.
  ctx.policy.duration = 0.002;
  HubServer server(Hub(ctx, make_hub_state(make_world(items, {}))), ServerOptions{.tick_hz = 1000});
  const auto port = server.start();

  struct DisplayClient {
    std::unique_ptr<LoopbackClient> client;
    Mirror mirror;
    std::atomic<std::uint64_t> world_seq{0};
    std::thread reader;
  };
  std::vector<DisplayClient> screens(kDisplays);
  std::atomic<bool> done{false};
  for (int i = 0; i < kDisplays; ++i) {
    auto& d = screens[static_cast<std::size_t>(i)];
    d.client = std::make_unique<LoopbackClient>(port, i == 0);
    d.client->send({"", 1, msg::RegisterDisplay{profiles[static_cast<std::size_t>(i)]}});
    d.reader = std::thread([&d, &done] {
      while (!done) {
        if (auto m = d.client->receive(std::chrono::milliseconds(50))) {
          d.mirror.accept(*m);
          if (d.mirror.state) {
            d.world_seq = d.mirror.state->world.seq;
          }
        } else if (d.client->closed()) {
          return;
        }
      }
    });
  }

  LoopbackClient op(port, false);
  Mirror op_mirror;
  const auto await_reply = [&](std::uint64_t seq) -> std::optional<Message> {
    while (auto m = op.receive(std::chrono::seconds(10))) {
      op_mirror.accept(*m);
      if (const auto* ack = body_as<msg::Ack>(*m); ack && ack->seq == seq) {
        return m;
      }
      if (body_as<msg::Error>(*m)) {
        return m;
      }
    }
    return std::nullopt;
  };

  Failures f;
  std::uint64_t seq = 1;
  op.send({"", seq, msg::RegisterOperator{}});
  if (!await_reply(seq) || !op_mirror.state) {
    f.add("operator registration failed");
  }
  // Let every display register before traffic starts.
  const auto settle = std::chrono::steady_clock::now() + std::chrono::seconds(10);
  while (f.none() && op_mirror.state->world.displays.size() < kDisplays && std::chrono::steady_clock::now() < settle) {
    if (auto m = op.receive(std::chrono::milliseconds(100))) {
      op_mirror.accept(*m);
    }
  }

  std::size_t acked = 0;
  std::size_t errors = 0;
  for (int i = 0; f.none() && i < kEvents; ++i) {
    ++seq;
    op.send({"", seq, random_operator_body(rng, *op_mirror.state, seq)});
    const auto reply = await_reply(seq);
    if (!reply) {
      f.add("no reply to event " + std::to_string(i));
      break;
    }
    body_as<msg::Ack>(*reply) ? ++acked : ++errors;
  }

  // Transfers still in flight would keep producing deltas after the snapshot.
  const auto quiet = std::chrono::steady_clock::now() + std::chrono::seconds(10);
  while (!server.state_copy().plans.empty() && std::chrono::steady_clock::now() < quiet) {
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  ++seq;
  op.send({"", seq, msg::SnapshotRequest{}});
  std::optional<HubState> snapshot;
  while (f.none()) {
    const auto m = op.receive(std::chrono::seconds(10));
    if (!m) {
      f.add("no snapshot");
      break;
    }
    if (const auto* s = body_as<msg::Snapshot>(*m)) {
      snapshot = s->state;
      break;
    }
    op_mirror.accept(*m);
  }
  if (snapshot && !(op_mirror.state == snapshot)) {
    f.add("operator mirror differs from a fresh snapshot");
  }
  if (op_mirror.fault) {
    f.add("operator: " + *op_mirror.fault);
  }

  // Displays catch up to the snapshot, then must agree with it.
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(10);
  while (snapshot && std::chrono::steady_clock::now() < deadline &&
         std::any_of(screens.begin(), screens.end(), [&](const DisplayClient& d) {
           return d.world_seq.load() < snapshot->world.seq;
         })) {
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  done = true;
  std::size_t delivered = 0;
  for (auto& d : screens) {
    d.reader.join();
    delivered += d.mirror.deltas;
    if (d.mirror.fault) {
      f.add("display: " + *d.mirror.fault);
    }
    if (snapshot && d.mirror.state && d.mirror.state->world.seq == snapshot->world.seq &&
        !(*d.mirror.state == *snapshot)) {
      f.add("display mirror differs from the snapshot");
    } else if (snapshot && (!d.mirror.state || d.mirror.state->world.seq != snapshot->world.seq)) {
      f.add("display mirror did not reach the final seq");
    }
  }
  server.stop();
  if (!f.none()) {
    return {false, f.describe()};
  }
  return {true, std::to_string(kEvents) + " operator events (" + std::to_string(acked) + " acked, " +
                    std::to_string(errors) + " rejected), " + std::to_string(delivered) +
                    " deltas to 8 displays, no gaps or reordering, mirrors equal the final snapshot"};
}

struct Criterion {
  const char* name;
  double limit_seconds;  // 0: no time bound
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"lifecycle-safety", 10.0, lifecycle_safety},
      {"selection-oracle-equivalence", 5.0, selection_oracle},
      {"basic-interface-contract", 0.0, basic_interface},
      {"round-trip", 0.0, round_trip},
      {"exploded-view-law", 0.0, exploded_law},
      {"protocol", 0.0, protocol},
      {"determinism", 0.0, determinism},
      {"hub-scale", 30.0, hub_scale},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && seconds >= c.limit_seconds) {
      outcome.ok = false;
      outcome.detail += "; exceeded the time limit";
    }
    char timing[64];
    if (c.limit_seconds > 0) {
      std::snprintf(timing, sizeof timing, "%.2f s, limit %.0f s", seconds, c.limit_seconds);
    } else {
      std::snprintf(timing, sizeof timing, "%.2f s", seconds);
    }
    std::printf("%s %s (%s, %s)\n", outcome.ok ? "PASS" : "FAIL", c.name, outcome.detail.c_str(), timing);
    std::fflush(stdout);
    failures += !outcome.ok;
  }
  return failures == 0 ? 0 : 1;
}
