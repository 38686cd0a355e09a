#include <doctest.h>

#include <cmath>
#include <numbers>

#include "crossdrop/core/error.hpp"
#include "crossdrop/core/json_io.hpp"
#include "crossdrop/core/lifecycle.hpp"
#include "crossdrop/core/world.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace crossdrop;
using namespace crossdrop::testing;

namespace {

ContentItem unit_cube() {
  ContentItem item;
  item.id = "cube";
  item.kind = ContentKind::kPrimitive;
  item.bounds = {{0, 0, 0}, {0.5, 0.5, 0.5}};
  return item;
}

bool has_violation(const ValidationReport& r, std::string_view text) {
  for (const auto& v : r.violations) {
    if (v.find(text) != std::string::npos) {
      return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("math: quaternion rotation and slerp") {
  const auto q = UnitQuat::from_axis_angle({0, 0, 1}, std::numbers::pi / 2);
  const Vec3 r = q.rotate({1, 0, 0});
  CHECK(r.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.y == doctest::Approx(1.0));

  const auto a = UnitQuat::identity();
  CHECK(slerp(a, q, 0.0) == a);
  const auto mid = slerp(a, q, 0.5);
  const auto expected = UnitQuat::from_axis_angle({0, 0, 1}, std::numbers::pi / 4);
  CHECK(std::abs(mid.dot(expected)) == doctest::Approx(1.0).epsilon(1e-12));

  // Antipodal representation of the same rotation takes the short way.
  const auto far = slerp(a, q.negated(), 0.5);
  CHECK(std::abs(far.dot(expected)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("validate_content examples") {
  CHECK(validate_content(unit_cube()).ok());

  auto empty_assembly = unit_cube();
  empty_assembly.kind = ContentKind::kAssembly;
  CHECK(has_violation(validate_content(empty_assembly), "assembly must have components"));

  auto opaque = unit_cube();
  opaque.appearance.opacity = 1.5;
  CHECK(has_violation(validate_content(opaque), "opacity out of range"));

  auto bad_scale = unit_cube();
  bad_scale.appearance.scale = 0.0;
  CHECK(has_violation(validate_content(bad_scale), "scale must be positive"));

  auto prim_with_parts = unit_cube();
  prim_with_parts.components.push_back({"p", {}, {}, "", ""});
  CHECK(has_violation(validate_content(prim_with_parts), "only assemblies may have components"));

  Rng rng(3);
  auto dup = random_item(rng, "a", ContentKind::kAssembly);
  dup.components[1].id = dup.components[0].id;
  CHECK_FALSE(validate_content(dup).ok());

  auto several = unit_cube();
  several.appearance.opacity = -1;
  several.appearance.scale = -1;
  CHECK(validate_content(several).violations.size() == 2);
}

TEST_CASE("transformed_bounds examples") {
  const Aabb cube{{0, 0, 0}, {0.5, 0.5, 0.5}};
  const auto b1 = transformed_bounds(cube, Pose{}, 1.0);
  CHECK(b1.center == Vec3{0, 0, 0});
  CHECK(b1.half_extents == Vec3{0.5, 0.5, 0.5});

  const auto b2 = transformed_bounds(cube, Pose{}, 2.0);
  CHECK(b2.half_extents == Vec3{1, 1, 1});

  const auto b3 = transformed_bounds(cube, {{}, UnitQuat::from_axis_angle({0, 0, 1}, std::numbers::pi / 4)}, 1.0);
  CHECK(b3.half_extents.x == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-12));
  CHECK(b3.half_extents.y == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-12));
  CHECK(b3.half_extents.z == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(transformed_bounds(cube, Pose{}, 0.0), Error);
  try {
    transformed_bounds(cube, Pose{}, -1.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidArgument);
  }
}

TEST_CASE("transformed_bounds agrees with the closed-form extents and encloses sampled points") {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const Aabb local{random_vec(rng, -1, 1), random_vec(rng, 0.01, 2)};
    const Pose pose = random_pose(rng);
    const double scale = uniform(rng, 0.01, 5);
    const auto got = transformed_bounds(local, pose, scale);
    const auto want = oracle_transformed_bounds(local, pose, scale);
    for (int axis = 0; axis < 3; ++axis) {
      REQUIRE(std::abs(got.center[axis] - want.center[axis]) <= 1e-9);
      REQUIRE(std::abs(got.half_extents[axis] - want.half_extents[axis]) <= 1e-9);
    }
    const Vec3 local_point = local.center + Vec3{uniform(rng, -1, 1) * local.half_extents.x,
                                                 uniform(rng, -1, 1) * local.half_extents.y,
                                                 uniform(rng, -1, 1) * local.half_extents.z};
    REQUIRE(got.contains(pose.transform_point(local_point * scale), 1e-9));
  }
}

TEST_CASE("lifecycle: examples") {
  const PlacementState held = InControl{};
  const auto next = apply_transition(held, lifecycle::BeginPlacement{"p1"});
  CHECK(next == PlacementState{InTransit{"p1", TransferDirection::kPlacement}});

  const PlacementState shown = Displayed{"d", "rep", {}};
  CHECK_THROWS_AS(apply_transition(shown, lifecycle::BeginPlacement{"p1"}), Error);
  try {
    apply_transition(held, lifecycle::BeginRetrieval{"p1"});
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTransitionRejected);
  }
}

TEST_CASE("lifecycle: the 4x4 state-event table matches the adjacency matrix") {
  const std::string plan = "plan-1";
  const Displayed shown{"d", "rep", {}};
  const InControl held{};
  const std::array<PlacementState, 4> states = {
      held, InTransit{plan, TransferDirection::kPlacement}, InTransit{plan, TransferDirection::kRetrieval}, shown};
  for (std::size_t s = 0; s < 4; ++s) {
    // The completion/cancel payload has to be the kind the edge leads to.
    const bool placing = s == 1;
    const std::array<LifecycleEvent, 4> events = {
        lifecycle::BeginPlacement{plan}, lifecycle::BeginRetrieval{plan},
        lifecycle::TransitComplete{plan, placing ? std::variant<InControl, Displayed>(shown)
                                                 : std::variant<InControl, Displayed>(held)},
        lifecycle::Cancel{plan, placing ? std::variant<InControl, Displayed>(held)
                                        : std::variant<InControl, Displayed>(shown)}};
    for (std::size_t e = 0; e < 4; ++e) {
      CAPTURE(s);
      CAPTURE(e);
      const int want = kAdjacency[s][e];
      if (want < 0) {
        CHECK_THROWS_AS(apply_transition(states[s], events[e]), Error);
      } else {
        const auto got = apply_transition(states[s], events[e]);
        CHECK(static_cast<int>(node_of(got)) == want);
      }
    }
  }
}

TEST_CASE("lifecycle: completion must name the live plan and arrive at the right kind") {
  const PlacementState placing = InTransit{"p", TransferDirection::kPlacement};
  CHECK_THROWS_AS(apply_transition(placing, lifecycle::TransitComplete{"other", Displayed{}}), Error);
  CHECK_THROWS_AS(apply_transition(placing, lifecycle::TransitComplete{"p", InControl{}}), Error);
  CHECK_THROWS_AS(apply_transition(placing, lifecycle::Cancel{"p", Displayed{}}), Error);
  const PlacementState retrieving = InTransit{"p", TransferDirection::kRetrieval};
  CHECK_THROWS_AS(apply_transition(retrieving, lifecycle::TransitComplete{"p", Displayed{}}), Error);
  CHECK_THROWS_AS(apply_transition(retrieving, lifecycle::Cancel{"p", InControl{}}), Error);
}

TEST_CASE("lifecycle: random event sequences follow the table and rejections keep the state") {
  Rng rng(5);
  for (int run = 0; run < 1000; ++run) {
    PlacementState state = InControl{};
    int node = 0;
    for (int step = 0; step < 30; ++step) {
      const std::string plan = coin(rng) ? "a" : "b";
      const std::variant<InControl, Displayed> payload =
          coin(rng) ? std::variant<InControl, Displayed>(InControl{})
                    : std::variant<InControl, Displayed>(Displayed{"d", "r", {}});
      LifecycleEvent event;
      const int kind = uniform_int(rng, 0, 3);
      switch (kind) {
        case 0: event = lifecycle::BeginPlacement{plan}; break;
        case 1: event = lifecycle::BeginRetrieval{plan}; break;
        case 2: event = lifecycle::TransitComplete{plan, payload}; break;
        default: event = lifecycle::Cancel{plan, payload};
      }
      const auto before = state;
      try {
        state = apply_transition(state, event);
        REQUIRE(kAdjacency[node][kind] >= 0);
        node = static_cast<int>(node_of(state));
        REQUIRE(kAdjacency[static_cast<int>(node_of(before))][kind] == node);
      } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::kTransitionRejected);
        REQUIRE(state == before);
      }
    }
  }
}

TEST_CASE("make_world and check_world") {
  Rng rng(1);
  std::vector<ContentItem> items{random_item(rng, "b"), random_item(rng, "a")};
  std::vector<DisplayProfile> displays{random_display(rng, "d1")};
  auto world = make_world(items, displays);
  CHECK(world.contents.size() == 2);
  CHECK(check_world(world).ok());
  CHECK(std::get<InControl>(world.placements.at("a")).hold_pose == default_hold_pose(0));
  CHECK(std::get<InControl>(world.placements.at("b")).hold_pose == default_hold_pose(1));

  world.placements.at("a") = Displayed{"ghost", "rep", {}};
  CHECK_FALSE(check_world(world).ok());
  world.placements.erase("a");
  CHECK_FALSE(check_world(world).ok());

  items.push_back(items.front());
  CHECK_THROWS_AS(make_world(items, displays), Error);
}

TEST_CASE("json round trips for core types") {
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const auto item = random_item(rng, "c" + std::to_string(i));
    CHECK(nlohmann::json(item).get<ContentItem>() == item);
    const auto display = random_display(rng, "d");
    CHECK(nlohmann::json(display).get<DisplayProfile>() == display);
    const auto placement = random_placement(rng);
    nlohmann::json j;
    to_json(j, placement);
    PlacementState back;
    from_json(j, back);
    CHECK(back == placement);
  }
}

TEST_CASE("content library parsing reports the offending line") {
  const std::string good = R"({"id":"a","kind":"Primitive","bounds":{"center":{"x":0,"y":0,"z":0},"half_extents":{"x":1,"y":1,"z":1}},"appearance":{"color":[1,2,3,4],"opacity":1,"scale":1}})";
  CHECK(parse_content_library(good + "\n\n" + good.substr(0, good.size())).size() == 2);

  try {
    parse_content_library(good + "\n{\"id\": 3}\n", "lib.jsonl");
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfigurationError);
    CHECK(std::string(e.what()).find("lib.jsonl:2") != std::string::npos);
  }
  std::string bad_color = good;
  bad_color.replace(bad_color.find("[1,2,3,4]"), 9, "[1,2,3,400]");
  CHECK_THROWS_AS(parse_content_library(bad_color), Error);
}

TEST_CASE("shipped content library loads") {
  const auto items = load_content_library(CROSSDROP_SOURCE_DIR "/data/cad_demo/library.jsonl");
  CHECK(items.size() == 4);
  for (const auto& item : items) {
    CHECK(validate_content(item).ok());
  }
}

TEST_CASE("error codes have stable wire names") {
  for (const auto code : {ErrorCode::kInvalidArgument, ErrorCode::kNotFound, ErrorCode::kTransitionRejected,
                          ErrorCode::kForbidden, ErrorCode::kInvalidState, ErrorCode::kNoTarget,
                          ErrorCode::kProtocolError, ErrorCode::kDesyncError, ErrorCode::kConfigurationError}) {
    CHECK(error_code_from_string(to_string(code)) == code);
  }
  CHECK(to_string(ErrorCode::kTransitionRejected) == "transition-rejected");
}
