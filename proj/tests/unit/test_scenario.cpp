#include <doctest.h>

#include <cmath>
#include <map>

#include "fixtures.hpp"
#include "roundabout/errors.hpp"
#include "roundabout/generator.hpp"
#include "roundabout/params.hpp"
#include "roundabout/scenario.hpp"

using namespace roundabout;
using roundabout::testing::straight_road;

TEST_CASE("default parameters are the published values") {
  const SolverParams p;
  CHECK(p.wheelbase_b == 2.875);
  CHECK(p.tau_s == 0.1);
  CHECK(p.horizon_T == 75);
  CHECK(p.a_min == -12.0);
  CHECK(p.a_max == 8.0);
  CHECK(p.delta_min == -0.62);
  CHECK(p.delta_max == 0.62);
  CHECK(p.d_safe == 2.62);
  CHECK(p.d_f == 2.79);
  CHECK(p.d_r == -0.05);
  CHECK(p.v_ref == 10.0);
  CHECK(p.sigma == 0.2);
  CHECK(p.rho == 0.02);
  CHECK(p.epsilon == 0.3);
  CHECK(p.k_max == 2);
  CHECK(p.zeta == 1.0);
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("parameter invariants are enforced") {
  auto broken = [](auto mutate) {
    SolverParams p;
    mutate(p);
    return p;
  };
  CHECK_THROWS_AS(broken([](SolverParams& p) { p.tau_s = 0.0; }).validate(), ValidationError);
  CHECK_THROWS_AS(broken([](SolverParams& p) { p.horizon_T = 0; }).validate(), ValidationError);
  CHECK_THROWS_AS(broken([](SolverParams& p) { p.a_min = p.a_max; }).validate(), ValidationError);
  CHECK_THROWS_AS(broken([](SolverParams& p) { p.delta_min = 1.0; }).validate(), ValidationError);
  CHECK_THROWS_AS(broken([](SolverParams& p) { p.sigma = 0.0; }).validate(), ValidationError);
  CHECK_THROWS_AS(broken([](SolverParams& p) { p.rho = -1.0; }).validate(), ValidationError);
  CHECK_THROWS_AS(broken([](SolverParams& p) { p.epsilon = -0.1; }).validate(), ValidationError);
  CHECK_THROWS_AS(broken([](SolverParams& p) { p.zeta = 0.0; }).validate(), ValidationError);
  CHECK_THROWS_AS(broken([](SolverParams& p) { p.w_acc = 0.0; }).validate(), ValidationError);
}

TEST_CASE("parameters round-trip through JSON and reject unknown keys") {
  SolverParams p;
  p.horizon_T = 12;
  p.w_lat = 3.5;
  const nlohmann::json j = p;
  const SolverParams q = j.get<SolverParams>();
  CHECK(q.horizon_T == 12);
  CHECK(q.w_lat == 3.5);
  CHECK(nlohmann::json(q) == j);

  CHECK_THROWS_AS(nlohmann::json({{"no_such_key", 1.0}}).get<SolverParams>(), ParseError);
  CHECK_THROWS_AS(nlohmann::json({{"sigma", "big"}}).get<SolverParams>(), ParseError);
  CHECK(nlohmann::json::object().get<SolverParams>().sigma == 0.2);
}

TEST_CASE("densify keeps vertices and respects max_gap") {
  const std::vector<Vec2> line{{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {1.0, 2.3}};
  const auto pts = densify(line, 0.25);
  CHECK(pts.front() == line.front());
  CHECK(pts.back() == line.back());
  CHECK(std::find(pts.begin(), pts.end(), Vec2(1.0, 0.0)) != pts.end());
  for (std::size_t k = 1; k < pts.size(); ++k) {
    CHECK((pts[k] - pts[k - 1]).norm() <= 0.25 + 1e-12);
    CHECK((pts[k] - pts[k - 1]).norm() > 0.0);
  }
}

TEST_CASE("boundary cloud is dense and queries return members") {
  const auto cloud = BoundaryCloud::from_polylines({{{0.0, 0.0}, {10.0, 0.0}}, {{0.0, 5.0}, {3.0, 9.0}}}, 0.25);
  REQUIRE(!cloud.points.empty());
  const Vec2& hit = cloud.nearest({4.1, 0.3});
  CHECK(std::find(cloud.points.begin(), cloud.points.end(), hit) != cloud.points.end());
  CHECK(hit.y() == 0.0);
  CHECK(std::abs(hit.x() - 4.0) < 0.13);
  CHECK_THROWS_AS(BoundaryCloud::from_polylines({}, 0.25), ValidationError);
}

TEST_CASE("reference path invariants") {
  const auto path = ReferencePath::from_polyline(std::vector<Vec2>{{0.0, 0.0}, {10.0, 0.0}, {10.0, 10.0}}, 0.25);
  REQUIRE(path.size() >= 2);
  for (std::size_t k = 0; k < path.size(); ++k) CHECK(std::abs(path.tangents[k].norm() - 1.0) <= 1e-9);
  for (std::size_t k = 1; k < path.size(); ++k) {
    CHECK((path.waypoints[k] - path.waypoints[k - 1]).norm() <= 0.25 + 1e-12);
    CHECK(path.arc_length[k] > path.arc_length[k - 1]);
  }
  CHECK(path.arc_length.back() == doctest::Approx(20.0));
  CHECK_THROWS_AS(ReferencePath::from_polyline(std::vector<Vec2>{{1.0, 1.0}, {1.0, 1.0}}, 0.25), ValidationError);
}

TEST_CASE("two-vehicle document round-trips into a scenario") {
  auto doc = straight_road({{0.0, -2.0, 0.0, 10.0}, {9.0, 2.0, 0.0, 10.0}});
  doc.vehicles[0].reference_polyline = {{-40.0, -2.0}, {0.0, -2.0}, {0.0, -2.0}, {240.0, -2.0}};
  doc.vehicles[1].group = 2;
  const auto text = doc.to_json().dump();
  const Scenario sc = parse_scenario(text);
  CHECK(sc.num_vehicles() == 2);
  CHECK(!sc.boundary.points.empty());
  CHECK(sc.vehicles[1].group == 2);
  CHECK(ScenarioDocument::from_json(nlohmann::json::parse(text)).to_json().dump() == text);
}

TEST_CASE("identical start positions fail validation") {
  const auto doc = straight_road({{5.0, 0.0, 0.0, 10.0}, {5.0, 0.0, 0.0, 10.0}});
  try {
    build_scenario(doc);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("vehicles 0 and 1") != std::string::npos);
  }
}

TEST_CASE("start positions must keep the spacing and boundary margins") {
  const double min_gap = SolverParams{}.d_safe + SolverParams{}.vehicle_length();
  CHECK_THROWS_AS(build_scenario(straight_road({{0.0, 0.0, 0.0, 10.0}, {min_gap - 0.01, 0.0, 0.0, 10.0}})),
                  ValidationError);
  CHECK_NOTHROW(build_scenario(straight_road({{0.0, 0.0, 0.0, 10.0}, {min_gap + 0.01, 0.0, 0.0, 10.0}})));
  CHECK_THROWS_AS(build_scenario(straight_road({{0.0, 4.8, 0.0, 10.0}})), ValidationError);
  CHECK_THROWS_AS(build_scenario(straight_road({{0.0, 0.0, std::nan(""), 10.0}})), ValidationError);
  auto doc = straight_road({{0.0, 0.0, 0.0, 10.0}});
  doc.vehicles[0].group = 0;
  CHECK_THROWS_AS(build_scenario(doc), ValidationError);
  doc.vehicles.clear();
  CHECK_THROWS_AS(build_scenario(doc), ValidationError);
}

TEST_CASE("scenario parse errors") {
  CHECK_THROWS_AS(parse_scenario("{not json"), ParseError);
  CHECK_THROWS_AS(parse_scenario("[]"), ParseError);
  CHECK_THROWS_AS(parse_scenario(R"({"params":{},"boundary_polylines":[],"vehicles":[{"start":[1,2]}]})"),
                  ParseError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/dir/scenario.json"), IoError);
}

TEST_CASE("loading identical bytes gives identical scenarios") {
  const auto text = generate_roundabout(RoundaboutLayout{}).to_json().dump();
  const Scenario a = parse_scenario(text);
  const Scenario b = parse_scenario(text);
  REQUIRE(a.num_vehicles() == b.num_vehicles());
  CHECK(a.boundary.points == b.boundary.points);
  for (int i = 0; i < a.num_vehicles(); ++i) {
    CHECK(a.vehicles[i].start == b.vehicles[i].start);
    CHECK(a.vehicles[i].path.waypoints == b.vehicles[i].path.waypoints);
  }
}

TEST_CASE("generated 16-vehicle roundabout passes validation with even groups") {
  const ScenarioDocument doc = generate_roundabout(RoundaboutLayout{});
  const Scenario sc = build_scenario(doc);
  CHECK(sc.num_vehicles() == 16);
  std::map<int, int> per_group;
  for (const auto& v : sc.vehicles) ++per_group[v.group];
  CHECK(per_group == std::map<int, int>{{1, 4}, {2, 4}, {3, 4}, {4, 4}});
  for (const auto& v : sc.vehicles) {
    const auto& start = v.start;
    CHECK((v.path.waypoints[v.path.nearest(start.position())] - start.position()).norm() < 0.2);
  }
}

TEST_CASE("generator is deterministic and validates its layout") {
  RoundaboutLayout layout;
  layout.n_vehicles = 8;
  CHECK(generate_roundabout(layout).to_json().dump() == generate_roundabout(layout).to_json().dump());
  CHECK_NOTHROW(build_scenario(generate_roundabout(layout)));
  layout.seed = 99;
  CHECK_NOTHROW(build_scenario(generate_roundabout(layout)));

  RoundaboutLayout bad;
  bad.inner_radius = bad.outer_radius;
  CHECK_THROWS_AS(generate_roundabout(bad), ValidationError);
  bad = RoundaboutLayout{};
  bad.entrances = 1;
  CHECK_THROWS_AS(generate_roundabout(bad), ValidationError);
}
