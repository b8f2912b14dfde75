#include "doctest.h"

#include "pgentropy/config.hpp"
#include "pgentropy/pipeline.hpp"

using namespace pge;
using nlohmann::json;

namespace {

json dyadic_config() {
  return json::parse(R"({
    "space": "circle",
    "name": "dyadic-from-config",
    "generators": [
      {"id": 0, "kind": "identity", "label": "e",
       "pieces": [{"domain": [0, 1], "params": []}],
       "lipschitz": 1.0, "inverse": 0},
      {"id": 1, "kind": "affine", "label": "b0",
       "pieces": [{"domain": [0, 0.5], "params": [0.0, 2.0]}],
       "lipschitz": 2.0, "inverse": 2},
      {"id": 2, "kind": "affine", "label": "b0inv",
       "pieces": [{"domain": [0, 0.5], "params": [0.0, 0.5]},
                   {"domain": [0.5, 1], "params": [0.0, 0.5]}],
       "lipschitz": 0.5, "inverse": 1},
      {"id": 3, "kind": "affine", "label": "b1",
       "pieces": [{"domain": [0.5, 1], "params": [-1.0, 2.0]}],
       "lipschitz": 2.0, "inverse": 4},
      {"id": 4, "kind": "affine", "label": "b1inv",
       "pieces": [{"domain": [0, 0.5], "params": [0.5, 0.5]},
                   {"domain": [0.5, 1], "params": [0.5, 0.5]}],
       "lipschitz": 0.5, "inverse": 3}
    ]})");
}

}  // namespace

TEST_CASE("a valid config round-trips into a working system") {
  auto sys = parse_system_config(dyadic_config());
  CHECK(sys.gens.size() == 5);
  CHECK(sys.gens.max_lipschitz() == 2.0);
  auto v = evaluate(sys.gens, Word{{1, 1}}, Point{0.1});
  REQUIRE(v.has_value());
  CHECK(v->coord == doctest::Approx(0.4));
  auto j = system_to_json(sys);
  CHECK(j["space"] == "circle");
  CHECK(j["generators"].size() == 5);
}

TEST_CASE("diagnostics name the offending field") {
  auto missing_space = dyadic_config();
  missing_space.erase("space");
  CHECK_THROWS_WITH_AS(parse_system_config(missing_space), "space: missing",
                       ConfigError);

  auto bad_lip = dyadic_config();
  bad_lip["generators"][1]["lipschitz"] = 1.5;  // true slope is 2
  try {
    parse_system_config(bad_lip);
    FAIL("expected rejection");
  } catch (const ConfigError& e) {
    CHECK(e.field_path == "generators[1].lipschitz");
  }

  auto bad_inverse = dyadic_config();
  bad_inverse["generators"][1]["inverse"] = 1;
  CHECK_THROWS_AS(parse_system_config(bad_inverse), std::exception);

  auto bad_domain = dyadic_config();
  bad_domain["generators"][1]["pieces"][0]["domain"] = {0.5, 0.25};
  try {
    parse_system_config(bad_domain);
    FAIL("expected rejection");
  } catch (const ConfigError& e) {
    CHECK(e.field_path.find("generators[1].pieces[0]") == 0);
  }

  auto no_identity = dyadic_config();
  no_identity["generators"].erase(0);
  CHECK_THROWS_AS(parse_system_config(no_identity), ConfigError);

  auto bad_kind = dyadic_config();
  bad_kind["generators"][1]["kind"] = "quadratic";
  CHECK_THROWS_AS(parse_system_config(bad_kind), ConfigError);
}

TEST_CASE("sine generators validate against a bisection inverse") {
  json cfg = json::parse(R"({
    "space": "circle",
    "generators": [
      {"id": 0, "kind": "identity", "pieces": [{"domain": [0, 1], "params": []}],
       "lipschitz": 1.0, "inverse": 0},
      {"id": 1, "kind": "sine",
       "pieces": [{"domain": [0, 1], "params": [0.33, 0.05, 0.1]}],
       "lipschitz": 1.35, "inverse": 2},
      {"id": 2, "kind": "sine_inverse",
       "pieces": [{"domain": [0, 1], "params": [0.33, 0.05, 0.1]}],
       "lipschitz": 1.5, "inverse": 1}
    ]})");
  auto sys = parse_system_config(cfg);
  CHECK(sys.gens.size() == 3);
  // forward then inverse returns the argument
  auto v = sys.gens.apply_letter(1, 0.4);
  REQUIRE(v.has_value());
  auto back = sys.gens.apply_letter(2, *v);
  REQUIRE(back.has_value());
  CHECK(sys.gens.space().distance(Point{0.4}, Point{*back}) <= 1e-12);
}

TEST_CASE("plateau kind builds the Morse-Smale map") {
  json cfg = json::parse(R"({
    "space": "circle",
    "generators": [
      {"id": 0, "kind": "identity", "pieces": [{"domain": [0, 1], "params": []}],
       "lipschitz": 1.0, "inverse": 0},
      {"id": 1, "kind": "plateau",
       "pieces": [{"domain": [0, 1], "params": [0.0, 0.5, 0.2, 0.1]}],
       "lipschitz": 1.2, "inverse": 2},
      {"id": 2, "kind": "plateau_inverse",
       "pieces": [{"domain": [0, 1], "params": [0.0, 0.5, 0.2, 0.1]}],
       "lipschitz": 5.0, "inverse": 1}
    ]})");
  auto sys = parse_system_config(cfg);
  auto v = sys.gens.apply_letter(1, 0.2);
  REQUIRE(v.has_value());
  CHECK(*v == doctest::Approx(0.24));  // slope 1.2 from the source at 0
  CHECK(*sys.gens.apply_letter(1, 0.5) == doctest::Approx(0.5));
}

TEST_CASE("gallery specs load through the config layer") {
  auto sys = load_system("gallery:dyadic");
  CHECK(sys.name == "dyadic");
  CHECK_THROWS_AS(load_system("does-not-exist.json"), ConfigError);
}

TEST_CASE("schedule spec strings") {
  auto t1 = parse_schedule("theorem1", 2.0, 0.25, 0);
  CHECK(t1.kind == Schedule::Kind::theorem1);
  auto c = parse_schedule("const:0.001", 2.0, 0.25, 0);
  CHECK(c.kind == Schedule::Kind::constant);
  CHECK(c.value == 0.001);
  auto l = parse_schedule("list:0.1,0.05,0.02", 2.0, 0.25, 4);
  CHECK(l.kind == Schedule::Kind::list);
  CHECK(l.beta(5) == 0.05);
  CHECK_THROWS(parse_schedule("fibonacci", 2.0, 0.25, 0));
}
