#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cylev/scenario.hpp"

using namespace cylev;

TEST_CASE("config parsing and validation diagnostics") {
  CHECK_THROWS_AS(parse_config_text("{ not json"), ConfigError);

  SUBCASE("seed and n_paths are mandatory") {
    Json cfg = Json{{"n_paths", 1000}, {"checks", Json::array()}};
    CHECK_THROWS_WITH_AS(validate_config(cfg), "config: 'seed' is mandatory", ConfigError);
    cfg = Json{{"seed", 1}, {"checks", Json::array()}};
    CHECK_THROWS_WITH_AS(validate_config(cfg), "config: 'n_paths' is mandatory", ConfigError);
  }

  SUBCASE("unknown check types and broken references are diagnosed") {
    Json cfg = bundled_scenario("poisson_q2");
    cfg["checks"][0]["type"] = "bogus";
    CHECK_THROWS_WITH_AS(validate_config(cfg), "config: unknown check type 'bogus'",
                         ConfigError);
    cfg = bundled_scenario("poisson_q2");
    cfg["checks"][0]["process"] = "missing";
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  }

  SUBCASE("every bundled scenario validates") {
    for (const auto& info : list_scenarios()) CHECK_NOTHROW(validate_config(bundled_scenario(info.id)));
  }
}

TEST_CASE("config round trip is canonical") {
  const Json cfg = bundled_scenario("poisson_q2");
  const std::string doc = canonical_config(cfg);
  const Json reparsed = parse_config_text(doc);
  CHECK(canonical_config(reparsed) == doc);
  CHECK(reparsed == cfg);
}

TEST_CASE("empty check list runs and passes trivially") {
  Json cfg = Json{{"seed", 1},
                  {"n_paths", 1000},
                  {"processes", Json::object()},
                  {"checks", Json::array()}};
  const RunResult result = run_scenario(cfg);
  CHECK(result.all_passed);
  CHECK(result.summary.at("total").get<std::size_t>() == 0);
}

TEST_CASE("bundled poisson_q2 runs and passes at a reduced path count") {
  RunOverrides ov;
  ov.n_paths = 20000;
  const RunResult result = run_scenario(bundled_scenario("poisson_q2"), ov);
  CHECK(result.all_passed);
  CHECK(result.summary.at("checks")[0].at("id").get<std::string>() == "poisson_q2");
}

TEST_CASE("bundled ito_isometry_scalar hits the exact right side") {
  RunOverrides ov;
  ov.n_paths = 20000;
  const RunResult result = run_scenario(bundled_scenario("ito_isometry_scalar"), ov);
  CHECK(result.all_passed);
  CHECK(result.reports[0].second.at("rhs").get<double>() == 1.0);
  CHECK(result.reports[0].second.at("rhs_exact").get<bool>());
}

TEST_CASE("reports are byte-identical across thread counts") {
  Json cfg = bundled_scenario("levy_ito_reconstruction");
  cfg["n_paths"] = 2000;
  RunOverrides one, four;
  one.threads = 1;
  four.threads = 4;
  const RunResult a = run_scenario(cfg, one);
  const RunResult b = run_scenario(cfg, four);
  CHECK(a.summary.dump() == b.summary.dump());
  REQUIRE(a.reports.size() == b.reports.size());
  for (std::size_t i = 0; i < a.reports.size(); ++i)
    CHECK(a.reports[i].second.dump() == b.reports[i].second.dump());
}

TEST_CASE("seed override changes the reports, same seed reproduces them") {
  Json cfg = bundled_scenario("poisson_q2");
  cfg["n_paths"] = 2000;
  RunOverrides s1, s2;
  s1.seed = 111;
  s2.seed = 222;
  const RunResult a = run_scenario(cfg, s1);
  const RunResult b = run_scenario(cfg, s1);
  const RunResult c = run_scenario(cfg, s2);
  CHECK(a.reports[0].second.dump() == b.reports[0].second.dump());
  CHECK(a.reports[0].second.dump() != c.reports[0].second.dump());
}

TEST_CASE("export_paths emits the trajectory CSV artifact") {
  Json cfg = Json{{"seed", 5},
                  {"n_paths", 1000},
                  {"processes",
                   {{"L", {{"kind", "cyl_poisson"}, {"lambda", 1.0},
                           {"zeta", Json::array({1.0, 0.5})}}}}},
                  {"checks", Json::array({Json{{"id", "paths"},
                                               {"type", "export_paths"},
                                               {"process", "L"},
                                               {"functionals",
                                                Json::array({Json::array({1.0, 0.0})})},
                                               {"paths", 4},
                                               {"grid_steps", 8}}})}};
  const RunResult result = run_scenario(cfg);
  CHECK(result.all_passed);
  REQUIRE(result.csvs.size() == 1);
  // A single functional exports in the plain bundle format.
  CHECK(result.csvs[0].second.rfind("path_id,time,value\n", 0) == 0);
  // 4 paths x 9 grid times + header.
  const std::string& csv = result.csvs[0].second;
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4 * 9 + 1);
}

TEST_CASE("driver parsing honors normalize and centered flags") {
  const Json spec = Json{{"jumps", {{"type", "compound_poisson"},
                                    {"rate", 4.0},
                                    {"law", {{"kind", "point_mass"}, {"value", 1.0}}}}},
                         {"normalize", true},
                         {"centered", true}};
  const LevyTriplet1D t = parse_triplet(spec);
  CHECK(t.is_centered());
  CHECK(t.jump_second_moment() == doctest::Approx(1.0).epsilon(1e-12));
  // lambda = 4, jumps 1 -> scale 1/2.
  CHECK(std::get<CompoundPoissonJumps>(t.jumps).law.a == doctest::Approx(0.5));
}

TEST_CASE("bundled catalog covers the named identities") {
  const auto scenarios = list_scenarios();
  auto has = [&](const std::string& id) {
    for (const auto& info : scenarios)
      if (info.id == id) return true;
    return false;
  };
  CHECK(has("nonlinearity_witness"));
  CHECK(has("translation_counterexample"));
  CHECK(has("invariant_measure_expstable"));
  CHECK(has("poisson_q2"));
  CHECK(has("ito_isometry_scalar"));
  CHECK(scenarios.size() >= 19);
  CHECK_THROWS_AS(bundled_scenario("no_such_scenario"), ConfigError);
}
