#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "npi/config.hpp"
#include "npi/csv.hpp"
#include "npi/manifest.hpp"
#include "npi/run.hpp"
#include "npi/svg.hpp"

namespace {

const char* kMinimal = R"(
# comment line
id = demo
plant.kind = perturbed
plant.f = sin2:3
plant.b = 1
plant.epsilon = 0.1
controller.kind = nonlinear_pi
controller.lambda = 2.5     # trailing comment
controller.gain = z2_sin_z
init.x0 = 4
init.y0 = 4
sim.t_end = 2
sim.dt = 1e-3
)";

}  // namespace

TEST_CASE("config parsing, getters and strictness") {
  const auto cfg = npi::ConfigMap::parse(kMinimal);
  CHECK(cfg.get_string("id") == "demo");
  CHECK(cfg.get_double("plant.epsilon") == 0.1);
  CHECK(cfg.get_double("missing.key", 7.5) == 7.5);
  CHECK(cfg.get_bool("missing.flag", true));
  CHECK_THROWS_AS(cfg.get_string("missing.key2"), std::invalid_argument);

  CHECK_THROWS_AS(npi::ConfigMap::parse("a = 1\na = 2\n"), std::invalid_argument);
  CHECK_THROWS_AS(npi::ConfigMap::parse("just a line\n"), std::invalid_argument);
  CHECK_THROWS_AS(npi::ConfigMap::parse("k = \n"), std::invalid_argument);
  const auto bad = npi::ConfigMap::parse("k = abc\n");
  CHECK_THROWS_AS(bad.get_double("k"), std::invalid_argument);
}

TEST_CASE("scenario assembly and unknown-key detection") {
  const auto s = npi::scenario_from_config(npi::ConfigMap::parse(kMinimal));
  CHECK(s.id == "demo");
  CHECK(s.plant.kind == npi::PlantKind::perturbed);
  CHECK(s.plant.f.alpha2 == 6.0);
  CHECK(s.controller.gain.id == "z2_sin_z");
  CHECK(s.t_end == 2.0);

  const std::string with_typo = std::string(kMinimal) + "sim.dtt = 1\n";
  CHECK_THROWS_WITH(npi::scenario_from_config(npi::ConfigMap::parse(with_typo)),
                    Catch::Matchers::ContainsSubstring("sim.dtt"));
}

TEST_CASE("config hash is canonical") {
  const auto a = npi::ConfigMap::parse("x = 1\ny = 2\n");
  const auto b = npi::ConfigMap::parse("# reordered, commented\ny = 2\nx = 1\n");
  const auto c = npi::ConfigMap::parse("x = 1\ny = 3\n");
  CHECK(a.hash() == b.hash());
  CHECK(a.hash() != c.hash());
  CHECK(a.hash().size() == 16);
}

TEST_CASE("shipped presets parse and validate") {
  namespace fs = std::filesystem;
  const fs::path dir = NPI_PRESETS_DIR;
  int count = 0;
  for (const char* name :
       {"fig1_pint_ng", "fig1_pint_npi", "fig1_pint_npin", "fig1_pls_ng", "fig1_pls_npi",
        "fig1_pls_npin", "fig2_sector"}) {
    const auto cfg = npi::ConfigMap::parse_file(dir / (std::string(name) + ".cfg"));
    const auto s = npi::scenario_from_config(cfg);
    CHECK(s.id == name);
    ++count;
  }
  CHECK(count == 7);
}

TEST_CASE("trajectory CSV format") {
  npi::Trajectory tr;
  tr.t = {0.0, 0.1};
  tr.x = {4.0, 3.9};
  tr.y = {4.0, 0.5};
  tr.zw = {8.0, 7.5};
  tr.u = {1.0, -2.0};
  tr.q = {0.0, 0.25};
  std::ostringstream out;
  npi::write_trajectory_csv(out, tr);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,x,y,z_or_zeta,u,q");
  std::string row;
  std::getline(in, row);
  CHECK(row == "0,4,4,8,1,0");
  std::getline(in, row);
  CHECK(row.rfind("0.10000000000000001,", 0) == 0);  // 17 significant digits

  tr.S = {1.0, 0.5};
  std::ostringstream out2;
  npi::write_trajectory_csv(out2, tr);
  CHECK(out2.str().rfind("t,x,y,z_or_zeta,u,S,q\n", 0) == 0);

  CHECK(npi::format_g17(0.1) == "0.10000000000000001");
  CHECK(npi::format_g17(1e6) == "1000000");
}

TEST_CASE("repeat runs render byte-identical CSV") {
  npi::Scenario s;
  s.id = "repeat";
  s.plant.kind = npi::PlantKind::perturbed;
  s.plant.f = npi::nonlinearity_sin2(3.0);
  s.plant.b = 1.0;
  s.plant.epsilon = 0.1;
  s.controller.kind = npi::ControllerKind::nonlinear_pi;
  s.controller.lambda = 2.5;
  s.controller.gain = npi::parse_gain("z2_sin_z");
  s.x0 = 4.0;
  s.y0 = 4.0;
  s.t_end = 2.0;
  s.dt = 1e-3;
  std::ostringstream a, b;
  npi::write_trajectory_csv(a, npi::simulate(s));
  npi::write_trajectory_csv(b, npi::simulate(s));
  CHECK(a.str() == b.str());
  CHECK(a.str().size() > 1000);
}

TEST_CASE("SVG emitter writes standalone line charts") {
  npi::SvgSeries sine{"sine", {}, {}};
  for (int i = 0; i <= 500; ++i) {
    const double t = i * 0.02;
    sine.x.push_back(t);
    sine.y.push_back(std::sin(t));
  }
  npi::SvgChartOptions opt;
  opt.title = "demo";
  opt.y_range = {{-0.5, 0.5}};  // clipping breaks the polyline into segments
  std::ostringstream out;
  npi::write_line_chart(out, {sine}, opt);
  const std::string svg = out.str();
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("sine") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(std::count(svg.begin(), svg.end(), '\n') > 10);
}

TEST_CASE("manifest serializes certificate and outcome") {
  npi::RunManifest m;
  m.scenario_id = "demo";
  m.config_hash = "0123456789abcdef";
  m.csv_path = "out/demo.csv";
  npi::Outcome o;
  o.verdict = npi::Verdict::converged;
  o.sup_abs_y = 4.5;
  o.tail_max = 1e-6;
  m.outcome = o;
  std::ostringstream out;
  npi::write_manifest(out, m);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j["scenario"] == "demo");
  CHECK(j["config_hash"] == "0123456789abcdef");
  CHECK(j["outcome"]["verdict"] == "converged");
  CHECK(j["certificate"] == "not_applicable");
  CHECK(j["svg"].is_null());
}
