#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>

#include "npi/sweep.hpp"

namespace {

namespace fs = std::filesystem;

npi::GridSpec load_grid(const char* name) {
  const fs::path path = fs::path(NPI_PRESETS_DIR) / name;
  return npi::grid_from_config(npi::ConfigMap::parse_file(path), path);
}

}  // namespace

TEST_CASE("epsilon sweep: certified cells match the 2/17 threshold and converge") {
  const auto grid = load_grid("sweep_eps_fig2.cfg");
  REQUIRE(grid.epsilons.size() == 6);
  const auto rows = npi::run_sweep(grid);
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    CHECK(r.index == static_cast<int>(i));
    CHECK(r.epsilon == grid.epsilons[i]);  // deterministic grid order
    const bool below_threshold = r.epsilon < 2.0 / 17.0;
    CHECK(r.certified == below_threshold);
    if (r.certified) {
      CHECK(r.error.empty());
      CHECK(r.verdict == "converged");  // soundness: certified => converged
      CHECK(r.tail_max < 1e-2);
    }
  }
}

TEST_CASE("lambda sweep at a fast parasitic constant: certified iff lambda clears width/4") {
  const auto grid = load_grid("sweep_lambda_sector.cfg");
  const auto rows = npi::run_sweep(grid);
  REQUIRE(rows.size() == 5);
  for (const auto& r : rows) {
    const bool expect = r.lambda > 0.75;  // small-epsilon limit: RHS -> 4*lambda vs width 3
    CHECK(r.certified == expect);
    if (r.certified) {
      CHECK(r.verdict == "converged");
      CHECK(r.error.empty());
    }
  }
}

TEST_CASE("worker count does not change the assembled table") {
  auto grid = load_grid("sweep_lambda_sector.cfg");
  grid.simulate_cells = false;  // certificate-only cells keep this quick
  grid.workers = 1;
  const auto serial = npi::run_sweep(grid);
  grid.workers = 4;
  const auto parallel = npi::run_sweep(grid);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].epsilon == parallel[i].epsilon);
    CHECK(serial[i].lambda == parallel[i].lambda);
    CHECK(serial[i].certified == parallel[i].certified);
    CHECK(serial[i].cond_ii_slack == parallel[i].cond_ii_slack);
  }
}

TEST_CASE("random grids are seeded and reproducible") {
  auto grid = load_grid("sweep_eps_fig2.cfg");
  grid.random = true;
  grid.count = 12;
  grid.seed = 99;
  grid.simulate_cells = false;
  const auto a = npi::run_sweep(grid);
  const auto b = npi::run_sweep(grid);
  REQUIRE(a.size() == 12);
  double lo = HUGE_VAL, hi = -HUGE_VAL;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].epsilon == b[i].epsilon);
    lo = std::min(lo, a[i].epsilon);
    hi = std::max(hi, a[i].epsilon);
  }
  CHECK(lo >= 0.05);
  CHECK(hi <= 0.3);
  grid.seed = 100;
  const auto c = npi::run_sweep(grid);
  bool any_differ = false;
  for (std::size_t i = 0; i < a.size(); ++i) any_differ |= a[i].epsilon != c[i].epsilon;
  CHECK(any_differ);
}

TEST_CASE("empty random grid yields an empty table") {
  auto grid = load_grid("sweep_eps_fig2.cfg");
  grid.random = true;
  grid.count = 0;
  const auto rows = npi::run_sweep(grid);
  CHECK(rows.empty());
  std::ostringstream out;
  npi::write_sweep_csv(out, rows);
  CHECK(out.str() ==
        "index,epsilon,lambda,gain,cond_i,cond_ii,cond_ii_slack,cond_iii,certified,"
        "c_selected,verdict,tail_max,sup_abs_y,error\n");
}

TEST_CASE("per-cell failures land in the row without aborting") {
  auto grid = load_grid("sweep_eps_fig2.cfg");
  grid.epsilons = {0.1, -0.5};  // second cell is an invalid plant
  const auto rows = npi::run_sweep(grid);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].error.empty());
  CHECK_FALSE(rows[1].error.empty());
}

TEST_CASE("cell cap guards runaway grids") {
  auto grid = load_grid("sweep_eps_fig2.cfg");
  grid.max_cells = 3;
  CHECK_THROWS_AS(npi::run_sweep(grid), std::invalid_argument);
}

TEST_CASE("sweep CSV escapes error text") {
  npi::SweepCell cell;
  cell.index = 0;
  cell.gain_id = "z_cos_z";
  cell.error = "bad, \"thing\"";
  std::ostringstream out;
  npi::write_sweep_csv(out, {cell});
  CHECK(out.str().find("\"bad, \"\"thing\"\"\"") != std::string::npos);
}
