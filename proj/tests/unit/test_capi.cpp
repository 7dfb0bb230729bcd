#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "lvbif/lvbif.h"

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LVBIF_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

}  // namespace

TEST_CASE("parameter validation through the C interface") {
  lvb_params* p = nullptr;
  CHECK(lvb_params_create(16, 16, 0.5, 1, 2, &p) == LVB_ERR_VALIDATION);
  CHECK(p == nullptr);
  CHECK(std::string(lvb_last_error()).find("alpha > gamma") != std::string::npos);
  CHECK(lvb_params_create(16, 16, 2, 1, 2, nullptr) == LVB_ERR_NULL);
  REQUIRE(lvb_params_create(1, 1, 2, 1, 2, &p) == LVB_OK);
  double a = 0, b = 0;
  CHECK(lvb_constant_state(p, 2.0, &a, &b) == LVB_OK);
  CHECK(a == doctest::Approx(3.0 / 7.0));
  CHECK(b == doctest::Approx(1.0 / 7.0));
  CHECK(lvb_constant_state(p, 0.5, &a, &b) == LVB_ERR_DOMAIN);
  lvb_linearization lin;
  CHECK(lvb_linearize(p, 2.0, &lin) == LVB_OK);
  CHECK(lin.m == doctest::Approx(-2.0));
  CHECK(lin.delta2 == doctest::Approx(1.0));
  lvb_params_destroy(p);
  CHECK(std::string(lvb_status_name(LVB_ERR_SOLVER)) == "solver failure");
}

TEST_CASE("spectrum, points, branch and limit handles") {
  lvb_params* p = nullptr;
  lvb_spectrum* s = nullptr;
  lvb_points* pts = nullptr;
  REQUIRE(lvb_params_create(16, 16, 2, 1, 2, &p) == LVB_OK);
  REQUIRE(lvb_spectrum_compute(2, 128, 3, &s) == LVB_OK);
  CHECK(lvb_spectrum_mode_count(s) == 4);
  CHECK(lvb_spectrum_grid_size(s) == 128);
  double l1 = 0, oracle = 0;
  CHECK(lvb_spectrum_eigenvalue(s, 1, &l1) == LVB_OK);
  CHECK(lvb_bessel_oracle(2, 1, &oracle) == LVB_OK);
  CHECK(std::abs(l1 - oracle) / oracle < 1e-3);
  CHECK(lvb_spectrum_eigenvalue(s, 9, &l1) == LVB_ERR_RANGE);
  std::vector<double> f(128), r(128);
  CHECK(lvb_spectrum_eigenfunction(s, 1, f.data(), f.size()) == LVB_OK);
  CHECK(lvb_spectrum_eigenfunction(s, 1, f.data(), 10) == LVB_ERR_RANGE);
  CHECK(lvb_spectrum_nodes(s, r.data(), r.size()) == LVB_OK);
  CHECK(r.back() == doctest::Approx(1.0));

  REQUIRE(lvb_points_compute(p, s, &pts) == LVB_OK);
  REQUIRE(lvb_points_count(pts) == 1);
  lvb_point_info info;
  CHECK(lvb_points_get(pts, 0, &info) == LVB_OK);
  CHECK(info.index_left == -1);
  CHECK(info.index_right == 1);
  CHECK(info.m_j == doctest::Approx(-2.0));
  CHECK(lvb_points_get(pts, 1, &info) == LVB_ERR_RANGE);

  lvb_branch* br = nullptr;
  const lvb_branch_options opts{10 * info.beta_j, 0, 0};
  CHECK(lvb_branch_continue(p, s, pts, 1, 2, &opts, &br) == LVB_ERR_VALIDATION);
  REQUIRE(lvb_branch_continue(p, s, pts, 1, -1, &opts, &br) == LVB_OK);
  CHECK(std::string(lvb_branch_termination(br)) == "beta ceiling");
  const int n = lvb_branch_size(br);
  REQUIRE(n > 2);
  lvb_branch_point bp;
  CHECK(lvb_branch_point_get(br, n - 1, &bp) == LVB_OK);
  CHECK(bp.beta >= 10 * info.beta_j);
  CHECK(bp.nodal_count == 1);
  std::vector<double> u1(128), u2(128);
  CHECK(lvb_branch_state(br, n - 1, u1.data(), u2.data(), 128) == LVB_OK);
  CHECK(u1[0] > 0);

  lvb_limit* lim = nullptr;
  const int orient = lvb_branch_orientation(pts, 1, -1);
  CHECK(orient == 1);
  REQUIRE(lvb_limit_solve(p, s, 1, orient, &lim) == LVB_OK);
  CHECK(lvb_limit_root_count(lim) == 1);
  double d_first = 0, d_last = 0;
  CHECK(lvb_limit_distance(lim, br, 1, &d_first) == LVB_OK);
  CHECK(lvb_limit_distance(lim, br, n - 1, &d_last) == LVB_OK);
  CHECK(d_last < d_first);
  std::vector<double> w(128);
  CHECK(lvb_limit_profile(lim, w.data(), w.size()) == LVB_OK);
  CHECK(w[0] > 0);

  lvb_limit_destroy(lim);
  lvb_branch_destroy(br);
  lvb_points_destroy(pts);
  lvb_spectrum_destroy(s);
  lvb_params_destroy(p);
}

TEST_CASE("commands through the C interface") {
  const std::string out = (std::filesystem::temp_directory_path() / "lvbif_capi_cmd").string();
  std::filesystem::remove_all(out);
  char* summary = nullptr;
  int code = -1;
  const std::string cfg = "{\"grid\": 64, \"out\": \"" + out + "\"}";
  REQUIRE(lvb_run_command("points", cfg.c_str(), &summary, &code) == LVB_OK);
  CHECK(code == 0);
  CHECK(std::string(summary).find("\"k\": 1") != std::string::npos);
  lvb_string_free(summary);
  CHECK(lvb_run_command("points", "{\"grid\": 3}", &summary, &code) == LVB_ERR_VALIDATION);
  CHECK(lvb_run_command("points", "{not json", &summary, &code) == LVB_ERR_VALIDATION);
  CHECK(lvb_run_command("nope", nullptr, &summary, &code) == LVB_ERR_VALIDATION);
  char* resolved = nullptr;
  REQUIRE(lvb_resolve_config(nullptr, &resolved) == LVB_OK);
  CHECK(std::string(resolved).find("\"grid\": 512") != std::string::npos);
  lvb_string_free(resolved);
  std::filesystem::remove_all(out);
}

TEST_CASE("command-line exit codes") {
  const std::string out = (std::filesystem::temp_directory_path() / "lvbif_cli_codes").string();
  std::filesystem::remove_all(out);
  CHECK(run_cli("points --grid 64 --out " + out) == 0);
  CHECK(run_cli("points --alpha 0.5 --out " + out) == 2);
  CHECK(run_cli("limit --grid 64 --out " + out) == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("verify --draws 5 --out " + out) == 0);
  std::filesystem::remove_all(out);
}
