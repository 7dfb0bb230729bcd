#include "lvbif/lvbif.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "core/bifurcation_points.hpp"
#include "core/branch_continuation.hpp"
#include "core/errors.hpp"
#include "core/limit_profile.hpp"
#include "core/linearization.hpp"
#include "core/reporting.hpp"

struct lvb_params {
  lvbif::Params p;
};
struct lvb_spectrum {
  lvbif::RadialGrid grid;
  std::vector<lvbif::EigenPair> pairs;
};
struct lvb_points {
  lvbif::Params p;
  int grid_n = 0;
  int dim = 0;
  std::vector<lvbif::BifurcationPoint> points;
};
struct lvb_branch {
  lvbif::Branch branch;
};
struct lvb_limit {
  lvbif::Params p;
  lvbif::RadialGrid grid;
  lvbif::LimitProfile profile;
};

namespace {

thread_local std::string g_last_error;

lvb_status fail(lvb_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs body, translating exceptions into status codes and the thread-local message.
template <class F>
lvb_status guarded(F&& body) {
  try {
    body();
    return LVB_OK;
  } catch (const lvbif::ValidationError& e) {
    return fail(LVB_ERR_VALIDATION, e.what());
  } catch (const lvbif::DomainError& e) {
    return fail(LVB_ERR_DOMAIN, e.what());
  } catch (const lvbif::SolverError& e) {
    return fail(LVB_ERR_SOLVER, e.what());
  } catch (const lvbif::IoError& e) {
    return fail(LVB_ERR_IO, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(LVB_ERR_VALIDATION, std::string("configuration: ") + e.what());
  } catch (const std::bad_alloc&) {
    return fail(LVB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LVB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(LVB_ERR_INTERNAL, "unknown exception");
  }
}

#define LVB_REQUIRE(ptr) \
  if (!(ptr)) return fail(LVB_ERR_NULL, "argument '" #ptr "' is NULL")

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

lvbif::RunConfig resolve(const char* config_json) {
  if (!config_json || !*config_json) return lvbif::parse_run_config(nlohmann::json::object());
  return lvbif::parse_run_config(nlohmann::json::parse(config_json));
}

}  // namespace

extern "C" {

const char* lvb_last_error(void) { return g_last_error.c_str(); }

const char* lvb_status_name(lvb_status s) {
  switch (s) {
    case LVB_OK: return "ok";
    case LVB_ERR_VALIDATION: return "validation error";
    case LVB_ERR_DOMAIN: return "domain error";
    case LVB_ERR_SOLVER: return "solver failure";
    case LVB_ERR_IO: return "i/o error";
    case LVB_ERR_INTERNAL: return "internal error";
    case LVB_ERR_NULL: return "null argument";
    case LVB_ERR_RANGE: return "out of range";
  }
  return "unknown status";
}

lvb_status lvb_params_create(double mu, double sigma, double alpha, double gamma, int dim, lvb_params** out) {
  LVB_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new lvb_params{lvbif::validate_params(mu, sigma, alpha, gamma, dim)}; });
}

void lvb_params_destroy(lvb_params* p) { delete p; }

lvb_status lvb_constant_state(const lvb_params* p, double beta, double* a, double* b) {
  LVB_REQUIRE(p);
  LVB_REQUIRE(a);
  LVB_REQUIRE(b);
  return guarded([&] {
    const auto c = lvbif::constant_state(p->p, beta);
    *a = c.a;
    *b = c.b;
  });
}

lvb_status lvb_linearize(const lvb_params* p, double beta, lvb_linearization* out) {
  LVB_REQUIRE(p);
  LVB_REQUIRE(out);
  return guarded([&] {
    const auto s = lvbif::spectral_split(p->p, beta);
    *out = lvb_linearization{s.beta, s.a, s.b, s.delta1, s.delta2, s.m,
                             {s.Q.a11, s.Q.a12, s.Q.a21, s.Q.a22}, {s.P.a11, s.P.a12, s.P.a21, s.P.a22}};
  });
}

lvb_status lvb_spectrum_compute(int dim, int n, int k, lvb_spectrum** out) {
  LVB_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto* s = new lvb_spectrum;
    try {
      s->grid = lvbif::build_grid(dim, n);
      s->pairs = lvbif::eigenpairs(lvbif::assemble_neumann_laplacian(s->grid), s->grid, k);
    } catch (...) {
      delete s;
      throw;
    }
    *out = s;
  });
}

void lvb_spectrum_destroy(lvb_spectrum* s) { delete s; }

int lvb_spectrum_mode_count(const lvb_spectrum* s) { return s ? static_cast<int>(s->pairs.size()) : 0; }
int lvb_spectrum_grid_size(const lvb_spectrum* s) { return s ? s->grid.n : 0; }

lvb_status lvb_spectrum_eigenvalue(const lvb_spectrum* s, int j, double* lambda) {
  LVB_REQUIRE(s);
  LVB_REQUIRE(lambda);
  if (j < 0 || j >= static_cast<int>(s->pairs.size())) return fail(LVB_ERR_RANGE, "mode index out of range");
  *lambda = s->pairs[j].lambda;
  return LVB_OK;
}

lvb_status lvb_spectrum_eigenfunction(const lvb_spectrum* s, int j, double* buf, size_t len) {
  LVB_REQUIRE(s);
  LVB_REQUIRE(buf);
  if (j < 0 || j >= static_cast<int>(s->pairs.size())) return fail(LVB_ERR_RANGE, "mode index out of range");
  if (len < static_cast<size_t>(s->grid.n)) return fail(LVB_ERR_RANGE, "buffer shorter than the grid");
  std::copy(s->pairs[j].f.begin(), s->pairs[j].f.end(), buf);
  return LVB_OK;
}

lvb_status lvb_spectrum_nodes(const lvb_spectrum* s, double* r, size_t len) {
  LVB_REQUIRE(s);
  LVB_REQUIRE(r);
  if (len < static_cast<size_t>(s->grid.n)) return fail(LVB_ERR_RANGE, "buffer shorter than the grid");
  std::copy(s->grid.r.begin(), s->grid.r.end(), r);
  return LVB_OK;
}

lvb_status lvb_bessel_oracle(int dim, int j, double* lambda) {
  LVB_REQUIRE(lambda);
  return guarded([&] { *lambda = lvbif::bessel_oracle(dim, j); });
}

lvb_status lvb_points_compute(const lvb_params* p, const lvb_spectrum* s, lvb_points** out) {
  LVB_REQUIRE(p);
  LVB_REQUIRE(s);
  LVB_REQUIRE(out);
  *out = nullptr;
  if (p->p.dim != s->grid.dim) return fail(LVB_ERR_VALIDATION, "spectrum dimension differs from params dimension");
  return guarded([&] {
    auto pts = lvbif::bifurcation_points(p->p, s->pairs);
    *out = new lvb_points{p->p, s->grid.n, s->grid.dim, std::move(pts)};
  });
}

void lvb_points_destroy(lvb_points* pts) { delete pts; }

int lvb_points_count(const lvb_points* pts) { return pts ? static_cast<int>(pts->points.size()) : 0; }

lvb_status lvb_points_get(const lvb_points* pts, int index, lvb_point_info* out) {
  LVB_REQUIRE(pts);
  LVB_REQUIRE(out);
  if (index < 0 || index >= static_cast<int>(pts->points.size())) return fail(LVB_ERR_RANGE, "point index out of range");
  const auto& bp = pts->points[index];
  const auto& d = bp.diagnostics;
  *out = lvb_point_info{bp.j,          bp.lambda_j,     bp.beta_j,        bp.m_j,        bp.a, bp.b,
                        d.step2_value, d.pairing_value, d.nondeg_value, d.index_left, d.index_right};
  return LVB_OK;
}

lvb_status lvb_branch_continue(const lvb_params* p, const lvb_spectrum* s, const lvb_points* pts, int j,
                               int direction, const lvb_branch_options* opts, lvb_branch** out) {
  LVB_REQUIRE(p);
  LVB_REQUIRE(s);
  LVB_REQUIRE(pts);
  LVB_REQUIRE(out);
  *out = nullptr;
  if (j < 1 || j > static_cast<int>(pts->points.size())) return fail(LVB_ERR_RANGE, "branch index out of range");
  if (direction != 1 && direction != -1) return fail(LVB_ERR_VALIDATION, "direction must be +1 or -1");
  if (pts->grid_n != s->grid.n || pts->dim != s->grid.dim)
    return fail(LVB_ERR_VALIDATION, "points were computed on a different grid");
  return guarded([&] {
    lvbif::BranchConfig bc;
    if (opts) {
      if (opts->beta_max < 0 || opts->max_points < 0 || opts->amplitude < 0)
        throw lvbif::ValidationError("branch options must be nonnegative");
      if (opts->beta_max > 0) bc.beta_max = opts->beta_max;
      if (opts->max_points > 0) bc.max_points = opts->max_points;
      if (opts->amplitude > 0) bc.amplitude = opts->amplitude;
    }
    const lvbif::EllipticProblem prob(p->p, s->grid);
    *out = new lvb_branch{lvbif::continue_branch(prob, pts->points[j - 1], direction, bc)};
  });
}

void lvb_branch_destroy(lvb_branch* b) { delete b; }

int lvb_branch_size(const lvb_branch* b) { return b ? static_cast<int>(b->branch.points.size()) : 0; }

const char* lvb_branch_termination(const lvb_branch* b) {
  static thread_local std::string name;
  if (!b) return "";
  name = lvbif::to_string(b->branch.termination);
  return name.c_str();
}

lvb_status lvb_branch_point_get(const lvb_branch* b, int index, lvb_branch_point* out) {
  LVB_REQUIRE(b);
  LVB_REQUIRE(out);
  if (index < 0 || index >= lvb_branch_size(b)) return fail(LVB_ERR_RANGE, "branch point index out of range");
  const auto& bp = b->branch.points[index];
  *out = lvb_branch_point{bp.s,      bp.state.beta, bp.residual, bp.sup_u1,        bp.sup_u2,
                          bp.min_u1, bp.min_u2,     bp.h1_u1,    bp.h1_u2,         bp.overlap,
                          bp.nodal.count,           bp.nodal.simple ? 1 : 0};
  return LVB_OK;
}

lvb_status lvb_branch_state(const lvb_branch* b, int index, double* u1, double* u2, size_t len) {
  LVB_REQUIRE(b);
  LVB_REQUIRE(u1);
  LVB_REQUIRE(u2);
  if (index < 0 || index >= lvb_branch_size(b)) return fail(LVB_ERR_RANGE, "branch point index out of range");
  const auto& st = b->branch.points[index].state;
  if (len < st.u1.size()) return fail(LVB_ERR_RANGE, "buffer shorter than the grid");
  std::copy(st.u1.begin(), st.u1.end(), u1);
  std::copy(st.u2.begin(), st.u2.end(), u2);
  return LVB_OK;
}

lvb_status lvb_limit_solve(const lvb_params* p, const lvb_spectrum* s, int j, int orientation, lvb_limit** out) {
  LVB_REQUIRE(p);
  LVB_REQUIRE(s);
  LVB_REQUIRE(out);
  *out = nullptr;
  if (j < 1 || j >= static_cast<int>(s->pairs.size())) return fail(LVB_ERR_RANGE, "mode index out of range");
  return guarded([&] {
    auto lp = lvbif::solve_limit_equation(p->p, s->grid, s->pairs[j], orientation);
    *out = new lvb_limit{p->p, s->grid, std::move(lp)};
  });
}

int lvb_branch_orientation(const lvb_points* pts, int j, int direction) {
  if (!pts || j < 1 || j > static_cast<int>(pts->points.size()) || (direction != 1 && direction != -1)) return 0;
  return lvbif::branch_orientation(pts->points[j - 1], pts->p, direction);
}

void lvb_limit_destroy(lvb_limit* l) { delete l; }

lvb_status lvb_limit_profile(const lvb_limit* l, double* w, size_t len) {
  LVB_REQUIRE(l);
  LVB_REQUIRE(w);
  if (len < l->profile.w.size()) return fail(LVB_ERR_RANGE, "buffer shorter than the grid");
  std::copy(l->profile.w.begin(), l->profile.w.end(), w);
  return LVB_OK;
}

int lvb_limit_root_count(const lvb_limit* l) { return l ? static_cast<int>(l->profile.roots.size()) : 0; }

lvb_status lvb_limit_distance(const lvb_limit* l, const lvb_branch* b, int index, double* dist) {
  LVB_REQUIRE(l);
  LVB_REQUIRE(b);
  LVB_REQUIRE(dist);
  if (index < 0 || index >= lvb_branch_size(b)) return fail(LVB_ERR_RANGE, "branch point index out of range");
  return guarded([&] { *dist = lvbif::segregation_distance(l->p, l->grid, b->branch.points[index], l->profile); });
}

lvb_status lvb_run_command(const char* command, const char* config_json, char** summary, int* exit_code) {
  LVB_REQUIRE(command);
  LVB_REQUIRE(summary);
  LVB_REQUIRE(exit_code);
  *summary = nullptr;
  return guarded([&] {
    const auto res = lvbif::run_command(command, resolve(config_json));
    *exit_code = res.exit_code;
    *summary = dup_string(res.summary.dump(2));
  });
}

lvb_status lvb_resolve_config(const char* config_json, char** resolved) {
  LVB_REQUIRE(resolved);
  *resolved = nullptr;
  return guarded([&] { *resolved = dup_string(lvbif::config_json(resolve(config_json)).dump(2)); });
}

void lvb_string_free(char* s) { std::free(s); }

}  // extern "C"
