#include "core/reporting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include "core/appendix_verifier.hpp"
#include "core/bifurcation_points.hpp"
#include "core/branch_continuation.hpp"
#include "core/errors.hpp"
#include "core/limit_profile.hpp"
#include "core/radial_spectrum.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace lvbif {

namespace {

constexpr const char* kSchema = "lvbif/1";

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// NaN and infinities are not representable in JSON; they become null.
json jnum(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

class CsvWriter {
public:
  CsvWriter(const fs::path& path, const std::string& kind, const Params& p) : path_(path) {
    out_ << "# schema " << kSchema << " " << kind << "\n";
    out_ << "# params " << params_json(p).dump() << "\n";
  }
  void comment(const std::string& c) { out_ << "# " << c << "\n"; }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }
  void close() {
    std::ofstream f(path_, std::ios::binary);
    if (!f) throw IoError("cannot write " + path_.string());
    f << out_.str();
    if (!f) throw IoError("write failed for " + path_.string());
  }

private:
  fs::path path_;
  std::ostringstream out_;
};

void write_json(const fs::path& path, json j) {
  j["schema"] = kSchema;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path.string());
  f << j.dump(2) << "\n";
  if (!f) throw IoError("write failed for " + path.string());
}

fs::path prepare_out(const RunConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  if (ec || !fs::is_directory(cfg.out)) throw IoError("output directory not writable: " + cfg.out);
  return fs::path(cfg.out);
}

int worker_count(const RunConfig& cfg) {
  if (cfg.workers > 0) return cfg.workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Eigenpairs covering at least `want` modes and an eigenvalue at or above √(μσ).
std::vector<EigenPair> covering_spectrum(const Params& p, const RadialGrid& g, int want) {
  const DiscreteOperator op = assemble_neumann_laplacian(g);
  int k = std::max(want, 2);
  for (;;) {
    auto e = eigenpairs(op, g, k);
    if (e.back().lambda >= std::sqrt(p.mu * p.sigma) || k >= g.n - 1) return e;
    k *= 2;
    k = std::min(k, g.n - 1);
  }
}

json point_json(const BifurcationPoint& bp) {
  const auto& d = bp.diagnostics;
  return json{{"j", bp.j},
              {"lambda_j", bp.lambda_j},
              {"beta_j", bp.beta_j},
              {"m_j", bp.m_j},
              {"a", bp.a},
              {"b", bp.b},
              {"step2_value", d.step2_value},
              {"pairing_value", d.pairing_value},
              {"nondeg_value", d.nondeg_value},
              {"nondeg_near_zero", d.nondeg_near_zero},
              {"index_left", d.index_left},
              {"index_right", d.index_right},
              {"index_eps", d.index_eps}};
}

std::string branch_stem(int j, int direction) {
  return "branch_j" + std::to_string(j) + (direction > 0 ? "_plus" : "_minus");
}

CommandResult cmd_eigen(const RunConfig& cfg) {
  const fs::path dir = prepare_out(cfg);
  const Params& p = cfg.params;
  const RadialGrid g = build_grid(p.dim, cfg.grid);
  const auto e = eigenpairs(assemble_neumann_laplacian(g), g, cfg.modes);
  const auto ex = extrapolated_eigenvalues(p.dim, cfg.grid, cfg.modes);

  CsvWriter pairs(dir / "eigenpairs.csv", "eigenpairs", p);
  pairs.comment("grid " + json{{"dim", p.dim}, {"n", g.n}}.dump());
  std::vector<std::string> head{"j", "lambda"};
  for (int i = 0; i < g.n; ++i) head.push_back("f" + std::to_string(i));
  pairs.row(head);
  for (const auto& ep : e) {
    std::vector<std::string> row{std::to_string(ep.j), num(ep.lambda)};
    for (double v : ep.f) row.push_back(num(v));
    pairs.row(row);
  }
  pairs.close();

  CsvWriter table(dir / "eigen_oracle.csv", "eigen-oracle", p);
  table.comment("grid " + json{{"dim", p.dim}, {"n", g.n}}.dump());
  table.comment("lambda_extrapolated combines grids n and 2n assuming an h^2 leading error");
  table.row({"j", "lambda_grid", "lambda_extrapolated", "oracle", "delta_grid", "delta_extrapolated"});
  json rows = json::array();
  double worst = 0.0;
  for (int j = 0; j <= cfg.modes; ++j) {
    const double o = bessel_oracle(p.dim, j);
    const double dg = e[j].lambda - o, de = ex[j] - o;
    worst = std::max(worst, std::abs(de));
    table.row({std::to_string(j), num(e[j].lambda), num(ex[j]), num(o), num(dg), num(de)});
    rows.push_back({{"j", j}, {"lambda_grid", e[j].lambda}, {"lambda_extrapolated", ex[j]}, {"oracle", o}});
  }
  table.close();
  return {json{{"command", "eigen"}, {"rows", rows}, {"max_abs_delta_extrapolated", worst}, {"grid", g.n}}, 0};
}

CommandResult cmd_points(const RunConfig& cfg) {
  const fs::path dir = prepare_out(cfg);
  const Params& p = cfg.params;
  const RadialGrid g = build_grid(p.dim, cfg.grid);
  const auto e = covering_spectrum(p, g, cfg.modes);
  const auto pts = bifurcation_points(p, e);
  CsvWriter t(dir / "bifurcation_points.csv", "bifurcation-points", p);
  t.comment("grid " + json{{"dim", p.dim}, {"n", g.n}}.dump());
  if (pts.empty()) t.comment("note: sqrt(mu*sigma) <= lambda_1, so there are no bifurcation points");
  t.row({"j", "lambda_j", "beta_j", "m_j", "step2_value", "pairing_value", "nondeg_value", "index_left",
         "index_right"});
  json arr = json::array();
  for (const auto& bp : pts) {
    const auto& d = bp.diagnostics;
    t.row({std::to_string(bp.j), num(bp.lambda_j), num(bp.beta_j), num(bp.m_j), num(d.step2_value),
           num(d.pairing_value), num(d.nondeg_value), std::to_string(d.index_left), std::to_string(d.index_right)});
    arr.push_back(point_json(bp));
  }
  t.close();
  json s{{"command", "points"}, {"k", pts.size()}, {"points", arr}, {"sqrt_mu_sigma", std::sqrt(p.mu * p.sigma)}};
  write_json(dir / "bifurcation_points.json", json{{"params", params_json(p)}, {"k", pts.size()}, {"points", arr}});
  return {s, 0};
}

void write_branch(const fs::path& dir, const Params& p, const Branch& br) {
  const std::string stem = branch_stem(br.j, br.direction);
  CsvWriter sum(dir / (stem + ".csv"), "branch-summary", p);
  sum.comment("termination " + to_string(br.termination));
  sum.row({"s", "beta", "sup_u1", "sup_u2", "min_u1", "min_u2", "nodal", "simple", "overlap", "h1_u1", "h1_u2",
           "residual"});
  for (const auto& bp : br.points)
    sum.row({num(bp.s), num(bp.state.beta), num(bp.sup_u1), num(bp.sup_u2), num(bp.min_u1), num(bp.min_u2),
             std::to_string(bp.nodal.count), bp.nodal.simple ? "1" : "0", num(bp.overlap), num(bp.h1_u1),
             num(bp.h1_u2), num(bp.residual)});
  sum.close();

  CsvWriter st(dir / (stem + "_states.csv"), "branch-states", p);
  const std::size_t n = br.points.empty() ? 0 : br.points.front().state.u1.size();
  std::vector<std::string> head{"s", "beta"};
  for (std::size_t i = 0; i < n; ++i) head.push_back("u1_" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) head.push_back("u2_" + std::to_string(i));
  st.row(head);
  for (const auto& bp : br.points) {
    std::vector<std::string> row{num(bp.s), num(bp.state.beta)};
    for (double v : bp.state.u1) row.push_back(num(v));
    for (double v : bp.state.u2) row.push_back(num(v));
    st.row(row);
  }
  st.close();
}

json branch_json(const Branch& br, const RadialGrid& g, const Params& p) {
  bool positive = true, nodal_const = true, h1_ok = true;
  double max_res = 0.0, beta_hi = 0.0;
  for (const auto& bp : br.points) {
    positive = positive && bp.strictly_inside();
    nodal_const = nodal_const && bp.nodal.count == br.j && bp.nodal.simple;
    h1_ok = h1_ok && bp.h1_u1 * bp.h1_u1 < p.mu * g.ball_measure && bp.h1_u2 * bp.h1_u2 < p.mu * g.ball_measure;
    max_res = std::max(max_res, bp.residual);
    beta_hi = std::max(beta_hi, bp.state.beta);
  }
  return json{{"direction", br.direction},
              {"points", br.points.size()},
              {"termination", to_string(br.termination)},
              {"note", br.note},
              {"switch_coefficient", br.switch_amplitude},
              {"max_beta", beta_hi},
              {"max_residual", max_res},
              {"strictly_positive_below_one", positive},
              {"nodal_constant", nodal_const},
              {"h1_bound", h1_ok}};
}

const BifurcationPoint& pick_point(const std::vector<BifurcationPoint>& pts, int j) {
  if (j < 1 || j > static_cast<int>(pts.size()))
    throw ValidationError("mode j = " + std::to_string(j) + " is not admissible (k = " +
                          std::to_string(pts.size()) + ")");
  return pts[j - 1];
}

CommandResult cmd_branch(const RunConfig& cfg) {
  const fs::path dir = prepare_out(cfg);
  const Params& p = cfg.params;
  const RadialGrid g = build_grid(p.dim, cfg.grid);
  const auto e = covering_spectrum(p, g, std::max(cfg.modes, cfg.j + 1));
  const auto pts = bifurcation_points(p, e);
  const BifurcationPoint& origin = pick_point(pts, cfg.j);
  const EllipticProblem prob(p, g);
  BranchConfig bc;
  bc.beta_max = cfg.beta_max;
  bc.max_points = cfg.max_points;
  bc.amplitude = cfg.amplitude;
  Branch plus, minus;
  if (worker_count(cfg) >= 2) {
    auto fut = std::async(std::launch::async, [&] { return continue_branch(prob, origin, -1, bc); });
    plus = continue_branch(prob, origin, +1, bc);
    minus = fut.get();
  } else {
    plus = continue_branch(prob, origin, +1, bc);
    minus = continue_branch(prob, origin, -1, bc);
  }
  write_branch(dir, p, plus);
  write_branch(dir, p, minus);
  json manifest{{"params", params_json(p)},
                {"grid", g.n},
                {"origin", point_json(origin)},
                {"beta_max", cfg.beta_max > 0 ? cfg.beta_max : 1e3 * origin.beta_j},
                {"plus", branch_json(plus, g, p)},
                {"minus", branch_json(minus, g, p)}};
  write_json(dir / ("branch_j" + std::to_string(cfg.j) + ".json"), manifest);
  manifest["command"] = "branch";
  return {manifest, 0};
}

struct StoredBranch {
  std::vector<BranchPoint> points;
};

StoredBranch read_states(const fs::path& path, const EllipticProblem& prob) {
  std::ifstream f(path);
  if (!f) throw IoError("missing branch data " + path.string() + " (run the branch command first)");
  StoredBranch sb;
  std::string line;
  bool header = false;
  const int n = prob.n();
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) vals.push_back(std::strtod(cell.c_str(), nullptr));
    if (static_cast<int>(vals.size()) != 2 + 2 * n)
      throw IoError("branch data in " + path.string() + " does not match grid " + std::to_string(n));
    StateFields s;
    s.beta = vals[1];
    s.u1.assign(vals.begin() + 2, vals.begin() + 2 + n);
    s.u2.assign(vals.begin() + 2 + n, vals.end());
    sb.points.push_back(measure_point(prob, s, vals[0]));
  }
  return sb;
}

CommandResult cmd_limit(const RunConfig& cfg) {
  const fs::path dir = prepare_out(cfg);
  const Params& p = cfg.params;
  const RadialGrid g = build_grid(p.dim, cfg.grid);
  const auto e = covering_spectrum(p, g, std::max(cfg.modes, cfg.j + 1));
  const auto pts = bifurcation_points(p, e);
  const BifurcationPoint& origin = pick_point(pts, cfg.j);
  const EllipticProblem prob(p, g);
  const std::string jtag = "_j" + std::to_string(cfg.j);

  // Read both branches before writing anything so a missing file leaves no partial output.
  std::vector<StoredBranch> stored;
  for (int d : {+1, -1}) stored.push_back(read_states(dir / (branch_stem(cfg.j, d) + "_states.csv"), prob));

  CsvWriter seg(dir / ("segregation" + jtag + ".csv"), "segregation", p);
  seg.row({"direction", "beta", "distance", "overlap", "root_distance_cells"});
  json dirs = json::object();
  for (int k = 0; k < 2; ++k) {
    const int d = k == 0 ? +1 : -1;
    const std::string label = d > 0 ? "plus" : "minus";
    const int orient = branch_orientation(origin, p, d);
    const LimitProfile lp = solve_limit_equation(p, g, e[cfg.j], orient);
    const std::string ptag = std::string(orient > 0 ? "_positive" : "_negative");

    CsvWriter prof(dir / ("limit_profile" + jtag + ptag + ".csv"), "limit-profile", p);
    prof.row({"r", "w"});
    for (int i = 0; i < g.n; ++i) prof.row({num(g.r[i]), num(lp.w[i])});
    prof.close();
    write_json(dir / ("limit_profile" + jtag + ptag + ".json"),
               json{{"params", params_json(p)},
                    {"j", lp.j},
                    {"orientation", lp.orientation},
                    {"roots", lp.roots},
                    {"residual", lp.residual}});

    std::vector<const BranchPoint*> order;
    for (const auto& bp : stored[k].points) order.push_back(&bp);
    std::stable_sort(order.begin(), order.end(),
                     [](const BranchPoint* x, const BranchPoint* y) { return x->state.beta < y->state.beta; });
    const BranchPoint* near2 = nullptr;
    const BranchPoint* top = nullptr;
    for (const BranchPoint* bp : order) {
      seg.row({label, num(bp->state.beta), num(segregation_distance(p, g, *bp, lp)), num(bp->overlap),
               num(scaled_root_distance(p, g, *bp, lp))});
      if (!near2 || std::abs(bp->state.beta - 2 * origin.beta_j) < std::abs(near2->state.beta - 2 * origin.beta_j))
        near2 = bp;
      top = bp;
    }
    json entry{{"orientation", orient}, {"roots", lp.roots}, {"residual", lp.residual}};
    if (top) {
      const double d2 = segregation_distance(p, g, *near2, lp), dt = segregation_distance(p, g, *top, lp);
      entry.update(json{{"beta_near_2beta_j", near2->state.beta},
                        {"distance_near_2beta_j", d2},
                        {"overlap_near_2beta_j", near2->overlap},
                        {"beta_max", top->state.beta},
                        {"distance_at_max", dt},
                        {"overlap_at_max", top->overlap},
                        {"distance_factor", jnum(d2 / dt)},
                        {"overlap_ratio", jnum(top->overlap / near2->overlap)},
                        {"root_distance_cells_at_max", jnum(scaled_root_distance(p, g, *top, lp))}});
    }
    dirs[label] = entry;
  }
  seg.close();
  return {json{{"command", "limit"}, {"j", cfg.j}, {"branches", dirs}}, 0};
}

json tally_json(const CheckTally& t) {
  return json{{"name", t.name},
              {"theorem_grade", t.theorem_grade},
              {"checked", t.checked},
              {"violations", t.violations},
              {"worst_margin", jnum(t.worst_margin)},
              {"worst_sample",
               {{"params", params_json(t.worst.p)}, {"beta", jnum(t.worst.beta)}, {"lambda", jnum(t.worst.lambda)}}}};
}

CommandResult cmd_verify(const RunConfig& cfg) {
  const fs::path dir = prepare_out(cfg);
  SweepConfig sc;
  sc.seed = cfg.seed;
  sc.draws = cfg.draws;
  sc.betas_per_draw = cfg.betas_per_draw;
  sc.workers = worker_count(cfg);
  const SweepReport rep = run_appendix_sweep(sc);
  json th = json::array(), cons = json::array();
  for (const auto& t : rep.theorem_checks) th.push_back(tally_json(t));
  for (const auto& t : rep.consistency_checks) cons.push_back(tally_json(t));
  std::vector<double> ratios = rep.sign_stable_ratios;
  std::sort(ratios.begin(), ratios.end());
  json generic{{"nondeg_positive", rep.nondeg_positive},
               {"nondeg_negative", rep.nondeg_negative},
               {"nondeg_near_zero", rep.nondeg_near_zero},
               {"z_positive", rep.z_positive},
               {"z_negative", rep.z_negative},
               {"worst_nondeg_z_identity", rep.worst_nondeg_z_identity},
               {"worst_sigma_plus_beta_gamma_m_identity", rep.worst_sigma_identity},
               {"draws_with_eventually_positive_z", ratios.size()},
               {"median_sign_stable_beta_over_beta_min",
                ratios.empty() ? json(nullptr) : json(ratios[ratios.size() / 2])}};
  json report{{"seed", cfg.seed},
              {"draws", cfg.draws},
              {"points", rep.points},
              {"theorem_checks", th},
              {"consistency_checks", cons},
              {"generic_claims", generic},
              {"worst_dual_evaluation_mismatch", rep.worst_dual_mismatch},
              {"theorems_hold", rep.theorems_hold()}};
  write_json(dir / "appendix_report.json", report);
  report["command"] = "verify";
  return {report, rep.theorems_hold() ? 0 : 4};
}

CommandResult cmd_report(const RunConfig& cfg) {
  const fs::path dir = prepare_out(cfg);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("branch_j", 0) == 0 && name.size() > 4 && name.substr(name.size() - 4) == ".csv" &&
        name.find("_states") == std::string::npos)
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no branch summaries in " + dir.string() + " (run the branch command first)");
  CsvWriter out(dir / "bifurcation_diagram.csv", "bifurcation-diagram", cfg.params);
  out.row({"branch", "beta", "sup_u1"});
  long rows = 0;
  for (const auto& fpath : files) {
    std::ifstream f(fpath);
    std::string line;
    bool header = false;
    const std::string label = fpath.stem().string();
    while (std::getline(f, line)) {
      if (line.empty() || line[0] == '#') continue;
      if (!header) {
        header = true;
        continue;
      }
      std::stringstream ss(line);
      std::string s, beta, sup;
      std::getline(ss, s, ',');
      std::getline(ss, beta, ',');
      std::getline(ss, sup, ',');
      out.row({label, beta, sup});
      ++rows;
    }
  }
  out.close();
  return {json{{"command", "report"}, {"branches", files.size()}, {"rows", rows}}, 0};
}

}  // namespace

json params_json(const Params& p) {
  return json{{"mu", p.mu}, {"sigma", p.sigma}, {"alpha", p.alpha}, {"gamma", p.gamma}, {"dim", p.dim}};
}

RunConfig parse_run_config(const json& j, RunConfig c) {
  if (!j.is_object()) throw ValidationError("configuration must be a JSON object");
  auto number = [&](const json& v, const std::string& key) {
    if (!v.is_number()) throw ValidationError("configuration key '" + key + "' must be a number");
    return v.get<double>();
  };
  auto integer = [&](const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw ValidationError("configuration key '" + key + "' must be an integer");
    return v.get<long long>();
  };
  double mu = c.params.mu, sigma = c.params.sigma, alpha = c.params.alpha, gamma = c.params.gamma;
  int dim = c.params.dim;
  for (const auto& [key, v] : j.items()) {
    if (key == "params") {
      if (!v.is_object()) throw ValidationError("'params' must be an object");
      for (const auto& [pk, pv] : v.items()) {
        if (pk == "mu") mu = number(pv, pk);
        else if (pk == "sigma") sigma = number(pv, pk);
        else if (pk == "alpha") alpha = number(pv, pk);
        else if (pk == "gamma") gamma = number(pv, pk);
        else if (pk == "dim") dim = static_cast<int>(integer(pv, pk));
        else throw ValidationError("unknown parameter '" + pk + "'");
      }
    } else if (key == "grid") c.grid = static_cast<int>(integer(v, key));
    else if (key == "modes") c.modes = static_cast<int>(integer(v, key));
    else if (key == "j") c.j = static_cast<int>(integer(v, key));
    else if (key == "beta_max") c.beta_max = number(v, key);
    else if (key == "max_points") c.max_points = static_cast<int>(integer(v, key));
    else if (key == "amplitude") c.amplitude = number(v, key);
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(integer(v, key));
    else if (key == "workers") c.workers = static_cast<int>(integer(v, key));
    else if (key == "draws") c.draws = static_cast<int>(integer(v, key));
    else if (key == "betas_per_draw") c.betas_per_draw = static_cast<int>(integer(v, key));
    else if (key == "out") {
      if (!v.is_string()) throw ValidationError("'out' must be a string");
      c.out = v.get<std::string>();
    } else {
      throw ValidationError("unknown configuration key '" + key + "'");
    }
  }
  c.params = validate_params(mu, sigma, alpha, gamma, dim);
  if (c.grid < 16) throw ValidationError("grid must be >= 16");
  if (c.modes < 1) throw ValidationError("modes must be >= 1");
  if (c.modes >= c.grid) throw ValidationError("modes must be smaller than grid");
  if (c.j < 1) throw ValidationError("j must be >= 1");
  if (c.beta_max < 0 || !std::isfinite(c.beta_max)) throw ValidationError("beta_max must be >= 0");
  if (c.max_points < 2) throw ValidationError("max_points must be >= 2");
  if (!(c.amplitude > 0)) throw ValidationError("amplitude must be > 0");
  if (c.workers < 0) throw ValidationError("workers must be >= 0");
  if (c.draws < 1 || c.betas_per_draw < 2) throw ValidationError("draws >= 1 and betas_per_draw >= 2 required");
  if (c.out.empty()) throw ValidationError("out must not be empty");
  return c;
}

json config_json(const RunConfig& c) {
  return json{{"params", params_json(c.params)}, {"grid", c.grid},         {"modes", c.modes},
              {"j", c.j},                        {"beta_max", c.beta_max}, {"max_points", c.max_points},
              {"amplitude", c.amplitude},        {"seed", c.seed},         {"workers", c.workers},
              {"draws", c.draws},                {"betas_per_draw", c.betas_per_draw}, {"out", c.out}};
}

CommandResult run_command(const std::string& name, const RunConfig& cfg) {
  if (name == "eigen") return cmd_eigen(cfg);
  if (name == "points") return cmd_points(cfg);
  if (name == "branch") return cmd_branch(cfg);
  if (name == "limit") return cmd_limit(cfg);
  if (name == "verify") return cmd_verify(cfg);
  if (name == "report") return cmd_report(cfg);
  throw ValidationError("unknown command '" + name + "'");
}

}  // namespace lvbif
