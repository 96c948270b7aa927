// holo — verification suites, loop holonomies, holonomy-algebra estimates and
// gate synthesis from the command line.
//
// Exit status: 0 pass, 1 tolerance/fidelity failure, 2 input/config error,
// 3 target outside the reachable group.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "holo/coherent.hpp"
#include "holo/connection.hpp"
#include "holo/holonomy.hpp"
#include "holo/io.hpp"
#include "holo/linalg.hpp"
#include "holo/synth.hpp"

using namespace holo;

namespace {

enum Exit { kPass = 0, kFail = 1, kInput = 2, kUnreachable = 3 };

struct Flags {
  std::string config_path;
  std::string out_path;
  std::string format;
  int cutoff = 0;
  double xi_max = 0, zeta_max = 0;
  int steps = 0;
  double tol_connection = 0, tol_curvature = 0, tol_unitarity = 0, tol_cutoff = 0, tol_span = 0, tol_algebra = 0;
  std::uint64_t seed = 0;
  int samples = 0;
  double fd_step = 0;
  std::vector<CLI::Option*> opts;  // same order as the fields
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON run configuration (flags override it)");
  sub->add_option("--out", f.out_path, "write the report here instead of stdout");
  f.opts = {
      sub->add_option("--format", f.format, "json | csv"),
      sub->add_option("--cutoff", f.cutoff, "per-mode Fock cutoff n_max"),
      sub->add_option("--xi-max", f.xi_max, "budget |xi|_max"),
      sub->add_option("--zeta-max", f.zeta_max, "budget |zeta|_max"),
      sub->add_option("--steps", f.steps, "transport steps"),
      sub->add_option("--tol-connection", f.tol_connection),
      sub->add_option("--tol-curvature", f.tol_curvature),
      sub->add_option("--tol-unitarity", f.tol_unitarity),
      sub->add_option("--tol-cutoff", f.tol_cutoff, "allowed n vs n+6 connection deviation"),
      sub->add_option("--tol-span", f.tol_span),
      sub->add_option("--tol-algebra", f.tol_algebra, "relative singular-value cut"),
      sub->add_option("--seed", f.seed),
      sub->add_option("--samples", f.samples, "sample points"),
      sub->add_option("--fd-step", f.fd_step, "finite-difference step"),
  };
}

RunConfig resolve(const Flags& f) {
  RunConfig c;
  if (!f.config_path.empty()) c = parse_config(read_json_file(f.config_path));
  auto set = [&](int k) { return f.opts[k]->count() > 0; };
  if (set(0)) c.format = parse_format(f.format);
  if (set(1)) c.cutoff = f.cutoff;
  if (set(2)) c.budget.xi_max = f.xi_max;
  if (set(3)) c.budget.zeta_max = f.zeta_max;
  if (set(4)) c.steps = f.steps;
  if (set(5)) c.tol.connection = f.tol_connection;
  if (set(6)) c.tol.curvature = f.tol_curvature;
  if (set(7)) c.tol.unitarity = f.tol_unitarity;
  if (set(8)) c.tol.cutoff = f.tol_cutoff;
  if (set(9)) c.tol.span = f.tol_span;
  if (set(10)) c.tol.algebra = f.tol_algebra;
  if (set(11)) c.seed = f.seed;
  if (set(12)) c.samples = f.samples;
  if (set(13)) c.fd_step = f.fd_step;
  validate(c);
  return c;
}

void emit(const Json& report, const std::vector<CsvRow>& rows, const RunConfig& c, const std::string& out) {
  const std::string text = c.format == Format::kJson ? report.dump(2) + "\n" : csv_report(rows);
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out);
  if (!file) throw InputError("cannot write '" + out + "'");
  file << text;
}

double max_abs4(const Matrix4& m) { return m.cwiseAbs().maxCoeff(); }

Json header(const char* command, const RunConfig& c) { return {{"command", command}, {"config", config_json(c)}}; }

int verify_connection(const RunConfig& c, const std::string& out) {
  const FockSpace space(c.cutoff);
  const FockSpace probe(c.cutoff + kCutoffProbeExtra);
  std::mt19937_64 rng(c.seed + 1);
  std::normal_distribution<double> gauss;
  Json report = header("verify-connection", c);
  std::vector<CsvRow> rows;
  double worst_err = 0, worst_dev = 0, worst_anti = 0;
  for (const auto& p : sample_budget(c.budget, c.samples, c.seed)) {
    const auto num = connection_numeric(space, p);
    const auto ref = connection_numeric(probe, p);
    const auto ana = connection_analytic(p);
    const double err = std::max(max_abs4(num.a_xi - ana.a_xi), max_abs4(num.a_zeta - ana.a_zeta));
    const double dev = std::max(max_abs4(num.a_xi - ref.a_xi), max_abs4(num.a_zeta - ref.a_zeta));
    double anti = 0;
    for (int k = 0; k < 4; ++k) {
      const Matrix4 a = num.along({gauss(rng), gauss(rng), gauss(rng), gauss(rng)});
      anti = std::max(anti, max_abs4(a + a.adjoint()));
    }
    worst_err = std::max(worst_err, err);
    worst_dev = std::max(worst_dev, dev);
    worst_anti = std::max(worst_anti, anti);
    report["points"].push_back({{"at", point_json(p)},
                                {"max_error", err},
                                {"cutoff_deviation", dev},
                                {"anti_hermitian_defect", anti}});
    rows.push_back({p, "connection_error", err});
    rows.push_back({p, "cutoff_deviation", dev});
    rows.push_back({p, "anti_hermitian_defect", anti});
  }
  const bool adequate = worst_dev < c.tol.cutoff;
  const bool pass = adequate && worst_err < c.tol.connection && worst_anti < 1e-10;
  report["summary"] = {{"max_connection_error", worst_err},
                       {"max_cutoff_deviation", worst_dev},
                       {"max_anti_hermitian_defect", worst_anti},
                       {"cutoff_adequate", adequate},
                       {"pass", pass}};
  emit(report, rows, c, out);
  if (!adequate) {
    std::cerr << "cutoff-adequacy failure: connection moves by " << worst_dev << " between cutoffs " << c.cutoff
              << " and " << probe.cutoff() << " (allowed " << c.tol.cutoff << ")\n";
  }
  return pass ? kPass : kFail;
}

int verify_curvature(const RunConfig& c, const std::string& out, bool convergence, bool numeric) {
  const ConnectionProvider provider =
      numeric ? numeric_connection_provider(FockSpace(c.cutoff)) : analytic_connection_provider();
  Json report = header("verify-curvature", c);
  report["connection"] = numeric ? "numeric" : "analytic";
  std::vector<CsvRow> rows;
  std::array<double, 6> worst{};
  double worst_span = 0;
  bool pass = true;
  for (const auto& p : sample_budget(c.budget, c.samples, c.seed)) {
    const auto exact = curvature_analytic(p);
    const auto fd = curvature_numeric(p, provider, c.fd_step);
    Json point = {{"at", point_json(p)}};
    double err = 0, span = 0;
    for (auto w : kAllWedges) {
      const int k = static_cast<int>(w);
      const double e = max_abs4(fd[w] - exact[w]);
      worst[k] = std::max(worst[k], e);
      err = std::max(err, e);
      span = std::max({span, curvature_span_residual(exact[w]), curvature_span_residual(fd[w])});
      point["error"][wedge_name(w)] = e;
      rows.push_back({p, std::string("error_") + wedge_name(w), e});
    }
    point["span_residual"] = span;
    rows.push_back({p, "span_residual", span});
    if (convergence) {
      const auto half = curvature_numeric(p, provider, c.fd_step / 2);
      double err_half = 0;
      for (auto w : kAllWedges) err_half = std::max(err_half, max_abs4(half[w] - exact[w]));
      const double ratio = err / err_half;
      point["error_half_step"] = err_half;
      point["convergence_ratio"] = ratio;
      rows.push_back({p, "error_half_step", err_half});
      rows.push_back({p, "convergence_ratio", ratio});
    }
    worst_span = std::max(worst_span, span);
    pass = pass && err < c.tol.curvature && span < c.tol.span;
    report["points"].push_back(point);
  }
  for (auto w : kAllWedges) report["summary"]["max_error"][wedge_name(w)] = worst[static_cast<int>(w)];
  report["summary"]["max_span_residual"] = worst_span;
  report["summary"]["pass"] = pass;
  emit(report, rows, c, out);
  return pass ? kPass : kFail;
}

int run_holonomy(const RunConfig& c, bool steps_flag, const std::string& loop_file, const std::string& out,
                 bool numeric) {
  const LoopSpec spec = load_loop_spec(loop_file);
  const int steps = steps_flag || !spec.steps ? c.steps : *spec.steps;
  const ConnectionProvider provider =
      numeric ? numeric_connection_provider(FockSpace(c.cutoff)) : analytic_connection_provider();
  HolonomyResult r;
  try {
    r = holonomy(spec.loop, provider, steps, c.budget);
  } catch (const BudgetExceeded& e) {
    throw InputError(e.what());
  }
  const double defect = unitarity_defect(Matrix(r.gamma));
  Json report = header("holonomy", c);
  report["loop"] = loop_spec_json(spec.loop, steps);
  report["connection"] = numeric ? "numeric" : "analytic";
  report["steps"] = r.steps;
  report["gamma"] = matrix_json(r.gamma);
  report["unitarity_defect"] = defect;
  report["error_estimate"] = r.error_estimate;
  report["flagged"] = r.flagged;
  try {
    report["log_gamma"] = matrix_json(log_unitary(Matrix(r.gamma)));
  } catch (const BranchAmbiguity&) {
    report["log_gamma"] = nullptr;
  }
  std::vector<CsvRow> rows = {{spec.loop.base(), "unitarity_defect", defect},
                              {spec.loop.base(), "error_estimate", r.error_estimate}};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const std::string cell = std::to_string(i) + std::to_string(j);
      rows.push_back({spec.loop.base(), "gamma_re_" + cell, r.gamma(i, j).real()});
      rows.push_back({spec.loop.base(), "gamma_im_" + cell, r.gamma(i, j).imag()});
    }
  }
  emit(report, rows, c, out);
  return (r.flagged || defect > c.tol.unitarity) ? kFail : kPass;
}

int run_algebra(const RunConfig& c, const std::string& out, bool restricted, int loops) {
  const auto grid = restricted ? restricted_algebra_grid(c.budget) : default_algebra_grid(c.budget);
  const auto curvature = analytic_curvature_provider();
  const AlgebraReport a = holonomy_algebra(curvature, grid, c.tol.algebra);
  Json report = header("algebra", c);
  report["grid"] = restricted ? "restricted" : "default";
  for (const auto& p : grid) report["sample_points"].push_back(point_json(p));
  report["dimension"] = a.dimension;
  report["singular_values"] = a.singular_values;
  report["gap_ratio"] = std::isfinite(a.gap_ratio) ? Json(a.gap_ratio) : Json("inf");
  for (double t : {1e-6, 1e-7, 1e-8, 1e-9, 1e-10}) {
    report["tol_sweep"].push_back({{"tol", t}, {"dimension", holonomy_algebra_dimension(curvature, grid, t)}});
  }
  std::vector<CsvRow> rows = {{{}, "dimension", double(a.dimension)}, {{}, "gap_ratio", a.gap_ratio}};
  for (std::size_t k = 0; k < a.singular_values.size(); ++k) {
    rows.push_back({{}, "singular_value_" + std::to_string(k), a.singular_values[k]});
  }
  bool loops_ok = true;
  if (loops > 0) {
    const auto small = random_small_loops(c.budget, loops, 0.05, c.seed);
    const AlgebraReport l = holonomy_algebra_from_loops(analytic_connection_provider(), small, c.steps, c.tol.algebra);
    report["loop_estimate"] = {{"loops", loops}, {"dimension", l.dimension}, {"singular_values", l.singular_values}};
    rows.push_back({{}, "loop_dimension", double(l.dimension)});
    loops_ok = restricted || l.dimension == 4;
  }
  const bool pass = (restricted ? a.dimension <= 3 : a.dimension == 4) && loops_ok;
  if (restricted) report["note"] = "restricted sampling: zeta = 0 and real xi only";
  report["irreducible"] = a.dimension == 16;
  report["pass"] = pass;
  emit(report, rows, c, out);
  return pass ? kPass : kFail;
}

int run_synth(const RunConfig& c, const std::string& target_file, const std::string& out, const std::string& family,
              int budget, int restarts) {
  const Matrix4 target = load_target(target_file);
  if (!is_unitary(Matrix(target), kUnitaryInputTol)) throw InputError("target is not unitary within 1e-8");
  Json report = header("synth", c);
  report["target"] = matrix_json(target);
  report["family"] = family;
  const Reachability reach = reachability(target);
  report["reachability"] = {{"reachable", reach.reachable},
                            {"log_residual", reach.residual},
                            {"block_structure_test", reach.structural}};
  std::vector<CsvRow> rows = {{{}, "log_residual", reach.residual}};
  if (!reach.reachable) {
    emit(report, rows, c, out);
    std::cerr << "target rejected: outside the reachable SU(2) x U(1) group\n";
    return kUnreachable;
  }
  SynthOptions opts;
  opts.budget = budget;
  opts.restarts = restarts;
  opts.steps = c.steps;
  opts.seed = c.seed;
  const SynthResult r = synthesize(target, make_family(parse_family(family), c.budget), analytic_connection_provider(),
                                   opts);
  report["theta"] = r.theta;
  report["fidelity"] = r.fidelity;
  report["search_fidelity"] = r.search_fidelity;
  report["evaluations"] = r.evaluations;
  report["best_restart"] = r.best_restart;
  report["verify_steps"] = opts.verify_steps;
  report["gamma"] = matrix_json(r.gamma);
  report["trace"] = r.trace;
  rows.push_back({{}, "fidelity", r.fidelity});
  rows.push_back({{}, "evaluations", double(r.evaluations)});
  for (std::size_t k = 0; k < r.theta.size(); ++k) rows.push_back({{}, "theta_" + std::to_string(k), r.theta[k]});
  emit(report, rows, c, out);
  return r.fidelity >= 0.999 ? kPass : kFail;
}

int disentangle_check(const RunConfig& c, const std::string& out, std::vector<int> cutoffs) {
  if (c.budget.xi_max >= std::numbers::pi / 2) throw InputError("disentangle-check needs xi_max < pi/2");
  if (std::find(cutoffs.begin(), cutoffs.end(), c.cutoff) == cutoffs.end()) cutoffs.push_back(c.cutoff);
  std::sort(cutoffs.begin(), cutoffs.end());
  const auto points = sample_budget(c.budget, c.samples, c.seed);
  Json report = header("disentangle-check", c);
  std::vector<CsvRow> rows;
  bool pass = true;
  for (int n : cutoffs) {
    if (n < 1) throw InputError("cutoffs must be positive");
    const FockSpace space(n);
    double u_complete = 0, u_half = 0, u_all = 0, v_low = 0, v_vac = 0;
    for (const auto& p : points) {
      const auto ud = u_disentangled(space, p.xi);
      const auto uo = u_op(space, p.xi);
      const auto vd = v_disentangled(space, p.zeta);
      const auto vo = v_op(space, p.zeta);
      const double uc = shell_deviation(ud, uo, n), uh = shell_deviation(ud, uo, n / 2);
      const double ua = max_abs(Matrix(ud.matrix() - uo.matrix()));
      const double vl = column_deviation(vd, vo, 4), vv = column_deviation(vd, vo, 0);
      u_complete = std::max(u_complete, uc);
      u_half = std::max(u_half, uh);
      u_all = std::max(u_all, ua);
      v_low = std::max(v_low, vl);
      v_vac = std::max(v_vac, vv);
      if (n == c.cutoff) {
        rows.push_back({p, "u_complete_shells", uc});
        rows.push_back({p, "u_half_cutoff_shells", uh});
        rows.push_back({p, "u_all_states", ua});
        rows.push_back({p, "v_low_lying", vl});
        rows.push_back({p, "v_vacuum", vv});
      }
    }
    report["table"].push_back({{"cutoff", n},
                               {"u_complete_shells", u_complete},
                               {"u_half_cutoff_shells", u_half},
                               {"u_all_states", u_all},
                               {"v_low_lying", v_low},
                               {"v_vacuum", v_vac}});
    if (n == c.cutoff) pass = u_complete < 1e-9 && v_low < 1e-8;
  }
  report["pass"] = pass;
  emit(report, rows, c, out);
  return pass ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Holonomic gate engine over two-mode coherent operators"};
  app.require_subcommand(1);

  Flags f_conn, f_curv, f_hol, f_alg, f_syn, f_dis;
  auto* conn = app.add_subcommand("verify-connection", "analytic vs Frechet-derivative connection");
  add_common(conn, f_conn);

  auto* curv = app.add_subcommand("verify-curvature", "analytic vs finite-difference curvature");
  add_common(curv, f_curv);
  bool convergence = false, curv_numeric = false;
  curv->add_flag("--convergence", convergence, "also report the error at half the step");
  curv->add_flag("--numeric-connection", curv_numeric, "differentiate the Frechet connection instead");

  auto* hol = app.add_subcommand("holonomy", "holonomy of a loop file");
  add_common(hol, f_hol);
  std::string loop_file;
  bool hol_numeric = false;
  hol->add_option("loop", loop_file, "loop file (JSON)")->required();
  hol->add_flag("--numeric-connection", hol_numeric, "transport with the Frechet connection");

  auto* alg = app.add_subcommand("algebra", "holonomy-algebra dimension");
  add_common(alg, f_alg);
  bool restricted = false;
  int loops = 0;
  alg->add_flag("--restricted", restricted, "sample only zeta = 0, real xi");
  alg->add_option("--loops", loops, "confirm with logs of this many random small loops");

  auto* syn = app.add_subcommand("synth", "synthesise a target gate");
  add_common(syn, f_syn);
  std::string target_file, family = family_name(FamilyKind::kMixedRectangle);
  int budget = 2000, restarts = 4;
  syn->add_option("target", target_file, "target gate (JSON)")->required();
  syn->add_option("--family", family, "xi-rectangle | zeta-rectangle | concatenated | mixed-rectangle");
  syn->add_option("--budget", budget, "objective evaluations");
  syn->add_option("--restarts", restarts, "simplex restarts");

  auto* dis = app.add_subcommand("disentangle-check", "normal-ordered products vs direct exponentials");
  add_common(dis, f_dis);
  std::vector<int> cutoffs = {12, 18, 24, 30, 36};
  dis->add_option("--cutoffs", cutoffs, "cutoffs to sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kInput;
  }

  try {
    if (*conn) return verify_connection(resolve(f_conn), f_conn.out_path);
    if (*curv) return verify_curvature(resolve(f_curv), f_curv.out_path, convergence, curv_numeric);
    if (*hol) return run_holonomy(resolve(f_hol), f_hol.opts[4]->count() > 0, loop_file, f_hol.out_path, hol_numeric);
    if (*alg) return run_algebra(resolve(f_alg), f_alg.out_path, restricted, loops);
    if (*syn) return run_synth(resolve(f_syn), target_file, f_syn.out_path, family, budget, restarts);
    if (*dis) return disentangle_check(resolve(f_dis), f_dis.out_path, cutoffs);
  } catch (const ReachabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUnreachable;
  } catch (const CutoffError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kInput;
}
