#include "mats/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include "mats/diagnostics.hpp"
#include "mats/expr.hpp"

namespace mats {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p);
  if (!f) throw Error("cannot write " + p.string());
  f << content;
}

fs::path prepare_out_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  write_file(dir / "resolved.cfg", resolved_config_text(cfg));
  return dir;
}

void write_field_outputs(const RunConfig& cfg, const fs::path& dir, const ScalarField& f,
                         const std::string& stem) {
  if (cfg.csv) {
    std::ofstream os(dir / (stem + ".csv"));
    write_csv(f, os);
  }
  if (cfg.vtk) {
    std::ofstream os(dir / (stem + ".vtk"));
    write_vtk(f, os, stem);
  }
}

int status_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return kOk;
    case SolveStatus::Stalled: return kStalled;
    case SolveStatus::EllipticityLost: return kEllipticityLost;
  }
  return kStalled;
}

struct SolveArtifacts {
  ProblemBundle bundle;
  GridPtr grid;
  ScalarField sub;
  ContinuationResult result;
};

int run_solve(const RunConfig& cfg, SolveArtifacts& art, std::ostream& log) {
  art.bundle = problem_from_config(cfg);
  const ProblemSpec& ps = art.bundle.problem;
  art.grid = Grid::build(ps.domain, cfg.h);
  if (!ps.subsolution) {
    log << "no subsolution configured; cannot start the continuation\n";
    return kConfigError;
  }
  art.sub = ScalarField::from_function(art.grid, ps.subsolution);

  const SubsolutionReport gate = check_subsolution(ps, art.sub, /*strict=*/false);
  if (!gate.report.pass) {
    log << "subsolution rejected: ellipticity margin " << gate.ellipticity_margin
        << ", determinant margin " << gate.det_margin << "\n";
    return kHypothesisFailed;
  }

  art.result = continuation_solve(ps, art.sub, cfg.solver);
  return status_code(art.result.status);
}

}  // namespace

int cmd_solve(const RunConfig& cfg) {
  const fs::path dir = prepare_out_dir(cfg);
  SolveArtifacts art;
  const int code = run_solve(cfg, art, std::cout);
  if (code == kConfigError || code == kHypothesisFailed) return code;

  write_field_outputs(cfg, dir, art.result.final.u, "solution");
  if (cfg.trace) {
    std::string trace = art.result.trace;
    const EstimateReport er =
        estimate_report(art.bundle.problem, art.result.final, art.sub, cfg.mu0);
    trace += "# " + std::to_string(art.result.steps.size()) + " continuation steps, status " +
             std::to_string(code) + "\n";
    // report lines prefixed as comments so the trace stays machine readable
    std::istringstream is(er.text());
    std::string line;
    while (std::getline(is, line)) trace += "# " + line + "\n";
    write_file(dir / "trace.txt", trace);
  }

  const ComparisonReport cmp = comparison_check(art.result.final.u, art.sub);
  std::cout << "status: " << (code == kOk ? "converged" : "failed") << "\n"
            << "steps: " << art.result.steps.size() - 1 << "\n"
            << "final residual: " << art.result.steps.back().residual_norm << "\n"
            << "min eig over run: " << art.result.min_eig_over_run << "\n"
            << "min(u - subsolution): " << cmp.min_difference << "\n";
  if (!art.result.failure_reason.empty())
    std::cout << "failure: " << art.result.failure_reason << "\n";
  return code;
}

int cmd_verify(const RunConfig& cfg) {
  const fs::path dir = prepare_out_dir(cfg);
  const ProblemBundle pb = problem_from_config(cfg);
  const ProblemSpec& ps = pb.problem;
  Rng rng(cfg.seed);

  const auto xs = sample_interior(ps.domain, cfg.samples_x, rng);
  const auto pss = sample_box(cfg.p_lower, cfg.p_upper, cfg.samples_p, rng);

  // field-based checks evaluate at the configured subsolution
  GridPtr grid;
  std::optional<EllipticIterate> it;
  ScalarField sub;
  auto need_iterate = [&]() -> EllipticIterate& {
    if (!it) {
      grid = Grid::build(ps.domain, cfg.h);
      if (!ps.subsolution)
        throw ConfigError("this check needs problem.subsolution as the evaluation iterate");
      sub = ScalarField::from_function(grid, ps.subsolution);
      it = assemble_w(ps, sub);
      if (!it->elliptic) throw ConfigError("evaluation iterate (subsolution) is not elliptic");
    }
    return *it;
  };

  std::vector<ConditionReport> reports;
  std::vector<std::string> checks = cfg.checks;
  if (checks.empty())
    checks = {"regularity", "structure", "a0-eigenvalue"};

  for (const std::string& name : checks) {
    if (name == "regularity") {
      reports.push_back(check_regularity(ps.A, xs, pss, cfg.directions));
    } else if (name == "structure") {
      reports.push_back(check_structure(ps.A, cfg.mu0, xs, pss));
    } else if (name == "a0-eigenvalue") {
      reports.push_back(check_A0_eigenvalue(ps.A, xs));
    } else if (name == "subsolution" || name == "subsolution-strict") {
      need_iterate();
      reports.push_back(
          check_subsolution(ps, sub, name == "subsolution-strict").report);
    } else if (name == "barrier") {
      EllipticIterate& u = need_iterate();
      const BarrierCertificate cert = find_barrier(ps, u, sub);
      ConditionReport rep;
      rep.name = "barrier";
      rep.samples = cert.margins.size();
      rep.min_margin = cert.margins.size() ? cert.margins.minCoeff() : -1.0;
      rep.pass = cert.valid;
      rep.note = "K=" + format_double(cert.K) + " eps1=" + format_double(cert.eps1) +
                 " C=" + format_double(cert.C) + (cert.note.empty() ? "" : "; " + cert.note);
      reports.push_back(rep);
    } else if (name == "a-bounded") {
      EllipticIterate& u = need_iterate();
      const ScalarFn pb_fn = parse_expression(cfg.phibar);
      reports.push_back(check_A_bounded(ps, u, ScalarField::from_function(grid, pb_fn)));
    } else if (name == "uniform-a-convexity") {
      EllipticIterate& u = need_iterate();
      reports.push_back(check_uniform_A_convexity(ps, u, cfg.delta0));
    } else if (name == "domain-c-convexity") {
      if (!pb.cost) throw ConfigError("domain-c-convexity needs a cost-generated model");
      const auto ys = sample_box(Vec2(pb.cost->y_lo[0], pb.cost->y_lo[1]),
                                 Vec2(pb.cost->y_hi[0], pb.cost->y_hi[1]), 8, rng);
      reports.push_back(check_domain_c_convexity(*pb.cost, ps.domain, ys));
    } else if (name == "solution-c-convexity") {
      if (!pb.cost) throw ConfigError("solution-c-convexity needs a cost-generated model");
      EllipticIterate& u = need_iterate();
      reports.push_back(check_solution_c_convexity(*pb.cost, u));
    } else {
      throw ConfigError("unknown check '" + name + "'");
    }
  }

  std::string csv = ConditionReport::csv_header() + "\n";
  bool all_pass = true;
  for (const auto& r : reports) {
    csv += r.csv_row() + "\n";
    all_pass = all_pass && r.pass;
    std::cout << (r.pass ? "[pass] " : "[FAIL] ") << r.name << ": min margin " << r.min_margin
              << " over " << r.samples << " samples"
              << (r.note.empty() ? "" : " (" + r.note + ")") << "\n";
  }
  write_file(dir / "reports.csv", csv);
  return all_pass ? kOk : kHypothesisFailed;
}

int cmd_study(const RunConfig& cfg) {
  const fs::path dir = prepare_out_dir(cfg);
  if (cfg.h_list.size() < 2) throw ConfigError("study needs >= 2 resolutions in study.h_list");
  const ProblemBundle pb = problem_from_config(cfg);
  ScalarFn exact = pb.exact;
  if (!cfg.reference.empty()) exact = parse_expression(cfg.reference);
  if (!exact) throw ConfigError("study needs study.reference (or a preset with an exact solution)");
  if (!pb.problem.subsolution) throw ConfigError("study needs problem.subsolution");

  const StudyResult sr =
      convergence_study(pb.problem, pb.problem.subsolution, exact, cfg.h_list, cfg.solver);
  write_file(dir / "study.csv", sr.csv());
  std::cout << sr.csv();
  if (!sr.complete) {
    std::cout << "study incomplete: " << sr.failure << "\n";
    return kStalled;
  }
  return kOk;
}

int cmd_transport(const RunConfig& cfg) {
  const fs::path dir = prepare_out_dir(cfg);
  SolveArtifacts art;
  const int code = run_solve(cfg, art, std::cout);
  if (code != kOk) return code;
  if (!art.bundle.cost) throw ConfigError("transport needs a cost-generated model or preset");

  const CostModel cm = *art.bundle.cost;
  auto Y = [cm](const VectorXd& x, const VectorXd& p) { return solve_Y(cm, x, p); };
  const TransportResidualResult tr = transport_residual(Y, art.result.final, art.bundle.psi);

  // residual as a field over stored nodes (boundary rows zero)
  ScalarField res_field = ScalarField::zeros(art.grid);
  for (int k = 0; k < art.grid->n_interior(); ++k)
    res_field.values[art.grid->interior_nodes[k]] = tr.field[k];
  write_field_outputs(cfg, dir, res_field, "transport_residual");
  std::cout << "transport residual max: " << tr.max_abs << "\n";
  return kOk;
}

}  // namespace mats
