// Command-line driver: seeded experiments over the projection operators,
// the iterative solvers, the inequality sweeps and the stability study.
//
// Exit codes: 0 pass/converged, 1 margin or convergence failure,
//             2 usage error, 3 divergence signal.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lpproj/harness.hpp"

using namespace lpproj;

namespace {

struct OutputTarget {
  std::string path;

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << text;
  }
};

std::string render_trace(const IterTrace& trace, const ExperimentConfig& cfg) {
  std::ostringstream os;
  if (cfg.output_format == "json")
    emit_trace_json(trace, cfg, os);
  else
    emit_trace_csv(trace, os);
  return os.str();
}

std::string render_report(const std::vector<ReportRecord>& recs,
                          const ExperimentConfig& cfg) {
  std::ostringstream os;
  if (cfg.output_format == "json")
    emit_report_json(recs, cfg, os);
  else
    emit_report_csv(recs, os);
  return os.str();
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

StepSchedule::Kind schedule_kind(const std::string& name) {
  return name == "harmonic" ? StepSchedule::Kind::harmonic
                            : StepSchedule::Kind::constant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-dimensional l^p projection operators and solvers"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  int m_sets = 3;
  int max_sweeps = 500;
  std::string schedule = "constant";
  std::string method = "generalized";
  std::string scheme = "polyak";
  std::string checks_csv;
  std::string sigma_csv = "1e-1,1e-2,1e-3";
  std::string output;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "norm exponent p > 1");
    sub->add_option("--dim", cfg.dim, "space dimension");
    sub->add_option("--seed", cfg.seed, "rng seed");
    sub->add_option("--output", output, "output file (stdout when empty)");
    sub->add_option("--format", cfg.output_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  auto* altproj = app.add_subcommand(
      "altproj", "successive generalized projections onto random halfspaces");
  add_common(altproj);
  altproj->add_option("--sets", m_sets, "number of halfspaces");
  altproj->add_option("--max-sweeps", max_sweeps, "sweep budget");
  altproj->add_option("--tol", cfg.tol, "step-norm stopping tolerance");

  auto* vi = app.add_subcommand("vi", "variational-inequality iteration");
  add_common(vi);
  vi->add_option("--alpha", cfg.alpha0, "step size");
  vi->add_option("--schedule", schedule, "constant or harmonic")
      ->check(CLI::IsMember({"constant", "harmonic"}));
  vi->add_option("--method", method, "generalized, metric or unconstrained")
      ->check(CLI::IsMember({"generalized", "metric", "unconstrained"}));
  vi->add_option("--max-iter", cfg.max_iter, "iteration budget");
  vi->add_option("--tol", cfg.tol, "residual stopping tolerance");

  auto* minimize =
      app.add_subcommand("minimize", "subgradient minimization over a box");
  add_common(minimize);
  minimize->add_option("--scheme", scheme, "normres, normsub or polyak")
      ->check(CLI::IsMember({"normres", "normsub", "polyak"}));
  minimize->add_option("--alpha", cfg.alpha0, "step size");
  minimize->add_option("--max-iter", cfg.max_iter, "iteration budget");

  auto* verify = app.add_subcommand("verify", "seeded inequality sweeps");
  add_common(verify);
  verify->add_option("--samples", cfg.num_samples, "samples per check");
  verify->add_option("--checks", checks_csv,
                     "comma-separated check labels (default: all valid for p)");
  verify->add_option("--tol", cfg.tol, "pass threshold on worst margin");

  auto* stability =
      app.add_subcommand("stability", "parallel-halfspace stability sweep");
  add_common(stability);
  stability->add_option("--sigma-sweep", sigma_csv,
                        "comma-separated Hausdorff distances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const OutputTarget target{output};
  cfg.output_path = output;

  try {
    const LpSpace s(cfg.p, cfg.dim);
    const GeometryConstants gc;

    if (*altproj) {
      cfg.max_iter = max_sweeps;
      auto [sets, xref] =
          generate_feasibility_instance(cfg.seed, m_sets, cfg.dim, s);
      Vec x0 = Vec::Constant(cfg.dim, 1.5);
      auto r = alternating_generalized_projections(sets, x0, xref, s, gc,
                                                   max_sweeps, cfg.tol);
      target.write(render_trace(r.trace, cfg));
      return r.trace.converged ? 0 : 1;
    }

    if (*vi) {
      StepSchedule sched{schedule_kind(schedule), cfg.alpha0};
      auto [prob, ref] =
          generate_monotone_vi_instance(cfg.seed, cfg.dim, s, true);
      Vec x0 = Vec::Zero(cfg.dim);
      IterTrace t;
      if (method == "generalized")
        t = vi_iterate_generalized(prob, x0, sched, s, gc, cfg.max_iter,
                                   cfg.tol);
      else if (method == "metric")
        t = vi_iterate_metric(prob, x0, sched, s, gc, cfg.max_iter, cfg.tol);
      else
        t = unconstrained_duality_iteration(prob, x0, sched, s, gc,
                                            cfg.max_iter, cfg.tol);
      target.write(render_trace(t, cfg));
      return t.converged ? 0 : 1;
    }

    if (*minimize) {
      auto rng = rng_for(cfg.seed, "minimize");
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      Vec zstar(cfg.dim);
      for (int i = 0; i < cfg.dim; ++i) zstar[i] = u(rng);
      const SetDescriptor box =
          Box{Vec::Constant(cfg.dim, -2.0), Vec::Constant(cfg.dim, 2.0)};
      ConvexFunctional quad{
          [zstar](const Vec& x) { return (x - zstar).squaredNorm(); },
          [zstar](const Vec& x) { return (2.0 * (x - zstar)).eval(); }};
      const SubgradScheme sg = scheme == "normres"
                                   ? SubgradScheme::normalized_residual
                                   : scheme == "normsub"
                                         ? SubgradScheme::normalized_subgradient
                                         : SubgradScheme::polyak;
      StepSchedule sched{sg == SubgradScheme::polyak
                             ? StepSchedule::Kind::constant
                             : StepSchedule::Kind::harmonic,
                         cfg.alpha0};
      auto t = subgradient_minimize(quad, 0.0, box, Vec::Constant(cfg.dim, 1.9),
                                    sg, sched, s, gc, cfg.max_iter, cfg.tol);
      target.write(render_trace(t, cfg));
      return t.converged ? 0 : 1;
    }

    if (*verify) {
      std::vector<std::string> checks = split_list(checks_csv);
      if (checks.empty()) {
        for (const auto& l : known_check_labels()) {
          if ((l == "clarkson" || l == "f177") && cfg.p < 2.0) continue;
          if (l == "f161" && cfg.p > 2.0) continue;
          checks.push_back(l);
        }
      }
      auto recs = run_inequality_sweep(cfg, checks);
      target.write(render_report(recs, cfg));
      for (const auto& r : recs)
        if (!r.passed) return 1;
      return 0;
    }

    if (*stability) {
      Vec n = Vec::Zero(cfg.dim);
      n[0] = 1.0;
      Vec x = Vec::Zero(cfg.dim);
      x[0] = 1.0;
      std::ostringstream os;
      os << "sigma,distance,bound,margin,ratio\n";
      bool ok = true;
      for (const auto& tok : split_list(sigma_csv)) {
        const double sig = std::stod(tok);
        auto m = stability_experiment(Halfspace{n, 0.0}, Halfspace{n, -sig}, x,
                                      s, gc);
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      m.at("sigma"), m.at("distance"), m.at("bound"),
                      m.at("g6"), m.at("ratio"));
        os << buf;
        if (m.at("g6") < 0.0) ok = false;
      }
      target.write(os.str());
      return ok ? 0 : 1;
    }
  } catch (const DivergenceSignal& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
