#include "lpproj/harness.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace lpproj {

using json = nlohmann::json;

void ExperimentConfig::validate() const {
  if (!(p > 1.0)) throw std::invalid_argument("config: p must exceed 1");
  if (dim < 1) throw std::invalid_argument("config: dim must be >= 1");
  if (num_samples < 1) throw std::invalid_argument("config: num_samples must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("config: tol must be positive");
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Vec draw_vec(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Vec x(dim);
  for (int i = 0; i < dim; ++i) x[i] = u(rng);
  return x;
}

json vec_to_json(const Vec& x) {
  json a = json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) a.push_back(x[i]);
  return a;
}

}  // namespace

std::mt19937_64 rng_for(std::uint64_t seed, const std::string& label) {
  return std::mt19937_64(splitmix64(seed ^ fnv1a(label)));
}

std::pair<std::vector<SetDescriptor>, Vec> generate_feasibility_instance(
    std::uint64_t seed, int m, int dim, const LpSpace& s) {
  if (m < 1) throw std::invalid_argument("need m >= 1 sets");
  auto rng = rng_for(seed, "feasibility");
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const Vec witness = draw_vec(rng, dim);
  std::vector<SetDescriptor> sets;
  std::vector<Vec> normals;
  for (int i = 0; i < m; ++i) {
    Vec n;
    // reject near-parallel pairs: they make the sweep zig-zag very slowly
    for (int tries = 0; tries < 64; ++tries) {
      n = draw_vec(rng, dim);
      if (n.norm() < 1e-6) continue;
      n /= n.norm();
      bool ok = true;
      for (const auto& prev : normals)
        if (std::abs(prev.dot(n)) > 0.9) ok = false;
      if (ok) break;
    }
    normals.push_back(n);
    const double slack = (i % 2 == 0) ? 0.0 : u01(rng);
    sets.push_back(Halfspace{n, n.dot(witness) + slack});
  }
  return {sets, witness};
}

std::pair<VIProblem, std::optional<Vec>> generate_monotone_vi_instance(
    std::uint64_t seed, int dim, const LpSpace& s, bool identity_special) {
  auto rng = rng_for(seed, "vi");
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Vec lo(dim), hi(dim);
  for (int i = 0; i < dim; ++i) {
    lo[i] = -1.0 - u01(rng);
    hi[i] = 1.0 + u01(rng);
  }
  Box box{lo, hi};
  const Vec f = draw_vec(rng, dim);
  if (identity_special) {
    VIProblem prob(Eigen::MatrixXd::Identity(dim, dim), Vec::Zero(dim), f,
                   SetDescriptor{box});
    std::optional<Vec> ref;
    if (s.p == 2.0)
      ref = metric_project(SetDescriptor{box}, f, s).point;  // P_box(f - b)
    return {std::move(prob), ref};
  }
  Eigen::MatrixXd Q(dim, dim), K(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Q(i, j) = 2.0 * u01(rng) - 1.0;
      K(i, j) = 2.0 * u01(rng) - 1.0;
    }
  Eigen::MatrixXd M = Q.transpose() * Q + 0.5 * (K - K.transpose());
  VIProblem prob(std::move(M), draw_vec(rng, dim), f, SetDescriptor{box});
  return {std::move(prob), std::nullopt};
}

// ---------------------------------------------------------------------------
// Inequality sweep

namespace {

// One sampled margin; fills `state` with the replayable inputs.
using CheckFn = std::function<double(std::mt19937_64&, const LpSpace&,
                                     const GeometryConstants&, json& state)>;

double rel_err_margin(double err, double scale) { return -err / scale; }

// margin of the J defining identities, as negative relative error
double check_j_identity(std::mt19937_64& rng, const LpSpace& s,
                        const GeometryConstants&, json& st) {
  const Vec x = draw_vec(rng, (int)s.dim);
  st["x"] = vec_to_json(x);
  const Vec jx = duality_map(x, s);
  const double nx = lp_norm(x, s);
  const double e1 = std::abs(jx.dot(x) - nx * nx) / std::max(1.0, nx * nx);
  const double e2 = std::abs(dual_norm(jx, s) - nx) / std::max(1.0, nx);
  return rel_err_margin(std::max(e1, e2), 1.0);
}

double check_j_roundtrip(std::mt19937_64& rng, const LpSpace& s,
                         const GeometryConstants&, json& st) {
  const Vec x = draw_vec(rng, (int)s.dim);
  st["x"] = vec_to_json(x);
  const double err = lp_norm(inverse_duality_map(duality_map(x, s), s) - x, s) /
                     std::max(1.0, lp_norm(x, s));
  return -err * 1e-2;  // scaled so the shared -1e-10 threshold maps to 1e-8
}

struct ProjSample {
  SetDescriptor set;
  Vec x;
  std::vector<Vec> test_points;
};

ProjSample random_halfspace_sample(std::mt19937_64& rng, const LpSpace& s,
                                   json& st) {
  Vec n = draw_vec(rng, (int)s.dim);
  if (n.cwiseAbs().maxCoeff() < 1e-6) n[0] = 1.0;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double c = u(rng);
  const Vec x = draw_vec(rng, (int)s.dim);
  st["normal"] = vec_to_json(n);
  st["offset"] = c;
  st["x"] = vec_to_json(x);
  ProjSample ps{Halfspace{n, c}, x, {}};
  ps.test_points = sample_feasible(ps.set, s, rng, 16);
  return ps;
}

}  // namespace

const std::vector<std::string>& known_check_labels() {
  static const std::vector<std::string> labels = {
      "j-identity", "j-roundtrip", "j-monotone", "clarkson",
      "parallelogram", "s2-lower", "duality-monotonicity", "v2-nonneg",
      "v2-bracket", "v2-convexity", "5.c", "f52", "7.c", "7.h", "8.c",
      "f177", "f161"};
  return labels;
}

std::vector<ReportRecord> run_inequality_sweep(
    const ExperimentConfig& cfg, const std::vector<std::string>& checks) {
  cfg.validate();
  const LpSpace s(cfg.p, cfg.dim);
  const GeometryConstants gc;

  auto margins_min = [](const PropertyMargins& m) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& [k, v] : m) worst = std::min(worst, v);
    return worst;
  };

  std::map<std::string, CheckFn> catalog;
  catalog["j-identity"] = check_j_identity;
  catalog["j-roundtrip"] = check_j_roundtrip;
  catalog["j-monotone"] = [](std::mt19937_64& rng, const LpSpace& s,
                             const GeometryConstants&, json& st) {
    const Vec x = draw_vec(rng, (int)s.dim), y = draw_vec(rng, (int)s.dim);
    st["x"] = vec_to_json(x);
    st["y"] = vec_to_json(y);
    return (duality_map(x, s) - duality_map(y, s)).dot(x - y);
  };
  catalog["clarkson"] = [](std::mt19937_64& rng, const LpSpace& s,
                           const GeometryConstants&, json& st) {
    const Vec x = draw_vec(rng, (int)s.dim), y = draw_vec(rng, (int)s.dim);
    st["x"] = vec_to_json(x);
    st["y"] = vec_to_json(y);
    return check_clarkson(x, y, s);
  };
  catalog["parallelogram"] = [](std::mt19937_64& rng, const LpSpace& s,
                                const GeometryConstants& gc, json& st) {
    const Vec x = draw_vec(rng, (int)s.dim), y = draw_vec(rng, (int)s.dim);
    st["x"] = vec_to_json(x);
    st["y"] = vec_to_json(y);
    return check_parallelogram_lower(x, y, s, gc);
  };
  catalog["s2-lower"] = [](std::mt19937_64& rng, const LpSpace& s,
                           const GeometryConstants& gc, json& st) {
    const Vec x = draw_vec(rng, (int)s.dim), xi = draw_vec(rng, (int)s.dim);
    st["x"] = vec_to_json(x);
    st["xi"] = vec_to_json(xi);
    return lemma_s2_sandwich(x, xi, s, gc).first;
  };
  catalog["duality-monotonicity"] = [](std::mt19937_64& rng, const LpSpace& s,
                                       const GeometryConstants& gc, json& st) {
    const Vec x = draw_vec(rng, (int)s.dim), y = draw_vec(rng, (int)s.dim);
    st["x"] = vec_to_json(x);
    st["y"] = vec_to_json(y);
    return check_duality_monotonicity(x, y, s, gc).first;
  };
  catalog["v2-nonneg"] = [](std::mt19937_64& rng, const LpSpace& s,
                            const GeometryConstants&, json& st) {
    const Vec x = draw_vec(rng, (int)s.dim), xi = draw_vec(rng, (int)s.dim);
    st["x"] = vec_to_json(x);
    st["xi"] = vec_to_json(xi);
    return v2(x, xi, s).value;
  };
  catalog["v2-bracket"] = [](std::mt19937_64& rng, const LpSpace& s,
                             const GeometryConstants&, json& st) {
    const Vec x = draw_vec(rng, (int)s.dim), xi = draw_vec(rng, (int)s.dim);
    st["x"] = vec_to_json(x);
    st["xi"] = vec_to_json(xi);
    const auto lv = v2(x, xi, s);
    return std::min(lv.value - lv.lower_bound, lv.upper_bound - lv.value);
  };
  catalog["v2-convexity"] = [](std::mt19937_64& rng, const LpSpace& s,
                               const GeometryConstants&, json& st) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const Vec x = draw_vec(rng, (int)s.dim);
    const Vec a = draw_vec(rng, (int)s.dim), b = draw_vec(rng, (int)s.dim);
    const double t = u01(rng);
    st["x"] = vec_to_json(x);
    st["xi1"] = vec_to_json(a);
    st["xi2"] = vec_to_json(b);
    st["t"] = t;
    return t * v2(x, a, s).value + (1.0 - t) * v2(x, b, s).value -
           v2(x, (t * a + (1.0 - t) * b).eval(), s).value;
  };
  auto projection_check = [&](const std::string& which) -> CheckFn {
    return [which, margins_min](std::mt19937_64& rng, const LpSpace& s,
                                const GeometryConstants& gc, json& st) {
      ProjSample ps = random_halfspace_sample(rng, s, st);
      if (which == "5.c" || which == "f52") {
        const Vec xbar = metric_project(ps.set, ps.x, s, gc).point;
        return check_metric_vp(ps.x, xbar, ps.set, s, ps.test_points)[which];
      }
      if (which == "7.c" || which == "7.h") {
        const Vec xhat = project_generalized_Pi(ps.x, ps.set, s, gc).point;
        return check_generalized_vp(ps.x, xhat, ps.set, s,
                                    ps.test_points)[which];
      }
      if (which == "8.c") {
        const Vec phi = duality_map(ps.x, s);
        const Vec pt = generalized_project_dual(ps.set, phi, s, gc).point;
        return check_dual_vp(phi, pt, ps.set, s, ps.test_points)[which];
      }
      // strong uniqueness at a random feasible comparison point
      const Vec xbar = metric_project(ps.set, ps.x, s, gc).point;
      const Vec& xi = ps.test_points.front();
      auto m = check_strong_uniqueness(ps.x, xbar, xi, s);
      return m.count(which) ? m[which] : margins_min(m);
    };
  };
  for (const char* lbl : {"5.c", "f52", "7.c", "7.h", "8.c", "f177", "f161"})
    catalog[lbl] = projection_check(lbl);

  std::vector<ReportRecord> out;
  for (const auto& label : checks) {
    auto it = catalog.find(label);
    if (it == catalog.end())
      throw std::invalid_argument("unknown check label: " + label);
    if ((label == "clarkson" || label == "f177") && cfg.p < 2.0)
      throw std::invalid_argument(label + " requires p >= 2");
    if (label == "f161" && cfg.p > 2.0)
      throw std::invalid_argument("f161 requires p <= 2");
    auto rng = rng_for(cfg.seed, label);
    ReportRecord rec;
    rec.check_label = label;
    rec.samples = cfg.num_samples;
    rec.worst_margin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < cfg.num_samples; ++k) {
      json st;
      const double m = it->second(rng, s, gc, st);
      if (m < rec.worst_margin) {
        rec.worst_margin = m;
        st["p"] = cfg.p;
        st["dim"] = cfg.dim;
        st["sample_index"] = k;
        rec.worst_case_state = st.dump();
      }
    }
    rec.passed = rec.worst_margin >= -cfg.tol;
    out.push_back(std::move(rec));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Emitters

void emit_trace_csv(const IterTrace& trace, std::ostream& os) {
  os << "n,step_norm,v2_to_ref,fixed_point_residual,vi_residual\n";
  for (const auto& r : trace.records)
    os << r.n << ',' << fmt17(r.step_norm) << ',' << fmt17(r.v2_to_ref) << ','
       << fmt17(r.fixed_point_residual) << ',' << fmt17(r.vi_residual) << '\n';
}

namespace {

json config_to_json(const ExperimentConfig& cfg) {
  return json{{"p", cfg.p},
              {"dim", cfg.dim},
              {"seed", cfg.seed},
              {"num_samples", cfg.num_samples},
              {"max_iter", cfg.max_iter},
              {"tol", cfg.tol},
              {"alpha0", cfg.alpha0},
              {"schedule_kind", cfg.schedule_kind == StepSchedule::Kind::constant
                                    ? "constant"
                                    : "harmonic"}};
}

}  // namespace

void emit_trace_json(const IterTrace& trace, const ExperimentConfig& cfg,
                     std::ostream& os) {
  json records = json::array();
  for (const auto& r : trace.records)
    records.push_back(json{{"n", r.n},
                           {"step_norm", r.step_norm},
                           {"v2_to_ref", r.v2_to_ref},
                           {"fixed_point_residual", r.fixed_point_residual},
                           {"vi_residual", r.vi_residual}});
  json doc{{"config", config_to_json(cfg)},
           {"records", records},
           {"summary",
            {{"converged", trace.converged}, {"iterations", trace.iterations}}}};
  os << doc.dump(2) << '\n';
}

void emit_trace(const IterTrace& trace, const ExperimentConfig& cfg) {
  if (trace.records.empty())
    throw std::invalid_argument("emit_trace: trace is empty");
  std::ofstream os(cfg.output_path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + cfg.output_path);
  if (cfg.output_format == "json")
    emit_trace_json(trace, cfg, os);
  else
    emit_trace_csv(trace, os);
}

void emit_report_csv(const std::vector<ReportRecord>& records,
                     std::ostream& os) {
  os << "check_label,samples,worst_margin,passed\n";
  for (const auto& r : records)
    os << r.check_label << ',' << r.samples << ',' << fmt17(r.worst_margin)
       << ',' << (r.passed ? "true" : "false") << '\n';
}

void emit_report_json(const std::vector<ReportRecord>& records,
                      const ExperimentConfig& cfg, std::ostream& os) {
  json arr = json::array();
  for (const auto& r : records)
    arr.push_back(json{{"check_label", r.check_label},
                       {"samples", r.samples},
                       {"worst_margin", r.worst_margin},
                       {"worst_case", json::parse(r.worst_case_state)},
                       {"passed", r.passed}});
  json doc{{"config", config_to_json(cfg)}, {"reports", arr}};
  os << doc.dump(2) << '\n';
}

}  // namespace lpproj
