#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "lpproj/harness.hpp"

using namespace lpproj;

TEST_CASE("config validation") {
  ExperimentConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  ExperimentConfig bad = cfg;
  bad.p = 1.0;
  CHECK_THROWS(bad.validate());
  bad = cfg;
  bad.num_samples = 0;
  CHECK_THROWS(bad.validate());
  bad = cfg;
  bad.tol = 0.0;
  CHECK_THROWS(bad.validate());
  bad = cfg;
  bad.dim = 0;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("per-label rng streams are deterministic and distinct") {
  auto a = rng_for(42, "alpha");
  auto b = rng_for(42, "alpha");
  auto c = rng_for(42, "beta");
  CHECK(a() == b());
  auto a2 = rng_for(42, "alpha");
  (void)a2();
  CHECK(rng_for(42, "alpha")() != c());
}

TEST_CASE("feasibility instance generator") {
  const LpSpace s(3, 4);
  auto [sets, w] = generate_feasibility_instance(7, 3, 4, s);
  CHECK(sets.size() == 3);
  for (const auto& set : sets) CHECK(contains(set, w, s, 1e-12));
  // bit-exact determinism
  auto [sets2, w2] = generate_feasibility_instance(7, 3, 4, s);
  CHECK((w - w2).cwiseAbs().maxCoeff() == 0.0);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto& h1 = std::get<Halfspace>(sets[i]);
    const auto& h2 = std::get<Halfspace>(sets2[i]);
    CHECK((h1.normal - h2.normal).cwiseAbs().maxCoeff() == 0.0);
    CHECK(h1.offset == h2.offset);
  }
  // m=1 trivial case
  auto [one, w1] = generate_feasibility_instance(9, 1, 2, LpSpace(2, 2));
  CHECK(one.size() == 1);
  CHECK(contains(one[0], w1, LpSpace(2, 2), 1e-12));
  CHECK_THROWS(generate_feasibility_instance(1, 0, 2, s));
}

TEST_CASE("monotone VI instance generator") {
  const LpSpace s2(2, 3);
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
    auto [prob, ref] = generate_monotone_vi_instance(seed, 3, s2);
    Eigen::MatrixXd sym = 0.5 * (prob.M + prob.M.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    CHECK_FALSE(ref.has_value());
  }
  // identity special case carries the analytic p=2 reference
  auto [prob, ref] = generate_monotone_vi_instance(11, 3, s2, true);
  REQUIRE(ref.has_value());
  CHECK((prob.M - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() ==
        0.0);
  const Vec expect = metric_project(prob.feasible_set, prob.f, s2).point;
  CHECK(lp_norm(*ref - expect, s2) == 0.0);
  // determinism
  auto [probb, refb] = generate_monotone_vi_instance(11, 3, s2, true);
  CHECK((prob.f - probb.f).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("inequality sweep") {
  ExperimentConfig cfg;
  cfg.p = 4.0;
  cfg.dim = 3;
  cfg.seed = 123;
  cfg.num_samples = 2000;
  cfg.tol = 1e-10;
  auto recs = run_inequality_sweep(cfg, {"clarkson", "j-identity", "f177"});
  REQUIRE(recs.size() == 3);
  for (const auto& r : recs) {
    CHECK(r.passed);
    CHECK(r.worst_margin >= -cfg.tol);
    CHECK(r.samples == 2000);
    CHECK_FALSE(r.worst_case_state.empty());
    // worst case state replays as valid JSON carrying the inputs
    auto st = nlohmann::json::parse(r.worst_case_state);
    CHECK(st.contains("x"));
  }

  cfg.p = 3.0;
  cfg.tol = 1e-8;  // projection margins carry the KKT bisection tolerance
  auto r7 = run_inequality_sweep(cfg, {"7.h", "7.c", "8.c", "5.c", "f52"});
  for (const auto& r : r7) CHECK(r.passed);
  cfg.tol = 1e-10;

  cfg.p = 1.5;
  auto r161 = run_inequality_sweep(cfg, {"f161", "v2-nonneg", "s2-lower"});
  for (const auto& r : r161) CHECK(r.passed);

  CHECK_THROWS(run_inequality_sweep(cfg, {"no-such-check"}));
  CHECK_THROWS(run_inequality_sweep(cfg, {"clarkson"}));  // p < 2
  cfg.p = 3.0;
  CHECK_THROWS(run_inequality_sweep(cfg, {"f161"}));  // p > 2
  cfg.num_samples = 0;
  CHECK_THROWS(run_inequality_sweep(cfg, {"j-identity"}));
}

TEST_CASE("sweep results are independent of execution order") {
  ExperimentConfig cfg;
  cfg.p = 3.0;
  cfg.dim = 2;
  cfg.seed = 77;
  cfg.num_samples = 200;
  auto ab = run_inequality_sweep(cfg, {"j-identity", "v2-nonneg"});
  auto ba = run_inequality_sweep(cfg, {"v2-nonneg", "j-identity"});
  CHECK(ab[0].worst_margin == ba[1].worst_margin);
  CHECK(ab[1].worst_margin == ba[0].worst_margin);
}

TEST_CASE("trace CSV schema") {
  IterTrace t;
  IterRecord r;
  r.n = 0;
  r.x = Vec::Zero(2);
  r.step_norm = 0.5;
  r.v2_to_ref = 1.25;
  r.fixed_point_residual = 0.5;
  r.vi_residual = -0.125;
  t.records.push_back(r);
  t.iterations = 1;
  std::ostringstream os;
  emit_trace_csv(t, os);
  CHECK(os.str() ==
        "n,step_norm,v2_to_ref,fixed_point_residual,vi_residual\n"
        "0,0.5,1.25,0.5,-0.125\n");
}

TEST_CASE("trace JSON round trip") {
  IterTrace t;
  for (int n = 0; n < 3; ++n) {
    IterRecord r;
    r.n = n;
    r.x = Vec::Zero(2);
    r.step_norm = 0.1 * n;
    r.v2_to_ref = 1.0 / (n + 1);
    r.fixed_point_residual = 0.1 * n;
    r.vi_residual = -1e-12 * n;
    t.records.push_back(r);
  }
  t.converged = true;
  t.iterations = 3;
  ExperimentConfig cfg;
  cfg.p = 3.0;
  cfg.output_format = "json";
  std::ostringstream os;
  emit_trace_json(t, cfg, os);
  auto doc = nlohmann::json::parse(os.str());
  CHECK(doc.at("config").at("p") == 3.0);
  CHECK(doc.at("summary").at("converged") == true);
  CHECK(doc.at("summary").at("iterations") == 3);
  REQUIRE(doc.at("records").size() == 3);
  for (int n = 0; n < 3; ++n) {
    const auto& rec = doc.at("records")[n];
    CHECK(rec.at("n") == n);
    CHECK(rec.at("step_norm").get<double>() == t.records[n].step_norm);
    CHECK(rec.at("v2_to_ref").get<double>() == t.records[n].v2_to_ref);
    CHECK(rec.at("vi_residual").get<double>() == t.records[n].vi_residual);
  }
}

TEST_CASE("emit_trace writes files and rejects empty traces") {
  ExperimentConfig cfg;
  cfg.output_path = "/tmp/lpproj_trace_test.csv";
  IterTrace empty;
  CHECK_THROWS(emit_trace(empty, cfg));
  IterTrace t;
  IterRecord r;
  r.x = Vec::Zero(2);
  t.records.push_back(r);
  t.iterations = 1;
  emit_trace(t, cfg);
  std::ifstream in(cfg.output_path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "n,step_norm,v2_to_ref,fixed_point_residual,vi_residual");
}

TEST_CASE("report emitters") {
  ReportRecord r;
  r.check_label = "clarkson";
  r.samples = 10;
  r.worst_margin = 0.25;
  r.worst_case_state = "{\"x\":[1,0]}";
  r.passed = true;
  std::ostringstream os;
  emit_report_csv({r}, os);
  CHECK(os.str() ==
        "check_label,samples,worst_margin,passed\n"
        "clarkson,10,0.25,true\n");
  std::ostringstream js;
  ExperimentConfig cfg;
  emit_report_json({r}, cfg, js);
  auto doc = nlohmann::json::parse(js.str());
  CHECK(doc.at("reports")[0].at("check_label") == "clarkson");
  CHECK(doc.at("reports")[0].at("worst_case").at("x")[0] == 1);
}

TEST_CASE("label catalog") {
  const auto& labels = known_check_labels();
  CHECK(labels.size() >= 17);
  ExperimentConfig cfg;
  cfg.p = 2.0;
  cfg.dim = 2;
  cfg.num_samples = 50;
  cfg.tol = 1e-8;
  for (const auto& l : labels) {
    auto recs = run_inequality_sweep(cfg, {l});
    CHECK(recs.size() == 1);
    CHECK(recs[0].passed);
  }
}
