// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "foliate/scenarios.hpp"
#include "foliate/verify.hpp"

using namespace foliate;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects "name=value" fragments and the running verdict.
class Ledger {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      failures_ << " [failed: " << what << "]";
    }
  }
  void note(const std::string& key, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", value);
    parts_ << (parts_.tellp() > 0 ? ", " : "") << key << "=" << buf;
  }
  Outcome outcome() const { return {pass_, parts_.str() + failures_.str()}; }

 private:
  bool pass_ = true;
  std::ostringstream parts_, failures_;
};

Mat random_symmetric(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = u(rng);
  return a;
}

Point random_point(std::mt19937_64& rng, const Manifold& M) {
  Point p(M.dim());
  for (int i = 0; i < M.dim(); ++i) p[i] = std::uniform_real_distribution<double>(0.0, M.periods()[i])(rng);
  return p;
}

Outcome algebraic_suite() {
  Ledger l;
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<int> dim(1, 6);
  double trace = 0.0, tn = 0.0, rec = 0.0, s2 = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = dim(rng);
    const Mat A = random_symmetric(rng, n);
    for (int r = 0; r < n; ++r) trace = std::max(trace, trace_identities(r, A).max());
    const NewtonConsistency c = newton_consistency(A);
    tn = std::max(tn, c.T_n);
    rec = std::max(rec, c.recursive_vs_explicit);
    const SymmetricFunctions f = symmetric_functions(A);
    if (n >= 2) s2 = std::max(s2, std::abs(2.0 * f.sigma[2] - (f.tau[1] * f.tau[1] - f.tau[2])));
  }
  l.note("trace", trace);
  l.note("T_n", tn);
  l.note("recursive_vs_explicit", rec);
  l.note("sigma2_tau", s2);
  l.require(std::max({trace, tn, rec, s2}) <= 1e-11, "residual <= 1e-11");
  return l.outcome();
}

// Smooth D-section sum f_i e_i (+ f_N N) with trigonometric coefficients.
Vector<Jet2> d_field(const LocalFoliation& lf, const Point& p, int salt, bool with_normal) {
  const int m = lf.dim();
  Vector<Jet2> X(m);
  for (int k = 0; k < m; ++k) X[k] = Jet2(0.0);
  auto coeff = [&](int i) {
    Jet2 s(0.3 * (i + 1));
    for (int a = 0; a < m; ++a) {
      const double w = 1.0 + (salt + i + a) % 3;
      s = s + (0.2 / (a + 1)) * sin(w * Jet2::variable(p[a], a) + 0.1 * salt);
    }
    return s;
  };
  for (int i = 0; i < lf.n(); ++i)
    for (int k = 0; k < m; ++k) X[k] = X[k] + coeff(i) * lf.leaf_frame()[static_cast<std::size_t>(i)][k];
  if (with_normal) {
    const Jet2 f = coeff(lf.n());
    for (int k = 0; k < m; ++k) X[k] = X[k] + f * lf.normal_field()[k];
  }
  return X;
}

Outcome differential_suite() {
  Ledger l;
  double codazzi = 0.0, divT = 0.0, divX_leaf = 0.0, divX_N = 0.0, divX_D = 0.0, frame_identity = 0.0, prop = 0.0;
  std::mt19937_64 rng(2002);
  for (const Scenario& s : {build_warped_torus_3(), build_warped_torus_4()}) {
    for (int trial = 0; trial < 200; ++trial) {
      const Point p = random_point(rng, s.manifold());
      const LocalFoliation lf(s.fm, p);
      const int n = lf.n();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) codazzi = std::max(codazzi, codazzi_residual(lf, lf.leaf(i), lf.leaf(j)));
      for (int r = 0; r <= n - 1; ++r) {
        const Vec d = lf.divF_newton_direct(r) - lf.divF_newton_formula(r);
        divT = std::max(divT, d.cwiseAbs().maxCoeff());
        prop = std::max(prop, std::abs(divergence_TrZ_residual(lf, r)));
      }
      divX_leaf = std::max(divX_leaf, std::abs(divergence_split_residual(lf, d_field(lf, p, trial, false), false)));
      divX_N = std::max(divX_N, std::abs(divergence_split_residual(lf, lf.normal_field(), false)));
      divX_D = std::max(divX_D, std::abs(divergence_split_residual(lf, d_field(lf, p, trial, true), true)));
      frame_identity = std::max(frame_identity, adapted_frame_identity_residual(lf));
    }
  }
  l.note("codazzi", codazzi);
  l.note("divF_T_r", divT);
  l.note("divX_leaf", divX_leaf);
  l.note("divX_N", divX_N);
  l.note("divX_D", divX_D);
  l.note("frame_identity", frame_identity);
  l.note("div_TrZ", prop);
  l.require(codazzi <= 1e-8, "codazzi <= 1e-8");
  l.require(divT <= 1e-8, "Div_F T_r agreement <= 1e-8");
  l.require(std::max({divX_leaf, divX_N, divX_D}) <= 1e-9, "divergence splitting <= 1e-9");
  l.require(frame_identity <= 1e-8, "frame frame_identity <= 1e-8");
  l.require(prop <= 1e-8, "Div_F(T_r Z) <= 1e-8");
  return l.outcome();
}

// Integral reports from criterion 3, reused by criterion 8.
std::vector<VerificationReport> g_integral_reports;

Outcome integral_suite() {
  Ledger l;
  double worst = 0.0;
  int count = 0;
  for (const Scenario& s : {build_warped_torus_3(), build_warped_torus_4(), build_tilted_torus()}) {
    Verifier v(s);
    const auto counts = v.grid().counts();
    l.require(counts.back() <= 64 && counts.front() <= 4, s.name + " grid within 4 x ... x 64");
    std::vector<VerificationReport> reps{v.reeb()};
    for (int r = 0; r <= std::min(1, s.n() - 1); ++r) {
      reps.push_back(v.main(r));
      for (auto& leaf : v.leaf(r)) reps.push_back(leaf);
    }
    for (const auto& rep : reps) {
      ++count;
      worst = std::max(worst, std::abs(rep.residual));
      l.require(rep.verdict == Verdict::Pass && std::abs(rep.residual) <= 1e-6,
                s.name + " " + rep.formula_id + " (" + to_string(rep.verdict) + ")");
      g_integral_reports.push_back(rep);
    }
  }
  l.note("reports", count);
  l.note("max_abs_residual", worst);
  return l.outcome();
}

Outcome heisenberg_suite() {
  Ledger l;
  const Scenario h = build_heisenberg();
  const LocalFoliation lf(h.fm, Point::Zero(3));
  const double ricP = lf.ricci_P(lf.normal());
  const double ricR = lf.ricci_P(lf.normal(), CurvatureKind::Riemannian);
  Verifier v(h);
  const VerificationReport m = v.main(0);
  const double vol = m.terms.at("volume");
  const double riem = m.terms.at("riemannian_residual");
  l.note("RicP_NN", ricP);
  l.note("Ric_NN", ricR);
  l.note("residual_P", m.residual);
  l.note("residual_R", riem);
  l.note("volume", vol);
  l.require(std::abs(ricP) <= 1e-9, "Ric^P_NN = 0");
  l.require(std::abs(ricR - 0.25) <= 1e-9, "Ric_NN = 1/4");
  l.require(std::abs(m.residual) <= 1e-9, "r = 0 residual with R^P");
  l.require(std::abs(riem + 0.25 * vol) <= 1e-9, "r = 0 residual with R equals -0.25 Vol");
  return l.outcome();
}

Outcome sphere_suite() {
  Ledger l;
  const Scenario s3 = build_round_s3();
  Verifier v(s3);
  const VerificationReport m = v.main(0);
  l.note("admissibility", m.admissibility_max);
  l.note("residual", m.residual);
  l.require(std::abs(m.admissibility_max - 1.0) <= 1e-9, "admissibility 1.0");
  l.require(std::abs(m.residual + 4.0 * std::numbers::pi * std::numbers::pi) <= 1e-6, "residual -4 pi^2");
  l.require(m.verdict == Verdict::Inadmissible, "verdict inadmissible");
  return l.outcome();
}

Outcome closed_form_suite() {
  Ledger l;
  const VerificationReport e = verify_closed_form_einstein(10, 3.0, 1.0);
  const VerificationReport p = verify_closed_form_pcurv_recurrence(10, 0.5, 1.0);
  l.note("einstein", e.residual);
  l.note("pcurv", p.residual);
  l.require(e.verdict == Verdict::Pass && e.residual <= 1e-12, "einstein recurrence");
  l.require(p.verdict == Verdict::Pass && p.residual <= 1e-12, "pcurv recurrence");
  std::int64_t coeff_defect = 0, identity_defect = 0;
  for (int n = 1; n <= 12; ++n)
    for (int r = 0; r <= n; ++r) {
      coeff_defect = std::max<std::int64_t>(
          coeff_defect, std::abs(n * newton_umbilical_coefficient(n, r) - (n - r) * binomial(n, r)));
      if (n >= 2 && r >= 1 && r <= n - 1)
        identity_defect = std::max<std::int64_t>(identity_defect, std::abs(umbilical_binomial_identity_defect(n, r)));
    }
  l.note("a_r_defect", static_cast<double>(coeff_defect));
  l.note("binomial_identity_defect", static_cast<double>(identity_defect));
  l.require(coeff_defect == 0, "a_r exact");
  l.require(identity_defect == 0, "binomial identity exact");
  return l.outcome();
}

Outcome umbilical_suite() {
  Ledger l;
  const VerificationReport u = verify_umbilical_suite(1000, 7);
  l.note("max_residual", u.residual);
  l.require(u.verdict == Verdict::Pass && u.residual <= 1e-11, "umbilical residual <= 1e-11");
  return l.outcome();
}

Outcome calibration_suite() {
  Ledger l;
  double selftest = 0.0;
  for (const Scenario& s : {build_warped_torus_3(), build_warped_torus_4(), build_tilted_torus()}) {
    // Field frequencies are at most 3 on the flat axes; the warps live on z.
    std::vector<int> counts(static_cast<std::size_t>(s.m()), 8);
    counts.back() = 64;
    const QuadratureGrid g = QuadratureGrid::full(s.manifold(), counts);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto r = verify_divergence_theorem(s.manifold(), trig_field(s.manifold(), seed), g, 1e-9);
      selftest = std::max(selftest, std::abs(r.residual));
    }
    Verifier v(s);
    selftest = std::max(selftest, std::abs(v.self_test_residual()));
  }
  l.note("divergence_selftest", selftest);
  l.require(selftest <= 1e-9, "self-test <= 1e-9");
  double worst_fraction = 0.0;
  for (const auto& rep : g_integral_reports) {
    const auto it = rep.terms.find("convergence_delta");
    if (it == rep.terms.end()) {
      l.require(false, rep.scenario + " " + rep.formula_id + " has no refined residual");
      continue;
    }
    worst_fraction = std::max(worst_fraction, it->second / rep.tolerance);
  }
  l.note("max_delta_over_tol", worst_fraction);
  l.require(!g_integral_reports.empty(), "integral reports available");
  l.require(worst_fraction < 0.1, "grid doubling changes residuals by < 10% of tolerance");
  return l.outcome();
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;  // 0: no runtime bound
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "algebraic suite", 5.0, algebraic_suite},
      {2, "differential identities", 30.0, differential_suite},
      {3, "integral formulas", 60.0, integral_suite},
      {4, "projected-curvature discrimination", 0.0, heisenberg_suite},
      {5, "inadmissibility diagnostic", 0.0, sphere_suite},
      {6, "closed-form corollaries", 1.0, closed_form_suite},
      {7, "umbilical reduction", 0.0, umbilical_suite},
      {8, "stack self-calibration", 0.0, calibration_suite},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (c.budget_seconds > 0.0 && secs >= c.budget_seconds) {
      o.pass = false;
      o.detail += " [failed: runtime budget]";
    }
    std::printf("%s %d %s: %s (%.2f s", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    if (c.budget_seconds > 0.0) std::printf(" < %.0f s", c.budget_seconds);
    std::printf(")\n");
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
