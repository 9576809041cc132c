#include "doctest.h"

#include "foliate/errors.hpp"
#include "foliate/verify.hpp"
#include "helpers.hpp"

using namespace foliate;

namespace {

double choose(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("verdict names round-trip") {
  for (Verdict v : {Verdict::Pass, Verdict::Fail, Verdict::Inadmissible, Verdict::PreconditionViolation,
                    Verdict::Diagnostic})
    CHECK(verdict_from_string(to_string(v)) == v);
  CHECK(to_string(Verdict::PreconditionViolation) == "precondition-violation");
  CHECK_THROWS_AS(verdict_from_string("maybe"), ParseError);
}

TEST_CASE("divergence theorem on random trigonometric fields") {
  const Scenario w = build_warped_torus_3();
  const QuadratureGrid g = QuadratureGrid::full(w.manifold(), {32, 32, 32});
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const VerificationReport r = verify_divergence_theorem(w.manifold(), trig_field(w.manifold(), seed), g, 1e-9);
    INFO("seed " << seed);
    CHECK(std::abs(r.residual) <= 1e-9);
    CHECK(r.verdict == Verdict::Pass);
  }
}

TEST_CASE("integral formulas on the warped torus") {
  const Scenario w = build_warped_torus_4();
  Verifier v(w);
  CHECK(v.tolerance() >= kQuadratureFloor);
  CHECK(std::abs(v.self_test_residual()) <= 1e-9);
  const VerificationReport reeb = v.reeb();
  CHECK(reeb.verdict == Verdict::Pass);
  CHECK(std::abs(reeb.residual) <= reeb.tolerance);
  REQUIRE(reeb.refined_residual.has_value());
  CHECK(reeb.terms.at("convergence_delta") < kConvergenceFraction * reeb.tolerance);
  for (int r = 0; r < w.n(); ++r) {
    const VerificationReport m = v.main(r);
    INFO("r = " << r);
    CHECK(m.verdict == Verdict::Pass);
    CHECK(std::abs(m.residual) <= m.tolerance);
    CHECK(m.grid.total_weight == doctest::Approx(4.0 * std::pow(testing::kTwoPi, 4)).epsilon(1e-12));
  }
  for (const VerificationReport& l : v.leaf(0)) CHECK(l.verdict == Verdict::Pass);
  CHECK_THROWS_AS(v.main(w.n()), RangeError);
  CHECK_THROWS_AS(v.main(-1), RangeError);
  CHECK_THROWS_AS(v.leaf(0, "z=7"), UnsupportedLeafError);
}

TEST_CASE("pointwise, Codazzi and trace identities pass on the tilted torus") {
  const Scenario t = build_tilted_torus();
  VerifyOptions opt;
  opt.grid = {2, 2, 2, 16};
  Verifier v(t, opt);
  std::vector<VerificationReport> all = v.pointwise();
  for (auto& r : v.codazzi()) all.push_back(r);
  for (auto& r : v.trace_identities()) all.push_back(r);
  all.push_back(v.expected_values());
  CHECK(all.size() >= 10);
  for (const auto& r : all) {
    INFO(r.formula_id << " residual " << r.residual);
    CHECK(r.verdict == Verdict::Pass);
  }
}

TEST_CASE("inadmissible scenarios: sphere and Heisenberg") {
  const Scenario s3 = build_round_s3();
  Verifier v(s3);
  const VerificationReport m = v.main(0);
  CHECK(m.verdict == Verdict::Inadmissible);
  CHECK(m.residual == doctest::Approx(-4.0 * std::numbers::pi * std::numbers::pi).epsilon(1e-12));
  CHECK(m.admissibility_max == doctest::Approx(1.0).epsilon(1e-12));

  const Scenario h = build_heisenberg();
  Verifier vh(h);
  const VerificationReport mh = vh.main(0);
  CHECK(mh.verdict == Verdict::Inadmissible);
  CHECK(std::abs(mh.residual) <= 1e-12);
  CHECK(mh.terms.at("riemannian_residual") == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK_THROWS_AS(vh.leaf(0), UnsupportedLeafError);
}

TEST_CASE("closed-form-c: precondition and pass") {
  const Scenario flat = build_flat_torus();
  VerifyOptions opt;
  opt.grid = {2, 2, 2, 2};
  Verifier v(flat, opt);
  CHECK(v.closed_form_c(0.0).verdict == Verdict::Pass);
  const Scenario w = build_warped_torus_4();
  Verifier vw(w);
  const VerificationReport bad = vw.closed_form_c(1.0);
  CHECK(bad.verdict == Verdict::PreconditionViolation);
  CHECK_FALSE(bad.notes.empty());
  CHECK(vw.sigma2_image(1.0).verdict == Verdict::Diagnostic);
}

TEST_CASE("closed forms and recurrences") {
  for (int n = 1; n <= 10; ++n) {
    const auto e = einstein_recurrence(n, 3.0, 2.0);
    const auto p = pcurv_recurrence(n, 0.7, 2.0);
    REQUIRE(e.size() >= static_cast<std::size_t>(n + 1));
    for (int r = 0; r <= n; ++r) {
      // Even n, even r: (C/n)^{r/2} binom(n/2, r/2) Vol.
      double expect_e = 0.0, expect_p = 0.0;
      if (n % 2 == 0 && r % 2 == 0) {
        expect_e = std::pow(3.0 / n, r / 2) * choose(n / 2, r / 2) * 2.0;
        expect_p = std::pow(0.7, r / 2) * choose(n / 2, r / 2) * 2.0;
      }
      INFO("n = " << n << " r = " << r);
      if (n % 2 == 0) {
        CHECK(e[static_cast<std::size_t>(r)] == doctest::Approx(expect_e).epsilon(1e-13));
        CHECK(einstein_closed_form(n, r, 3.0, 2.0) == doctest::Approx(expect_e).epsilon(1e-13));
        CHECK(p[static_cast<std::size_t>(r)] == doctest::Approx(expect_p).epsilon(1e-13));
        CHECK(pcurv_closed_form(n, r, 0.7, 2.0) == doctest::Approx(expect_p).epsilon(1e-13));
      }
      if (r % 2 == 1) CHECK(e[static_cast<std::size_t>(r)] == 0.0);
    }
  }
  // The n/2-exponent variant differs from r/2 whenever r < n.
  CHECK(einstein_closed_form_n_exponent(4, 2, 3.0, 1.0) == doctest::Approx(std::pow(0.75, 2) * 2.0));
  CHECK(einstein_closed_form(4, 2, 3.0, 1.0) == doctest::Approx(0.75 * 2.0));

  CHECK(verify_closed_form_einstein(10, 3.0, 1.0).verdict == Verdict::Pass);
  CHECK(verify_closed_form_pcurv_recurrence(10, 0.5, 1.0).verdict == Verdict::Pass);
}

TEST_CASE("binomials and umbilical coefficients") {
  CHECK(binomial(12, 6) == 924);
  CHECK(binomial(5, -1) == 0);
  CHECK(binomial(5, 6) == 0);
  for (int n = 1; n <= 12; ++n)
    for (int r = 0; r <= n; ++r) CHECK(newton_umbilical_coefficient(n, r) == binomial(n - 1, r));
  for (int n = 2; n <= 12; ++n)
    for (int r = 1; r <= n - 1; ++r) CHECK(umbilical_binomial_identity_defect(n, r) == 0);
}

TEST_CASE("umbilical reduction") {
  CHECK(verify_umbilical_reduction(4, 2, 0.3, -1.1, 0.7) <= 1e-11);
  CHECK(verify_umbilical_reduction(6, 0, 1.5, 2.0, 0.0) <= 1e-11);
  const VerificationReport suite = verify_umbilical_suite(1000, 1);
  CHECK(suite.verdict == Verdict::Pass);
  CHECK(suite.residual <= 1e-11);
}
