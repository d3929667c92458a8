#include "doctest.h"

#include <cmath>
#include <numeric>

#include "bigbang/bounce.hpp"
#include "bigbang/pipeline.hpp"

using namespace bigbang;

namespace {
const double kSqrt2 = std::sqrt(2.0);

ReducedModel full(const Rational& w) {
  CosmologyParams p;
  p.w = w;
  return reduce(p);
}

// Drop the shared a = 0 endpoint so the branch can be interpolated.
Trajectory interior(const Trajectory& t) {
  Trajectory out = t;
  out.samples.clear();
  for (const auto& s : t.samples)
    if (s.a > 0 && std::isfinite(s.p_mom)) out.samples.push_back(s);
  return out;
}
}  // namespace

TEST_CASE("real powers of negative numbers") {
  CHECK(real_pow_rational(-8.0, Rational(1, 3)) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(real_pow_rational(-1.0, Rational(2, 9)) == 1.0);
  CHECK(real_pow_rational(4.0, Rational(1, 2)) == 2.0);
  CHECK_THROWS_AS(real_pow_rational(-1.0, Rational(1, 4)), ImaginaryBranchError);
  for (int q = 3; q <= 33; q += 2)
    for (int p = 1; p < q; ++p)
      if (std::gcd(p, q) == 1) CHECK((real_pow_rational(-1.0, Rational(p, q)) > 0) == (p % 2 == 0));
}

TEST_CASE("zero-energy closed form") {
  const ExponentTriple half = exponents_of(Rational(1, 2));
  const ExponentTriple seven = exponents_of(Rational(7, 3));
  CHECK(closed_form_zero_energy(half, 1.0) == doctest::Approx(1.61887).epsilon(1e-5));
  CHECK(closed_form_zero_energy(seven, 1.0) == doctest::Approx(1.47875).epsilon(1e-5));
  CHECK(closed_form_zero_energy(seven, 0.0) == 0.0);
  CHECK_THROWS_AS(closed_form_zero_energy(half, -1.0), DomainError);

  // substitution into a'' = -alpha a^-(alpha+1) by central differences in delta
  for (const ExponentTriple& e : {half, seven}) {
    for (double d : {1e-6, 1e-3, 1.0}) {
      const double h = 1e-3 * d;
      const double am = closed_form_zero_energy(e, d - h), a0 = closed_form_zero_energy(e, d),
                   ap = closed_form_zero_energy(e, d + h);
      const double acc = (ap - 2 * a0 + am) / (h * h);
      const double rhs = -e.alpha_f * std::pow(a0, -e.alpha_f - 1.0);
      CHECK(std::fabs(acc / rhs - 1.0) < 1e-5);
      const double vel = (ap - am) / (2 * h);
      CHECK(std::fabs(0.5 * vel * vel / std::pow(a0, -e.alpha_f) - 1.0) < 1e-5);
    }
  }
}

TEST_CASE("leading order signs") {
  const AsymptoticForm f2 = asymptotic_form(ReducedModel::pure_power(Rational(2)));
  CHECK(f2.gamma == Rational(2, 9));
  CHECK(leading_order(f2, -1.0) == doctest::Approx(f2.psi0));
  const AsymptoticForm f7 = asymptotic_form(ReducedModel::pure_power(Rational(7, 3)));
  CHECK(leading_order(f7, -1.0) == doctest::Approx(-f7.psi0));
  const AsymptoticForm fh = asymptotic_form(ReducedModel::pure_power(Rational(1, 2)));
  CHECK(leading_order(fh, 1.0) == doctest::Approx(std::cbrt(3 * kSqrt2)));
  CHECK(fh.omega1 > 0);
  CHECK(fh.omega2 > 0);
  CHECK_THROWS_AS(leading_order(asymptotic_form(ReducedModel::pure_power(Rational(5, 3))), -1.0),
                  ImaginaryBranchError);
}

TEST_CASE("time to singularity matches the closed form") {
  const ReducedModel m = ReducedModel::pure_power(Rational(2));
  const double a = 0.4;
  const double delta = time_to_singularity(m, 0.0, a);
  CHECK(closed_form_zero_energy(m.exps, delta) == doctest::Approx(a).epsilon(1e-12));
}

TEST_CASE("exponent fit") {
  SUBCASE("pure power") {
    const ReducedModel m = ReducedModel::pure_power(Rational(1, 2));
    const Trajectory t = approach_run(m, 0.0, 1.0, 1e-10);
    const FitResult f = fit_exponent(t, FitWindow{1e-9, 1e-6});
    CHECK(f.gamma_hat == doctest::Approx(1.0 / 3.0).epsilon(3e-4));
    CHECK(std::fabs(f.prefactor_hat - std::cbrt(3 * kSqrt2)) < 1e-3);
    CHECK(f.r_squared > 0.999999);
  }
  SUBCASE("w = 7/3 full model") {
    const ReducedModel m = full(Rational(7, 3));
    const Trajectory t = approach_run(m, 0.0, 1.0, 1e-10);
    const FitResult f = fit_exponent(t, FitWindow{1e-6, 1e-4});
    CHECK(std::fabs(f.gamma_hat - 0.2) < 1e-3);
  }
  SUBCASE("constant trajectory") {
    Trajectory t;
    for (int i = 0; i < 20; ++i) t.samples.push_back(Sample{double(i), 0, 2.0, 0, 1, 0, 0, 0});
    const FitResult f = fit_exponent(t, std::nullopt);
    CHECK(std::fabs(f.gamma_hat) < 1e-12);
  }
  SUBCASE("too few samples") {
    Trajectory t;
    for (int i = 0; i < 5; ++i) t.samples.push_back(Sample{double(i), 0, 1.0 - 0.1 * i, -0.1, 1, 0, 0, 0});
    CHECK_THROWS_AS(fit_exponent(t, std::nullopt), InsufficientDataError);
  }
}

TEST_CASE("approach follows the leading order") {
  for (const Rational& w : {Rational(1, 2), Rational(2), Rational(7, 3)}) {
    const ReducedModel m = full(w);
    const Trajectory t = approach_run(m, 0.0, 1.0, 1e-10);
    const AsymptoticForm form = asymptotic_form(m);
    const double tau_star = t.samples.back().tau + time_to_singularity(m, 0.0, t.samples.back().a);
    double worst = 0;
    for (const auto& s : t.samples) {
      if (s.a < 1e-2 && s.a > 0) worst = std::max(worst, std::fabs(leading_order(form, tau_star - s.tau) / s.a - 1.0));
    }
    INFO("w = " << w.str());
    CHECK(worst < 1e-3);
  }
}

TEST_CASE("pure power bounce is even in time") {
  const ReducedModel m = ReducedModel::pure_power(Rational(1, 2));
  const Trajectory pre = approach_run(m, 0.0, 1.0, 1e-10);
  const BounceResult b = extend_through_singularity(m, classify(Rational(1, 2)), pre, 1e-6);
  CHECK(b.sign_rule == SignRule::Flipped);
  CHECK(b.continuity_gap == 0.0);
  double worst = 0;
  for (const auto& s : b.post_branch.samples) {
    if (s.a > 0) worst = std::max(worst, std::fabs(s.a / closed_form_zero_energy(m.exps, -s.tau) - 1.0));
    CHECK(s.tau <= 0.0);
  }
  CHECK(worst < 1e-6);
  for (const auto& s : b.pre_branch.samples) CHECK(s.tau >= 0.0);
}

TEST_CASE("extension refuses non-regularizable w") {
  const ReducedModel m = full(Rational(5, 3));
  Trajectory pre;
  pre.samples.push_back(Sample{0, 0, 1, -1, 1, -1, 0, 0});
  try {
    extend_through_singularity(m, classify(Rational(5, 3)), pre, 1e-6);
    FAIL("expected no-extension");
  } catch (const NoExtensionError& e) {
    CHECK(e.reason().rfind("no-extension", 0) == 0);
  }
}

TEST_CASE("w = 2 bounce") {
  const BounceRun run = run_bounce([] {
    CosmologyParams p;
    p.w = Rational(2);
    return p;
  }());
  const BounceResult& b = run.result;
  CHECK(b.sign_rule == SignRule::SameSign);
  CHECK(b.continuity_gap == 0.0);
  CHECK(std::fabs(b.gamma_hat_pre - 2.0 / 9.0) < 1e-3);
  CHECK(std::fabs(b.gamma_hat_post - 2.0 / 9.0) < 1e-3);
  for (const auto& s : b.post_branch.samples)
    if (s.tau < 0) CHECK(s.a > 0);

  SUBCASE("difference quotients diverge like |tau|^(gamma - 1)") {
    const Trajectory post = interior(b.post_branch);
    auto quotient = [&](double t) { return interpolate_at(post, -t).a / t; };
    const double g = 2.0 / 9.0;
    const double s1 = std::log(quotient(1e-4) / quotient(1e-3)) / std::log(0.1);
    const double s2 = std::log(quotient(1e-5) / quotient(1e-4)) / std::log(0.1);
    CHECK(std::fabs(s1 - (g - 1.0)) < 2e-2);
    CHECK(std::fabs(s2 - (g - 1.0)) < 2e-2);
  }
}
