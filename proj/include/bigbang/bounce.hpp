#pragma once

#include <optional>

#include "bigbang/flow.hpp"
#include "bigbang/regularity.hpp"

namespace bigbang {

/// Leading-order data of the collision solution a = tau^gamma Psi(tau^w1, tau^w2).
/// Only Psi(0, 0) = psi0 is known in closed form.
struct AsymptoticForm {
  Rational gamma;
  Rational beta;
  double omega1 = 0.0;
  double omega2 = 0.0;
  double psi0 = 0.0;
};

AsymptoticForm asymptotic_form(const ReducedModel& model);

/// Real power through the real q-th root for negative x: sign(x)^p |x|^(p/q).
/// Throws ImaginaryBranchError for x < 0 with q even.
double real_pow_rational(double x, const Rational& e);

/// Zero-energy pure power solution a = (sqrt(2)(beta + 1) delta)^gamma, delta = time to a = 0.
double closed_form_zero_energy(const ExponentTriple& exps, double delta);

/// psi0 * real_pow_rational(tau, gamma).
double leading_order(const AsymptoticForm& form, double tau);

/// Exact time to go from a = 0 to a at energy h, by quadrature of
/// dtau = dr / ((1 + beta) sqrt(2 + 2 h r^(alpha gamma) + G~(r))).
/// Throws DomainError when the energy curve turns before reaching a.
double time_to_singularity(const ReducedModel& model, double h, double a);

struct FitWindow {
  double lo = 0.0;  // time-to-singularity bounds
  double hi = 0.0;
};

struct FitResult {
  double gamma_hat = 0.0;
  double prefactor_hat = 0.0;
  double r_squared = 0.0;
  double tau_star = 0.0;   // estimated singularity epoch in the trajectory's tau
  double final_gap = 0.0;  // time-to-singularity of the sample closest to it
  std::size_t used = 0;
};

/// Least-squares fit of ln a against ln|tau - tau*| with tau* chosen by
/// golden-section minimization of the fit residual. The window selects samples
/// by time-to-singularity; without one every sample with a > 0 is used.
/// Throws InsufficientDataError for fewer than 8 samples in the window.
FitResult fit_exponent(const Trajectory& traj, std::optional<FitWindow> window);

enum class SignRule { SameSign, Flipped };
std::string to_string(SignRule rule);

/// Both branches in the convention where tau > 0 precedes the bang at tau = 0
/// and physical evolution runs toward decreasing tau. Each branch carries the
/// shared endpoint a = 0 at tau = 0.
struct BounceResult {
  Rational w;
  Rational gamma;
  Trajectory pre_branch;
  Trajectory post_branch;
  SignRule sign_rule = SignRule::Flipped;
  double match_tau = 0.0;
  double seed_tau = 0.0;         // where the post branch numerics actually start (< 0)
  double seed_deviation = 0.0;   // |exact time / match_tau - 1| at the seed scale factor
  double continuity_gap = 0.0;
  double psi0 = 0.0;
  double pre_tau_star = 0.0;     // epoch of the input trajectory in its own tau
  double gamma_hat_pre = 0.0;
  double gamma_hat_post = 0.0;
};

/// Continues a trajectory that runs into a = 0 through the singularity.
/// Throws NoExtensionError when cls is not regularizable and FitQualityError
/// when match_tau is outside the range where the leading order holds.
BounceResult extend_through_singularity(const ReducedModel& model, const RegularityClass& cls,
                                        const Trajectory& pre, double match_tau);

}  // namespace bigbang
