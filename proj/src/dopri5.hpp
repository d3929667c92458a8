#pragma once

// Dormand-Prince 5(4) embedded pair with FSAL and a PI step-size controller.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace bigbang::detail {

template <std::size_t N, class Real>
class Dopri5 {
 public:
  using State = std::array<Real, N>;

  struct Trial {
    State y;
    State f_end;
    Real err = 0;  // scaled RMS error; <= 1 means acceptable
    bool finite = true;
  };

  // Per-component absolute tolerance; zero makes a component purely relative.
  Dopri5(Real rel_tol, const State& abs_tol) : rtol_(rel_tol), atol_(abs_tol) {}

  // One step of size h from (t, y) with derivative f0 = rhs(t, y).
  // rhs(t, y, dy) returns false when y is outside the field's domain.
  template <class Rhs>
  Trial step(Rhs& rhs, Real t, const State& y, const State& f0, Real h) const {
    static const Real c2 = Real(1) / 5, c3 = Real(3) / 10, c4 = Real(4) / 5, c5 = Real(8) / 9;
    static const Real a21 = Real(1) / 5;
    static const Real a31 = Real(3) / 40, a32 = Real(9) / 40;
    static const Real a41 = Real(44) / 45, a42 = Real(-56) / 15, a43 = Real(32) / 9;
    static const Real a51 = Real(19372) / 6561, a52 = Real(-25360) / 2187, a53 = Real(64448) / 6561,
                          a54 = Real(-212) / 729;
    static const Real a61 = Real(9017) / 3168, a62 = Real(-355) / 33, a63 = Real(46732) / 5247,
                          a64 = Real(49) / 176, a65 = Real(-5103) / 18656;
    static const Real b1 = Real(35) / 384, b3 = Real(500) / 1113, b4 = Real(125) / 192,
                          b5 = Real(-2187) / 6784, b6 = Real(11) / 84;
    // b - b_hat
    static const Real e1 = Real(71) / 57600, e3 = Real(-71) / 16695, e4 = Real(71) / 1920,
                          e5 = Real(-17253) / 339200, e6 = Real(22) / 525, e7 = Real(-1) / 40;

    Trial out;
    State k2, k3, k4, k5, k6, tmp;
    auto stage = [&](State& k, Real ct, auto&& combine) {
      for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * combine(i);
      if (!rhs(t + ct * h, tmp, k)) out.finite = false;
    };
    stage(k2, c2, [&](std::size_t i) { return a21 * f0[i]; });
    if (!out.finite) return out;
    stage(k3, c3, [&](std::size_t i) { return a31 * f0[i] + a32 * k2[i]; });
    if (!out.finite) return out;
    stage(k4, c4, [&](std::size_t i) { return a41 * f0[i] + a42 * k2[i] + a43 * k3[i]; });
    if (!out.finite) return out;
    stage(k5, c5, [&](std::size_t i) { return a51 * f0[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]; });
    if (!out.finite) return out;
    stage(k6, Real(1),
          [&](std::size_t i) { return a61 * f0[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]; });
    if (!out.finite) return out;
    for (std::size_t i = 0; i < N; ++i) {
      out.y[i] = y[i] + h * (b1 * f0[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    }
    if (!rhs(t + h, out.y, out.f_end)) {
      out.finite = false;
      return out;
    }
    Real sum = 0;
    for (std::size_t i = 0; i < N; ++i) {
      using std::abs;
      using std::max;
      const Real err_i =
          h * (e1 * f0[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * out.f_end[i]);
      const Real scale = atol_[i] + rtol_ * max(abs(y[i]), abs(out.y[i]));
      if (scale > 0) {
        sum += (err_i / scale) * (err_i / scale);
      } else if (err_i != 0) {
        out.finite = false;
      }
    }
    using std::sqrt;
    using std::isfinite;
    out.err = sqrt(sum / Real(N));
    if (!isfinite(out.err)) out.finite = false;
    return out;
  }

  // Step-size factor from the current and previous accepted error (PI control).
  Real next_factor(Real err, Real err_prev, bool last_rejected) const {
    using std::pow;
    using std::max;
    using std::min;
    const Real safety = Real(0.9);
    const Real beta = Real(0.04);
    const Real expo = Real(0.2) - Real(0.75) * beta;
    err = max(err, Real(1e-10));
    Real fac = safety * pow(err, -expo) * pow(max(err_prev, Real(1e-4)), beta);
    fac = min(max(fac, Real(0.2)), last_rejected ? Real(1) : Real(5));
    return fac;
  }

  Real rel_tol() const { return rtol_; }

 private:
  Real rtol_;
  State atol_;
};

}  // namespace bigbang::detail
