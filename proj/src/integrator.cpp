#include "qssmm/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "qssmm/errors.hpp"

namespace qssmm {
namespace {

// TR-BDF2 constants.
const double kGamma = 2.0 - std::sqrt(2.0);
const double kD = kGamma / 2.0;
const double kW = std::sqrt(2.0) / 4.0;
// Error estimate weights for f_n, f_gamma, f_{n+1}.
const double kE0 = (1.0 - 4.0 * kW) / 3.0;
const double kE1 = 1.0 / 3.0;
const double kE2 = -2.0 * kD / 3.0;

constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 5.0;
constexpr double kThetaMax = 0.9;
constexpr double kUround = std::numeric_limits<double>::epsilon();

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double max_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// max_i |v_i| / scale_i
double weighted_norm(std::span<const double> v, std::span<const double> scale) {
  double m = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i]) / scale[i]);
  return m;
}

std::string describe(const char* what, double t, double h) {
  std::ostringstream os;
  os.precision(17);
  os << what << " at t = " << t << " (step " << h << ")";
  return os.str();
}

class Stepper {
public:
  Stepper(const OdeSystem& system, const IntegratorConfig& cfg)
      : sys_(system),
        cfg_(cfg),
        n_(system.size()),
        jac_(n_, system.lower_bandwidth(), system.upper_bandwidth()),
        m_(n_, system.lower_bandwidth(), system.upper_bandwidth()),
        f_(n_),
        rhs_known_(n_),
        z_(n_),
        y_new_(n_),
        f_gamma_(n_),
        f_new_(n_),
        delta_(n_),
        resid_(n_),
        scale_(n_),
        est_(n_) {}

  SolverStats stats;

  void rhs(std::span<const double> y, std::span<double> out) {
    sys_.rhs(y, out);
    ++stats.rhs_evaluations;
  }

  void refresh_jacobian(std::span<const double> y) {
    sys_.jacobian(y, jac_);
    ++stats.jacobian_evaluations;
    jac_fresh_ = true;
    factored_h_ = -1.0;
  }

  // M = I - d h J
  bool factor(double h) {
    if (factored_h_ == h) return true;
    m_ = jac_;
    m_.scale(-kD * h);
    m_.add_to_diagonal(1.0);
    ++stats.factorizations;
    if (!lu_.factorize(m_)) {
      factored_h_ = -1.0;
      return false;
    }
    factored_h_ = h;
    return true;
  }

  // Solves x - d h f(x) = known for x, starting from x. On success `fx` holds
  // f(x) recovered from the stage relation.
  bool solve_stage(std::span<double> x, std::span<const double> known, double h,
                   std::span<double> fx) {
    const double dh = kD * h;
    double prev_norm = 0.0;
    double eta = std::pow(std::max(eta_, kUround), 0.8);
    for (int it = 0; it < cfg_.max_newton_iters; ++it) {
      rhs(x, fx);
      if (!all_finite(fx)) return false;
      for (std::size_t i = 0; i < n_; ++i) delta_[i] = known[i] - x[i] + dh * fx[i];
      lu_.solve(delta_);
      ++stats.newton_iterations;
      for (std::size_t i = 0; i < n_; ++i) x[i] += delta_[i];
      const double norm = weighted_norm(delta_, scale_);
      if (!std::isfinite(norm)) return false;
      if (it > 0) {
        const double theta = norm / prev_norm;
        if (theta > kThetaMax) return false;
        eta = theta / (1.0 - theta);
      }
      prev_norm = norm;
      if (eta * norm <= cfg_.newton_tol || norm <= 10.0 * kUround) {
        eta_ = eta;
        for (std::size_t i = 0; i < n_; ++i) fx[i] = (x[i] - known[i]) / dh;
        return all_finite(x);
      }
    }
    return false;
  }

  // One TR-BDF2 attempt from (y, f_) with step h. Returns false on Newton
  // failure; otherwise fills y_new_, f_new_ and the error norm.
  bool attempt(std::span<const double> y, double h, double& err) {
    const double dh = kD * h;
    for (std::size_t i = 0; i < n_; ++i) scale_[i] = cfg_.abs_tol + cfg_.rel_tol * std::abs(y[i]);
    if (!factor(h)) return false;

    // Trapezoidal stage to t + gamma h.
    for (std::size_t i = 0; i < n_; ++i) {
      rhs_known_[i] = y[i] + dh * f_[i];
      z_[i] = y[i] + kGamma * h * f_[i];
    }
    if (!solve_stage(z_, rhs_known_, h, f_gamma_)) return false;

    // BDF2 stage to t + h; quadratic predictor through y, f and z.
    const double gh = kGamma * h;
    for (std::size_t i = 0; i < n_; ++i) {
      const double a = (z_[i] - y[i] - gh * f_[i]) / (gh * gh);
      y_new_[i] = y[i] + h * f_[i] + a * h * h;
      rhs_known_[i] = y[i] + kW * h * (f_[i] + f_gamma_[i]);
    }
    if (!solve_stage(y_new_, rhs_known_, h, f_new_)) return false;

    if (!cfg_.adaptive) {
      err = 0.0;
      return true;
    }
    for (std::size_t i = 0; i < n_; ++i) {
      est_[i] = h * (kE0 * f_[i] + kE1 * f_gamma_[i] + kE2 * f_new_[i]);
    }
    lu_.solve(est_);
    for (std::size_t i = 0; i < n_; ++i) {
      scale_[i] = cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(y[i]), std::abs(y_new_[i]));
    }
    err = weighted_norm(est_, scale_);
    return std::isfinite(err);
  }

  double initial_step(std::span<const double> y0, double span) {
    std::vector<double> sc(n_), y1(n_), f1(n_);
    for (std::size_t i = 0; i < n_; ++i) sc[i] = cfg_.abs_tol + cfg_.rel_tol * std::abs(y0[i]);
    const double d0 = weighted_norm(y0, sc);
    const double d1 = weighted_norm(f_, sc);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);
    for (std::size_t i = 0; i < n_; ++i) y1[i] = y0[i] + h0 * f_[i];
    rhs(y1, f1);
    for (std::size_t i = 0; i < n_; ++i) f1[i] -= f_[i];
    const double d2 = all_finite(f1) ? weighted_norm(f1, sc) / h0 : 0.0;
    double h1;
    if (std::max(d1, d2) <= 1e-15) {
      h1 = std::max(1e-6, h0 * 1e-3);
    } else {
      h1 = std::pow(0.01 / std::max(d1, d2), 1.0 / 3.0);
    }
    return std::min(100.0 * h0, h1);
  }

  std::vector<double>& f() { return f_; }
  std::vector<double>& y_new() { return y_new_; }
  std::vector<double>& f_new() { return f_new_; }
  bool jacobian_fresh() const { return jac_fresh_; }

private:
  const OdeSystem& sys_;
  const IntegratorConfig& cfg_;
  std::size_t n_;
  BandMatrix jac_;
  BandMatrix m_;
  BandLU lu_;
  double factored_h_ = -1.0;
  bool jac_fresh_ = false;
  double eta_ = 1.0;
  std::vector<double> f_, rhs_known_, z_, y_new_, f_gamma_, f_new_, delta_, resid_, scale_, est_;
};

}  // namespace

void IntegratorConfig::validate(double final_time) const {
  if (!(abs_tol > 0.0)) throw ConfigError("abs_tol must be positive", "integrator.abs_tol");
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw ConfigError("rel_tol must lie in (0, 1)", "integrator.rel_tol");
  }
  if (!(initial_step >= 0.0) || !std::isfinite(initial_step)) {
    throw ConfigError("initial_step must be nonnegative", "integrator.initial_step");
  }
  if (!(max_step >= 0.0) || !std::isfinite(max_step)) {
    throw ConfigError("max_step must be nonnegative", "integrator.max_step");
  }
  if (max_step > final_time) {
    throw ConfigError("max_step must not exceed the final time", "integrator.max_step");
  }
  if (max_newton_iters < 1) {
    throw ConfigError("max_newton_iters must be at least 1", "integrator.max_newton_iters");
  }
  if (!(newton_tol > 0.0 && newton_tol < 1.0)) {
    throw ConfigError("newton_tol must lie in (0, 1)", "integrator.newton_tol");
  }
  if (!adaptive && !(initial_step > 0.0)) {
    throw ConfigError("fixed-step integration needs initial_step > 0", "integrator.initial_step");
  }
  if (max_steps == 0) throw ConfigError("max_steps must be positive", "integrator.max_steps");
}

Trajectory integrate(const OdeSystem& system, std::span<const double> y0, double final_time,
                     const IntegratorConfig& config, std::span<const double> stop_times) {
  if (!(final_time > 0.0) || !std::isfinite(final_time)) {
    throw ConfigError("final time must be positive", "final_time");
  }
  config.validate(final_time);
  const std::size_t n = system.size();
  if (y0.size() != n) {
    throw DimensionError("initial state has " + std::to_string(y0.size()) + " entries, expected " +
                         std::to_string(n));
  }
  if (!all_finite(y0)) throw ModelError("initial state is not finite");

  std::vector<double> stops;
  for (double t : stop_times) {
    if (t > 0.0 && t < final_time) stops.push_back(t);
  }
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  stops.push_back(final_time);

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.emplace_back(y0.begin(), y0.end());

  Stepper st(system, config);
  std::vector<double> y(y0.begin(), y0.end());
  st.rhs(y, st.f());
  if (!all_finite(st.f())) throw ModelError(describe("right-hand side is not finite", 0.0, 0.0));

  const double max_step = config.max_step > 0.0 ? config.max_step : final_time;
  const double min_step = 1e-14 * final_time;
  double h = config.initial_step > 0.0 ? config.initial_step : st.initial_step(y, final_time);
  h = std::min(h, max_step);
  double t = 0.0;
  double err_prev = 1.0;
  bool last_rejected = false;
  std::size_t next_stop = 0;
  traj.stats.min_step = std::numeric_limits<double>::infinity();

  st.refresh_jacobian(y);
  while (next_stop < stops.size()) {
    if (traj.stats.steps + traj.stats.rejected_steps >= config.max_steps) {
      throw SolverError(describe("step limit reached", t, h));
    }
    const double target = stops[next_stop];
    bool hits = false;
    double h_try = h;
    if (t + h_try >= target - 1e-12 * final_time) {
      h_try = target - t;
      hits = true;
    }
    if (h_try < min_step && !hits) {
      throw SolverError(describe("step size collapsed", t, h_try));
    }

    double err = 0.0;
    if (!st.attempt(y, h_try, err)) {
      ++st.stats.newton_failures;
      if (!config.adaptive) throw SolverError(describe("Newton iteration failed", t, h_try));
      h = 0.25 * h_try;
      if (!st.jacobian_fresh()) st.refresh_jacobian(y);
      last_rejected = true;
      if (h < min_step) throw SolverError(describe("Newton iteration failed", t, h));
      continue;
    }

    if (config.adaptive && err > 1.0) {
      ++traj.stats.rejected_steps;
      h = h_try * std::max(kFacMin, kSafety * std::pow(err, -1.0 / 3.0));
      last_rejected = true;
      if (h < min_step) throw SolverError(describe("step size collapsed", t, h));
      continue;
    }

    // Accepted.
    if (!all_finite(st.y_new()) || !all_finite(st.f_new())) {
      throw ModelError(describe("right-hand side is not finite", t + h_try, h_try));
    }
    t = hits ? target : t + h_try;
    y.swap(st.y_new());
    st.f().swap(st.f_new());
    ++traj.stats.steps;
    traj.stats.min_step = std::min(traj.stats.min_step, h_try);
    traj.stats.max_step = std::max(traj.stats.max_step, h_try);

    if (hits) {
      traj.times.push_back(t);
      traj.states.push_back(y);
      ++next_stop;
    } else if (config.store_all_steps) {
      traj.times.push_back(t);
      traj.states.push_back(y);
    }

    if (config.adaptive) {
      const double e = std::max(err, 1e-10);
      double fac = kSafety * std::pow(e, -0.7 / 3.0) * std::pow(err_prev, 0.4 / 3.0);
      fac = std::clamp(fac, kFacMin, kFacMax);
      if (last_rejected) fac = std::min(fac, 1.0);
      // A clipped step says nothing about the natural step size.
      h = hits ? std::max(h, h_try * fac) : h_try * fac;
      err_prev = e;
    } else {
      h = config.initial_step;
    }
    h = std::min(h, max_step);
    last_rejected = false;
    if (next_stop < stops.size()) st.refresh_jacobian(y);
  }
  traj.stats.newton_iterations = st.stats.newton_iterations;
  traj.stats.newton_failures = st.stats.newton_failures;
  traj.stats.jacobian_evaluations = st.stats.jacobian_evaluations;
  traj.stats.factorizations = st.stats.factorizations;
  traj.stats.rhs_evaluations = st.stats.rhs_evaluations;
  if (traj.stats.steps == 0) traj.stats.min_step = 0.0;
  return traj;
}

Trajectory integrate(const RhsFunction& rhs, std::span<const double> y0, double final_time,
                     const IntegratorConfig& config) {
  FunctionSystem system(y0.size(), rhs);
  return integrate(system, y0, final_time, config);
}

NewtonResult newton_solve(const ResidualFunction& residual, std::size_t n, std::size_t lower,
                          std::size_t upper, std::span<const double> guess,
                          const NewtonOptions& options, const BandJacobianFunction& jacobian) {
  if (guess.size() != n) throw DimensionError("newton_solve: guess has the wrong length");
  FunctionSystem system(n, lower, upper, residual, jacobian);
  NewtonResult result;
  result.x.assign(guess.begin(), guess.end());
  std::vector<double> f(n), dx(n);
  residual(result.x, f);
  if (!all_finite(f)) {
    result.status = NewtonStatus::NonFinite;
    return result;
  }
  double norm = max_norm(f);
  result.residual_norm = norm;
  if (norm <= options.tol) {
    result.status = NewtonStatus::Converged;
    return result;
  }
  const double start_norm = norm;

  BandMatrix jac(n, lower, upper);
  BandLU lu;
  bool refactor = true;
  int stalled = 0;
  for (int it = 0; it < options.max_iterations; ++it) {
    const bool fresh = refactor;
    if (refactor) {
      system.jacobian(result.x, jac);
      ++result.factorizations;
      if (!lu.factorize(jac)) {
        result.status = NewtonStatus::Singular;
        return result;
      }
      refactor = false;
    }
    for (std::size_t i = 0; i < n; ++i) dx[i] = -f[i];
    lu.solve(dx);
    for (std::size_t i = 0; i < n; ++i) result.x[i] += dx[i];
    residual(result.x, f);
    ++result.iterations;
    if (!all_finite(f) || !all_finite(result.x)) {
      result.status = NewtonStatus::NonFinite;
      return result;
    }
    const double next = max_norm(f);
    result.residual_norm = next;
    if (next <= options.tol) {
      result.status = NewtonStatus::Converged;
      return result;
    }
    const double ratio = next / norm;
    if (ratio > options.refactor_ratio) refactor = true;
    stalled = (fresh && ratio >= 1.0) ? stalled + 1 : 0;
    if (stalled >= 3 || next > 1e8 * std::max(start_norm, options.tol)) {
      result.status = NewtonStatus::Diverged;
      return result;
    }
    norm = next;
  }
  result.status = NewtonStatus::MaxIterations;
  return result;
}

}  // namespace qssmm
