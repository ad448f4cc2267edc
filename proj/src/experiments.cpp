#include "qssmm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "qssmm/errors.hpp"

namespace qssmm {
namespace {

double linf_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double sum(const Field& f) { return std::accumulate(f.begin(), f.end(), 0.0); }

double relative_drift(double value, double reference) {
  const double scale = std::abs(reference) > 0.0 ? std::abs(reference) : 1.0;
  return std::abs(value - reference) / scale;
}

}  // namespace

void SweepSpec::validate() const {
  if (epsilons.empty()) throw ConfigError("at least one epsilon is required", "epsilons");
  for (double e : epsilons) {
    if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("epsilon must be positive", "epsilons");
  }
  if (!is_full(full_kind)) throw ConfigError("first model of the pair must be a full model", "model");
  if (!is_reduced(reduced_kind)) {
    throw ConfigError("second model of the pair must be a reduced model", "model");
  }
  if (is_reversible(full_kind) != is_reversible(reduced_kind)) {
    throw ConfigError("full and reduced models differ in reversibility", "model");
  }
  const bool big = has_delta_coupling(reduced_kind);
  if (!big && diffusion.delta() != 0.0) {
    throw ConfigError("small-delta reduction requires d_c = d_e", "diffusion.c");
  }
  if (!(final_time > 0.0)) throw ConfigError("final time must be positive", "final_time");
  initial.validate();
  ModelSpec{reduced_kind, rates, diffusion, std::nullopt}.validate();
  Grid1D(length, cells);
}

MonitorReport monitor_invariants(const Trajectory& trajectory, const MethodOfLinesSystem& system) {
  const ModelSpec& spec = system.spec();
  if (!is_full(spec.kind)) throw ConfigError("invariant monitors need a full model", "model");
  if (trajectory.states.empty()) throw DimensionError("empty trajectory");
  const bool reversible = is_reversible(spec.kind);
  const double eps = spec.eps();

  MonitorReport rep;
  const FullState first = system.unpack_full(trajectory.states.front());
  const double y0 = sum(first.y_star);
  const auto mass = [&](const FullState& st) {
    double m = 0.0;
    for (std::size_t a = 0; a < st.cells(); ++a) {
      m += st.s[a] + eps * (st.y_star[a] + st.c_star[a]) + st.p[a];
    }
    return m;
  };
  const double m0 = reversible ? mass(first) : 0.0;
  rep.initial_max_y_star = *std::max_element(first.y_star.begin(), first.y_star.end());
  rep.min_component = std::numeric_limits<double>::infinity();
  if (reversible) rep.mass_drift = 0.0;

  for (const auto& y : trajectory.states) {
    rep.min_component = std::min(rep.min_component, *std::min_element(y.begin(), y.end()));
    const FullState st = system.unpack_full(y);
    rep.y_sum_drift = std::max(rep.y_sum_drift, relative_drift(sum(st.y_star), y0));
    rep.max_y_star =
        std::max(rep.max_y_star, *std::max_element(st.y_star.begin(), st.y_star.end()));
    if (reversible) rep.mass_drift = std::max(*rep.mass_drift, relative_drift(mass(st), m0));
  }

  const auto& r = spec.rates;
  if (r.k1 > 0.0 && r.k_m1 + r.k2 > 0.0) {
    const FullState last = system.unpack_full(trajectory.states.back());
    const Field cm = slow_manifold_c(last.s, last.y_star, last.p, r);
    rep.manifold_distance = linf_diff(last.c_star, cm);
  }
  return rep;
}

ReducedRun run_reduced(const SweepSpec& spec) {
  const Grid1D grid = spec.grid();
  const bool reversible = is_reversible(spec.reduced_kind);
  const FullState raw = build_initial_profiles(spec.initial, grid, reversible);
  const ProjectedInitialValues proj = project_initial_values(raw, spec.rates);

  MethodOfLinesSystem sys(ModelSpec{spec.reduced_kind, spec.rates, spec.diffusion, std::nullopt},
                          grid);
  const auto y0 = sys.pack(proj.reduced);
  const Trajectory traj = integrate(sys, y0, spec.final_time, spec.integrator);
  ReducedRun out;
  out.final_state = sys.unpack_reduced(traj.final_state());
  out.c_manifold = slow_manifold_c(out.final_state.s, out.final_state.y_star, out.final_state.p,
                                   spec.rates);
  out.stats = traj.stats;
  return out;
}

ErrorRecord run_comparison(const SweepSpec& spec, double epsilon, const ReducedRun* reduced) {
  ErrorRecord rec;
  rec.epsilon = epsilon;
  try {
    ReducedRun local;
    if (!reduced) {
      local = run_reduced(spec);
      reduced = &local;
    }
    const Grid1D grid = spec.grid();
    const bool reversible = is_reversible(spec.full_kind);
    const FullState raw = build_initial_profiles(spec.initial, grid, reversible);
    MethodOfLinesSystem sys(ModelSpec{spec.full_kind, spec.rates, spec.diffusion, epsilon}, grid);
    IntegratorConfig cfg = spec.integrator;
    cfg.store_all_steps = true;
    const Trajectory traj = integrate(sys, sys.pack(raw), spec.final_time, cfg);
    const FullState fin = sys.unpack_full(traj.final_state());

    const ReducedState& red = reduced->final_state;
    rec.err_s = linf_diff(fin.s, red.s);
    rec.err_cstar = linf_diff(fin.c_star, reduced->c_manifold);
    rec.err_ystar = linf_diff(fin.y_star, red.y_star);
    if (reversible) rec.err_p = linf_diff(fin.p, red.p);
    rec.full_stats = traj.stats;
    rec.monitors = monitor_invariants(traj, sys);
    rec.ok = true;
  } catch (const Error& e) {
    rec.ok = false;
    rec.diagnostic = e.what();
  }
  return rec;
}

std::optional<double> fit_convergence_order(std::span<const double> epsilons,
                                            std::span<const double> errors) {
  if (epsilons.size() != errors.size()) throw DimensionError("fit: lengths differ");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (errors[i] > kErrorFloor && epsilons[i] > 0.0 && std::isfinite(errors[i])) {
      lx.push_back(std::log(epsilons[i]));
      ly.push_back(std::log(errors[i]));
    }
  }
  if (lx.size() < 3) return std::nullopt;
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

ConvergenceReport run_sweep(const SweepSpec& spec, unsigned jobs) {
  spec.validate();
  ConvergenceReport report;
  const ReducedRun reduced = run_reduced(spec);
  report.reduced_stats = reduced.stats;

  const std::size_t count = spec.epsilons.size();
  report.records.resize(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      report.records[i] = run_comparison(spec, spec.epsilons[i], &reduced);
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<double> eps, es, ec, ey, ep, em;
  for (const auto& r : report.records) {
    if (!r.ok) continue;
    eps.push_back(r.epsilon);
    es.push_back(r.err_s);
    ec.push_back(r.err_cstar);
    ey.push_back(r.err_ystar);
    ep.push_back(r.err_p.value_or(0.0));
    em.push_back(r.monitors.manifold_distance.value_or(0.0));
  }
  report.slope_s = fit_convergence_order(eps, es);
  report.slope_cstar = fit_convergence_order(eps, ec);
  report.slope_ystar = fit_convergence_order(eps, ey);
  if (is_reversible(spec.full_kind)) report.slope_p = fit_convergence_order(eps, ep);
  report.slope_manifold = fit_convergence_order(eps, em);
  return report;
}

}  // namespace qssmm
