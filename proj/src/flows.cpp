#include "hypflow/flows.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SparseCholesky>

namespace hypflow {

const char* to_string(FlowKind k) { return k == FlowKind::yamabe ? "yamabe" : "calabi"; }

std::optional<FlowKind> parse_flow_kind(const std::string& s) {
  if (s == "yamabe") return FlowKind::yamabe;
  if (s == "calabi") return FlowKind::calabi;
  return std::nullopt;
}

const char* to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::converged:
      return "converged";
    case FlowStatus::max_steps:
      return "max_steps";
    case FlowStatus::failed:
      return "failed";
  }
  return "?";
}

namespace {

double sup_norm(std::span<const double> v) {
  double r = 0.0;
  for (double x : v) r = std::max(r, std::abs(x));
  return r;
}

double sup_diff(std::span<const double> a, std::span<const double> b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

std::vector<double> target_or_zero(std::span<const double> target, int n) {
  if (target.empty()) return std::vector<double>(n, 0.0);
  if (static_cast<int>(target.size()) != n) {
    throw Error("target has " + std::to_string(target.size()) + " values for " + std::to_string(n) + " vertices");
  }
  return {target.begin(), target.end()};
}

std::vector<double> mismatch(const MetricSurface& s, double alpha, std::span<const double> target,
                             std::vector<double>* K_out = nullptr) {
  auto K = curvature(s.surface, s.metric);
  auto M = alpha_curvature(K, s.metric.u, alpha);
  for (std::size_t i = 0; i < M.size(); ++i) M[i] -= target[i];
  if (K_out) *K_out = std::move(K);
  return M;
}

}  // namespace

std::vector<FlipEvent> prepare_state(MetricSurface& s) { return make_delaunay(s.surface, s.metric); }

std::vector<double> operational_curvature(MetricSurface& s, std::span<const double> u) {
  rescale_with_surgery(s.surface, s.metric, u);
  return curvature(s.surface, s.metric);
}

namespace {

// rhs from curvature K at cumulative factor u; J is needed only for Calabi.
std::vector<double> rhs_from(FlowKind kind, double alpha, std::span<const double> target, std::span<const double> K,
                             std::span<const double> u, const JacobianL* J) {
  auto M = alpha_curvature(K, u, alpha);
  for (std::size_t i = 0; i < M.size(); ++i) M[i] -= target[i];
  if (kind == FlowKind::calabi) return alpha_laplacian_apply(*J, u, alpha, M);
  for (double& x : M) x = -x;
  return M;
}

}  // namespace

std::vector<double> yamabe_rhs(const MetricSurface& s, double alpha, std::span<const double> target) {
  const auto tgt = target_or_zero(target, s.surface.vertex_count());
  const auto K = curvature(s.surface, s.metric);
  return rhs_from(FlowKind::yamabe, alpha, tgt, K, s.metric.u, nullptr);
}

std::vector<double> calabi_rhs(const MetricSurface& s, double alpha, std::span<const double> target) {
  const auto tgt = target_or_zero(target, s.surface.vertex_count());
  const auto angles = face_angles(s.surface, s.metric.length);
  const auto K = curvature_from_angles(s.surface, angles);
  const auto J = jacobian(s.surface, s.metric.length, angles);
  return rhs_from(FlowKind::calabi, alpha, tgt, K, s.metric.u, &J);
}

std::vector<double> calabi_rhs_matrix(const MetricSurface& s, double alpha, std::span<const double> target) {
  const auto tgt = target_or_zero(target, s.surface.vertex_count());
  const auto M = mismatch(s, alpha, tgt);
  return alpha_laplacian_matrix_apply(jacobian(s.surface, s.metric), s.metric.u, alpha, M);
}

// ---------------------------------------------------------------------------
// Integrator

namespace {

class Integrator {
 public:
  Integrator(const MetricSurface& base, const FlowConfig& cfg, const std::vector<double>& target)
      : base_(base), cfg_(cfg), target_(target) {}

  std::vector<double> rhs_at(std::span<const double> u) const {
    // Short moves that stay Delaunay need no surgery and no copy of the surface.
    if (sup_diff(u, base_.metric.u) <= kShortMove) {
      const auto& surf = base_.surface;
      const auto length = scaled_lengths(surf, base_.metric, u);
      bool admissible = true;
      for (int f = 0; f < surf.face_count() && admissible; ++f) {
        admissible = face_lengths(surf, length, f).admissible();
      }
      if (admissible) {
        const auto angles = face_angles(surf, length);
        const auto w = delaunay_weights(surf, angles);
        if (std::all_of(w.begin(), w.end(), [](double x) { return x >= -kDelaunayTol; })) {
          const auto K = curvature_from_angles(surf, angles);
          if (cfg_.kind == FlowKind::yamabe) return rhs_from(cfg_.kind, cfg_.alpha, target_, K, u, nullptr);
          const auto J = jacobian(surf, length, angles);
          return rhs_from(cfg_.kind, cfg_.alpha, target_, K, u, &J);
        }
      }
    }
    MetricSurface s = base_;
    rescale_with_surgery(s.surface, s.metric, u);
    return cfg_.kind == FlowKind::yamabe ? yamabe_rhs(s, cfg_.alpha, target_)
                                         : calabi_rhs(s, cfg_.alpha, target_);
  }

  std::vector<double> rk4(const std::vector<double>& u, double dt) const {
    const std::size_t n = u.size();
    std::vector<double> tmp(n);
    auto axpy = [&](const std::vector<double>& k, double h) {
      for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + h * k[i];
      return tmp;
    };
    const auto k1 = rhs_at(u);
    const auto k2 = rhs_at(axpy(k1, 0.5 * dt));
    const auto k3 = rhs_at(axpy(k2, 0.5 * dt));
    const auto k4 = rhs_at(axpy(k3, dt));
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
  }

 private:
  // Same bound as the default path substep of rescale_with_surgery.
  static constexpr double kShortMove = 0.05;

  const MetricSurface& base_;
  const FlowConfig& cfg_;
  const std::vector<double>& target_;
};

double decay_slope(const std::vector<StepRecord>& steps) {
  if (steps.size() < 3) return 0.0;
  const double t_end = steps.back().t;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (const auto& r : steps) {
    if (r.t < 0.5 * t_end || !(r.sup_err > 0.0)) continue;
    const double y = std::log(r.sup_err);
    sx += r.t;
    sy += y;
    sxx += r.t * r.t;
    sxy += r.t * y;
    ++cnt;
  }
  if (cnt < 2) return 0.0;
  const double den = cnt * sxx - sx * sx;
  if (den == 0.0) return 0.0;
  return (cnt * sxy - sx * sy) / den;
}

}  // namespace

FlowRun run_flow(MetricSurface start, const FlowConfig& cfg, const StepCallback& on_step) {
  FlowRun run;
  run.config = cfg;
  run.final_state = std::move(start);
  MetricSurface& cur = run.final_state;
  const int n = cur.surface.vertex_count();

  std::vector<double> target;
  std::vector<double> K;
  std::vector<double> M;
  double prep_jump = 0.0;
  auto F_alpha_of = [&](const std::vector<double>& mis) {
    std::vector<double> f(mis);
    for (int i = 0; i < n && i < static_cast<int>(target.size()); ++i) f[i] += target[i];
    return f;
  };
  auto fail = [&](const std::string& why) {
    run.status = FlowStatus::failed;
    run.reason = why;
    if (!M.empty()) run.final_F_alpha = F_alpha_of(M);
    run.decay_slope = decay_slope(run.steps);
    return run;
  };

  try {
    target = target_or_zero(cfg.target, n);
    const auto before = vertex_angle_sums(cur.surface, cur.metric);
    for (auto& f : prepare_state(cur)) run.flips.push_back(f);
    M = mismatch(cur, cfg.alpha, target, &K);
    const auto after = vertex_angle_sums(cur.surface, cur.metric);
    for (int i = 0; i < n; ++i) prep_jump = std::max(prep_jump, std::abs(after[i] - before[i]));
  } catch (const Error& ex) {
    return fail(ex.what());
  }

  auto make_record = [&](double t, double dt, int flips, double energy, double jump) {
    StepRecord r;
    r.t = t;
    r.dt = dt;
    r.sup_err = sup_norm(M);
    r.min_M = *std::min_element(M.begin(), M.end());
    r.max_M = *std::max_element(M.begin(), M.end());
    r.flips = flips;
    r.energy = energy;
    r.curvature_jump = jump;
    r.gauss_bonnet = gauss_bonnet_residual(cur.surface, cur.metric, K);
    return r;
  };

  run.initial_F_alpha = F_alpha_of(M);
  run.steps.push_back(make_record(0.0, 0.0, static_cast<int>(run.flips.size()), 0.0, prep_jump));
  if (on_step) on_step(run.steps.back());

  double t = 0.0;
  double dt = cfg.dt_init;
  double energy = 0.0;
  int streak = 0;
  run.status = FlowStatus::max_steps;
  if (run.steps.back().sup_err <= cfg.tol_converge) run.status = FlowStatus::converged;

  while (run.status != FlowStatus::converged && run.accepted_steps() < cfg.max_steps) {
    const std::vector<double> u0 = cur.metric.u;
    std::string why_rejected;
    MetricSurface next;
    std::vector<FlipEvent> step_flips;
    double jump = 0.0;
    std::vector<double> K_next;
    std::vector<double> M_next;
    bool accepted = false;
    try {
      const Integrator integ(cur, cfg, target);
      const auto full = integ.rk4(u0, dt);
      const auto half = integ.rk4(integ.rk4(u0, 0.5 * dt), 0.5 * dt);
      const double err = sup_diff(full, half);
      const double size = sup_diff(half, u0);
      if (err > cfg.step_atol || err > cfg.step_rtol * size + 1e-14) {
        std::ostringstream os;
        os << "step error " << err << " too large";
        why_rejected = os.str();
      } else {
        if (sup_norm(half) > cfg.u_limit) {
          std::ostringstream os;
          os << "conformal factor left [-" << cfg.u_limit << ", " << cfg.u_limit << "] at t = " << t + dt
             << " (target is probably not attainable)";
          return fail(os.str());
        }
        next = cur;
        SurgeryOptions opt;
        opt.angle_jump = &jump;
        step_flips = rescale_with_surgery(next.surface, next.metric, half, opt);
        M_next = mismatch(next, cfg.alpha, target, &K_next);
        accepted = true;
      }
    } catch (const Error& ex) {
      why_rejected = ex.what();
    }

    if (!accepted) {
      ++run.rejected_steps;
      streak = 0;
      dt *= 0.5;
      if (dt < cfg.dt_min) {
        return fail("time step fell below " + std::to_string(cfg.dt_min) + " at t = " + std::to_string(t) +
                    ": " + why_rejected);
      }
      continue;
    }

    energy += energy_increment(K, K_next, u0, next.metric.u, target, cfg.alpha);
    t += dt;
    for (auto& f : step_flips) {
      f.time = t;
      run.flips.push_back(f);
    }
    cur = std::move(next);
    K = std::move(K_next);
    M = std::move(M_next);
    run.steps.push_back(make_record(t, dt, static_cast<int>(step_flips.size()), energy, jump));
    if (on_step) on_step(run.steps.back());
    if (run.steps.back().sup_err <= cfg.tol_converge) run.status = FlowStatus::converged;

    if (++streak >= 5) {
      dt = std::min(dt * 1.5, cfg.dt_max);
      streak = 0;
    }
  }

  run.final_F_alpha = F_alpha_of(M);
  run.decay_slope = decay_slope(run.steps);
  return run;
}

// ---------------------------------------------------------------------------
// Maximum principle

MaxPrincipleReport monitor_max_principle(const FlowRun& run, double sign_tol, double slack) {
  MaxPrincipleReport rep;
  if (run.steps.empty()) {
    rep.summary = "empty run";
    return rep;
  }
  const StepRecord& first = run.steps.front();
  if (first.max_M <= 0.0) {
    rep.initial_sign = MaxPrincipleReport::Sign::nonpositive;
  } else if (first.min_M >= 0.0) {
    rep.initial_sign = MaxPrincipleReport::Sign::nonnegative;
  }
  std::ostringstream os;
  os.precision(3);
  if (rep.initial_sign == MaxPrincipleReport::Sign::mixed) {
    os << "sign preservation: not applicable (initial M has mixed sign)";
  } else {
    rep.sign_applicable = true;
    for (const auto& r : run.steps) {
      const double v = rep.initial_sign == MaxPrincipleReport::Sign::nonpositive ? r.max_M : -r.min_M;
      rep.worst_violation = std::max(rep.worst_violation, v);
    }
    rep.sign_preserved = rep.worst_violation <= sign_tol;
    os << "sign preservation: " << (rep.sign_preserved ? "held" : "VIOLATED") << " (worst excursion "
       << std::max(rep.worst_violation, 0.0) << ")";
  }

  const auto& cfg = run.config;
  const auto& F0 = run.initial_F_alpha;
  bool constant_target = !cfg.target.empty();
  double tbar = cfg.target.empty() ? 0.0 : cfg.target.front();
  for (double x : cfg.target) constant_target = constant_target && x == tbar;
  const double F_max0 = F0.empty() ? 0.0 : *std::max_element(F0.begin(), F0.end());
  const double M_max0 = first.max_M;
  if (cfg.kind == FlowKind::yamabe && cfg.alpha > 0.0 && constant_target && tbar < 0.0 && first.min_M >= 0.0 &&
      M_max0 > 0.0 && F_max0 < 0.0) {
    rep.envelope_applicable = true;
    for (const auto& r : run.steps) {
      const double bound = tbar * M_max0 / F_max0 * std::exp(cfg.alpha * tbar * r.t);
      const double sharp = tbar / (-1.0 + (tbar / M_max0 + 1.0) * std::exp(-cfg.alpha * tbar * r.t));
      rep.envelope_worst_ratio = std::max(rep.envelope_worst_ratio, r.max_M / bound);
      if (r.max_M > (1.0 + slack) * bound) rep.envelope_ok = false;
      if (r.max_M > (1.0 + slack) * sharp) rep.sharp_envelope_ok = false;
    }
    os << "; decay envelope: " << (rep.envelope_ok ? "held" : "VIOLATED") << " (worst max_M/bound "
       << rep.envelope_worst_ratio << ")";
  } else {
    os << "; decay envelope: not applicable";
  }
  rep.summary = os.str();
  return rep;
}

// ---------------------------------------------------------------------------
// Newton

NewtonResult newton_solve(MetricSurface start, const NewtonConfig& cfg) {
  NewtonResult res;
  res.state = std::move(start);
  MetricSurface& cur = res.state;
  const int n = cur.surface.vertex_count();
  const auto target = target_or_zero(cfg.target, n);
  res.flips = prepare_state(cur);

  auto residual = [&](const MetricSurface& s) {
    auto g = curvature(s.surface, s.metric);
    for (int i = 0; i < n; ++i) g[i] -= target[i] * std::exp(cfg.alpha * s.metric.u[i]);
    return g;
  };

  std::vector<double> g = residual(cur);
  for (int iter = 0;; ++iter) {
    res.residuals.push_back(sup_norm(g));
    if (res.residuals.back() <= cfg.tol) {
      res.converged = true;
      break;
    }
    if (iter >= cfg.max_iter) break;

    const JacobianL J = jacobian(cur.surface, cur.metric);
    Eigen::SparseMatrix<double> H = J.matrix();
    for (int i = 0; i < n; ++i) H.coeffRef(i, i) -= cfg.alpha * target[i] * std::exp(cfg.alpha * cur.metric.u[i]);
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(H);
    if (llt.info() != Eigen::Success) {
      throw SolveFailure("Newton system matrix is not positive definite at iteration " + std::to_string(iter), cur);
    }
    const Eigen::VectorXd delta = -llt.solve(Eigen::Map<const Eigen::VectorXd>(g.data(), n));

    const double norm0 = Eigen::Map<const Eigen::VectorXd>(g.data(), n).norm();
    double s = 1.0;
    const double s_min = std::ldexp(1.0, -30);
    while (true) {
      MetricSurface trial = cur;
      std::vector<double> u(n);
      for (int i = 0; i < n; ++i) u[i] = cur.metric.u[i] + s * delta[i];
      try {
        auto flips = rescale_with_surgery(trial.surface, trial.metric, u);
        auto g_trial = residual(trial);
        if (Eigen::Map<const Eigen::VectorXd>(g_trial.data(), n).norm() < norm0) {
          res.flips.insert(res.flips.end(), flips.begin(), flips.end());
          cur = std::move(trial);
          g = std::move(g_trial);
          break;
        }
      } catch (const Error&) {
        // Treated as an unacceptable trial point.
      }
      s *= 0.5;
      if (s < s_min) {
        throw SolveFailure("Newton line search failed at iteration " + std::to_string(iter), cur);
      }
    }
    res.step_sizes.push_back(s);
    ++res.iterations;
  }
  return res;
}

bool quadratic_tail(const std::vector<double>& residuals, double min_order, double floor, int* pairs) {
  int count = 0;
  bool ok = true;
  for (std::size_t k = 0; k + 1 < residuals.size(); ++k) {
    const double a = residuals[k];
    const double b = residuals[k + 1];
    if (!(a < 0.1) || !(b > floor)) continue;
    ++count;
    if (std::log(b) / std::log(a) < min_order) ok = false;
  }
  if (pairs) *pairs = count;
  return ok;
}

// ---------------------------------------------------------------------------
// Regimes

RegimeReport check_regime(int euler_char, double alpha, std::span<const double> target) {
  RegimeReport r;
  const double two_pi = 2.0 * kPi;
  r.convex = true;
  for (double x : target) r.convex = r.convex && alpha * x <= 0.0;

  bool all_nonpos = true, all_pos = true, all_below = true;
  double sum = 0.0;
  for (double x : target) {
    all_nonpos = all_nonpos && x <= 0.0;
    all_pos = all_pos && x > 0.0;
    all_below = all_below && x < two_pi;
    sum += x;
  }
  std::ostringstream os;
  if (alpha > 0.0) {
    r.existence = euler_char < 0 && all_nonpos;
    if (!r.existence) {
      os << "alpha > 0 needs Euler characteristic < 0 (have " << euler_char << ") and target <= 0";
    }
  } else if (alpha < 0.0) {
    r.existence = all_pos;
    if (!r.existence) os << "alpha < 0 needs target > 0 at every vertex";
  } else {
    r.existence = all_below && sum > two_pi * euler_char;
    if (!r.existence) {
      os << "alpha = 0 needs target < 2 pi at every vertex and total target (" << sum << ") > 2 pi chi ("
         << two_pi * euler_char << ")";
    }
  }
  if (!r.convex) {
    if (!os.str().empty()) os << "; ";
    os << "alpha * target > 0 somewhere, the curvature energy is not convex";
  }
  r.message = os.str();
  return r;
}

}  // namespace hypflow
