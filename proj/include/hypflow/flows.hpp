#pragma once

// Prescribed alpha-curvature flows with surgery (Yamabe and Calabi type),
// their maximum-principle monitors, and a damped Newton solver.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hypflow/curvature.hpp"
#include "hypflow/surface.hpp"

namespace hypflow {

enum class FlowKind { yamabe, calabi };

const char* to_string(FlowKind k);
std::optional<FlowKind> parse_flow_kind(const std::string& s);

struct FlowConfig {
  FlowKind kind = FlowKind::yamabe;
  double alpha = 0.0;
  std::vector<double> target;  // per vertex; empty means 0
  double dt_init = 0.05;
  double dt_min = 1e-10;
  double dt_max = 2.0;
  double tol_converge = 1e-10;
  int max_steps = 100000;
  // Step-doubling acceptance: estimated error on u must stay below step_atol
  // and below step_rtol times the size of the step.
  double step_atol = 1e-8;
  double step_rtol = 0.1;
  double u_limit = 50.0;
  bool monitors = true;
};

enum class FlowStatus { converged, max_steps, failed };
const char* to_string(FlowStatus s);

struct StepRecord {
  double t = 0.0;
  double dt = 0.0;
  double sup_err = 0.0;  // sup |F_alpha - target|
  double min_M = 0.0;
  double max_M = 0.0;
  int flips = 0;
  double energy = 0.0;          // accumulated, starts at 0
  double curvature_jump = 0.0;  // sup |K| jump across this step's flips
  double gauss_bonnet = 0.0;    // residual at the accepted state
};

struct FlowRun {
  FlowConfig config;
  std::vector<StepRecord> steps;  // steps[0] is the initial state at t = 0
  std::vector<FlipEvent> flips;
  FlowStatus status = FlowStatus::max_steps;
  std::string reason;
  MetricSurface final_state;
  std::vector<double> initial_F_alpha;
  std::vector<double> final_F_alpha;
  int rejected_steps = 0;
  // Least-squares slope of log sup_err against t over the final half of the run.
  double decay_slope = 0.0;

  int accepted_steps() const { return static_cast<int>(steps.size()) - 1; }
};

// Makes the state Delaunay; returns the flips.
std::vector<FlipEvent> prepare_state(MetricSurface& s);

// Operational curvature F at cumulative factor u: the state is moved to u
// with surgery and K is evaluated on the resulting Delaunay triangulation.
std::vector<double> operational_curvature(MetricSurface& s, std::span<const double> u);

// target - F_alpha at the state's own u.
std::vector<double> yamabe_rhs(const MetricSurface& s, double alpha, std::span<const double> target);

// Delta_alpha (F_alpha - target), edge-sum form.
std::vector<double> calabi_rhs(const MetricSurface& s, double alpha, std::span<const double> target);
// -diag(w^-alpha) L (F_alpha - target), matrix form.
std::vector<double> calabi_rhs_matrix(const MetricSurface& s, double alpha, std::span<const double> target);

using StepCallback = std::function<void(const StepRecord&)>;

// Integrates from the given state (its metric.u is the starting factor).
// Never throws for numerical trouble; failures end the run with status failed.
FlowRun run_flow(MetricSurface start, const FlowConfig& cfg, const StepCallback& on_step = {});

struct MaxPrincipleReport {
  enum class Sign { nonpositive, nonnegative, mixed };
  Sign initial_sign = Sign::mixed;
  bool sign_applicable = false;
  bool sign_preserved = true;
  double worst_violation = 0.0;  // largest wrong-sign excursion of M
  bool envelope_applicable = false;
  bool envelope_ok = true;
  double envelope_worst_ratio = 0.0;  // max over samples of max_M / bound
  bool sharp_envelope_ok = true;
  std::string summary;
};

// Sign preservation of M = F_alpha - target along the run, and for alpha > 0
// with a constant negative target and M(0) >= 0 the exponential envelope
//   max M(t) <= (target * max M(0) / max F_alpha(0)) e^{alpha target t}
// (checked with `slack` relative allowance) plus the sharper logistic bound.
MaxPrincipleReport monitor_max_principle(const FlowRun& run, double sign_tol = 1e-9, double slack = 0.1);

struct NewtonConfig {
  double alpha = 0.0;
  std::vector<double> target;
  double tol = 1e-10;
  int max_iter = 100;
};

struct NewtonResult {
  bool converged = false;
  int iterations = 0;
  std::vector<double> residuals;  // sup |g| before each iteration and at the end
  std::vector<double> step_sizes;
  std::vector<FlipEvent> flips;
  MetricSurface state;
};

// Damped Newton on g(u) = F(u) - target w^alpha with Hessian
// L - alpha diag(target w^alpha). Starts from start.metric.u. Throws
// SolveFailure on a non-positive-definite system or a failed line search.
NewtonResult newton_solve(MetricSurface start, const NewtonConfig& cfg);

class SolveFailure : public SolverError {
 public:
  SolveFailure(const std::string& what, MetricSurface state) : SolverError(what), state_(std::move(state)) {}
  const MetricSurface& state() const { return state_; }

 private:
  MetricSurface state_;
};

// True when every ratio log r_{k+1} / log r_k with r_k < 0.1 and
// r_{k+1} > floor is at least min_order; pairs counted in `pairs`.
bool quadratic_tail(const std::vector<double>& residuals, double min_order = 1.8, double floor = 1e-12,
                    int* pairs = nullptr);

struct RegimeReport {
  // One of the three sufficient conditions for existence holds.
  bool existence = false;
  // alpha * target <= 0 componentwise (strict convexity of the energy).
  bool convex = false;
  std::string message;
};

RegimeReport check_regime(int euler_char, double alpha, std::span<const double> target);

}  // namespace hypflow
