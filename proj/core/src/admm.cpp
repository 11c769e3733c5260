#include "dsproj/admm.hpp"

#include <cmath>

namespace dsproj {

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kSolved: return "solved";
    case SolveStatus::kMaxIters: return "max-iters";
    case SolveStatus::kInfeasibleInput: return "infeasible-input";
  }
  return "unknown";
}

SolverState make_initial_state(const ReducedProblem& rp) {
  SolverState s;
  s.x = Eigen::VectorXd::Zero(rp.m());
  s.w = Eigen::VectorXd::Zero(rp.m());
  s.z = Eigen::VectorXd::Zero(rp.n());
  s.y = Eigen::VectorXd::Zero(rp.n());
  s.x_tilde = Eigen::VectorXd::Zero(rp.m());
  s.z_tilde = Eigen::VectorXd::Zero(rp.n());
  s.iter = 0;
  return s;
}

namespace {

void validate_config(const SolverConfig& cfg) {
  if (!(cfg.rho > 0.0)) throw SpecificationError("rho must be positive");
  if (!(cfg.sigma > 0.0)) throw SpecificationError("sigma must be positive");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 2.0))
    throw SpecificationError("alpha must lie in (0, 2)");
  if (cfg.eps_abs < 0.0) throw SpecificationError("eps_abs must be nonnegative");
  if (cfg.max_iters < 1) throw SpecificationError("max_iters must be at least 1");
  if (cfg.check_interval < 1)
    throw SpecificationError("check_interval must be at least 1");
}

bool converged(const Residuals& res, const SolverState& state,
               const ReducedProblem& rp, const SolverConfig& cfg) {
  if (cfg.eps_rel <= 0.0)
    return res.primal <= cfg.eps_abs && res.dual <= cfg.eps_abs;
  const double prim_scale =
      std::max(rp.apply_A(state.x).lpNorm<Eigen::Infinity>(),
               rp.target().lpNorm<Eigen::Infinity>());
  const double dual_scale = std::max(
      {rp.p_squared().cwiseProduct(state.x).lpNorm<Eigen::Infinity>(),
       rp.p_squared().cwiseProduct(rp.c_u()).lpNorm<Eigen::Infinity>(),
       rp.apply_At(state.y).lpNorm<Eigen::Infinity>(),
       state.w.lpNorm<Eigen::Infinity>()});
  return res.primal <= cfg.eps_abs + cfg.eps_rel * prim_scale &&
         res.dual <= cfg.eps_abs + cfg.eps_rel * dual_scale;
}

/// Feasible starting point from the matching certificate: the symmetrized
/// permutation matrix (M + M') / 2 scaled by the target, which is exactly
/// feasible for uniform targets.
void warm_start_from_matching(SolverState& state, const ReducedProblem& rp,
                              const FeasibilityCertificate& cert) {
  auto find_variable = [&rp](int row, int col) -> Eigen::Index {
    if (row > col) std::swap(row, col);
    Eigen::Index lo = 0, hi = rp.m();
    while (lo < hi) {
      const Eigen::Index mid = (lo + hi) / 2;
      const int mc = rp.col_of(mid), mr = rp.row_of(mid);
      if (mc < col || (mc == col && mr < row))
        lo = mid + 1;
      else
        hi = mid;
    }
    return lo;  // the matching lies inside the pattern, so this is a hit
  };
  for (auto [r, c] : cert.matching) {
    const Eigen::Index k = find_variable(r, c);
    // x_u holds X(i,i)/2 on the diagonal and X(i,j) off it; each matching
    // pair contributes r_i/2 to the symmetrized point.
    state.x[k] += 0.5 * rp.target()[r - 1];
  }
  state.z = rp.target();
}

}  // namespace

void admm_step(SolverState& state, const ReducedProblem& rp, const SolverConfig& cfg,
               const KktSolver& kkt) {
  const double rho = cfg.rho, sigma = cfg.sigma, alpha = cfg.alpha;

  // Line 3 rhs: sigma x - w + A'(rho z - y) + P c_u.
  Eigen::VectorXd rhs(rp.m());
  rp.apply_At(rho * state.z - state.y, rhs);
  rhs += sigma * state.x - state.w + rp.p_squared().cwiseProduct(rp.c_u());

  kkt.solve(rhs, state.x_tilde, state.z_tilde);

  // Relaxed iterates.
  Eigen::VectorXd x_relaxed = alpha * state.x_tilde + (1.0 - alpha) * state.x;
  Eigen::VectorXd z_relaxed = alpha * state.z_tilde + (1.0 - alpha) * state.z;

  // x-block: projection onto the nonnegative orthant; the multiplier enters
  // the projection argument scaled by 1/sigma.
  state.x = (x_relaxed + state.w / sigma).cwiseMax(0.0);
  state.w += sigma * (x_relaxed - state.x);

  // z-block: projection onto {z = r} is the constant r.
  state.y += rho * (z_relaxed - rp.target());
  state.z = rp.target();

  ++state.iter;
  if (!state.x.allFinite() || !state.w.allFinite() || !state.y.allFinite())
    throw NumericalError("ADMM iterate diverged (non-finite values) at iteration " +
                         std::to_string(state.iter));
}

Residuals compute_residuals(const SolverState& state, const ReducedProblem& rp) {
  Residuals res;
  res.primal = (rp.apply_A(state.x) - rp.target()).lpNorm<Eigen::Infinity>();
  res.dual = (rp.p_squared().cwiseProduct(state.x - rp.c_u()) + rp.apply_At(state.y) +
              state.w)
                 .lpNorm<Eigen::Infinity>();
  return res;
}

double objective_value(const ReducedProblem& rp, const Eigen::VectorXd& x) {
  return 0.5 * rp.p().cwiseProduct(x - rp.c_u()).squaredNorm();
}

Solution solve(const ProblemSpec& spec, const SolverConfig& cfg) {
  validate_config(cfg);

  Solution sol;
  sol.certificate = feasibility_check(pattern_of(spec.matrix));
  if (!sol.certificate.feasible) {
    sol.status = SolveStatus::kInfeasibleInput;
    return sol;
  }

  const ReducedProblem rp = build_reduced_problem(spec);

  // The unconstrained optimum x = c_u is nonnegative by construction; when it
  // already meets the row-sum constraints the problem is solved with zero
  // iterations (stationarity and complementarity hold exactly at w = y = 0).
  {
    SolverState candidate = make_initial_state(rp);
    candidate.x = rp.c_u();
    candidate.z = rp.target();
    const Residuals res = compute_residuals(candidate, rp);
    if (converged(res, candidate, rp, cfg)) {
      sol.X = rp.recover_X(rp.c_u());
      sol.objective = 0.0;
      sol.residuals = res;
      sol.iterations = 0;
      sol.status = SolveStatus::kSolved;
      if (cfg.record_trace) sol.trace.push_back({0, res.primal, res.dual, 0.0});
      return sol;
    }
  }

  const KktSolver kkt(rp, cfg.rho, cfg.sigma, cfg.backend);

  SolverState state = make_initial_state(rp);
  if (cfg.warm_start) warm_start_from_matching(state, rp, sol.certificate);

  Residuals res;
  bool res_current = false;
  sol.status = SolveStatus::kMaxIters;
  while (state.iter < cfg.max_iters) {
    admm_step(state, rp, cfg, kkt);
    res_current = false;
    if (state.iter % cfg.check_interval == 0) {
      res = compute_residuals(state, rp);
      res_current = true;
      if (cfg.record_trace)
        sol.trace.push_back(
            {state.iter, res.primal, res.dual, objective_value(rp, state.x)});
      if (converged(res, state, rp, cfg)) {
        sol.status = SolveStatus::kSolved;
        break;
      }
    }
  }
  if (!res_current) {
    res = compute_residuals(state, rp);
    if (converged(res, state, rp, cfg)) sol.status = SolveStatus::kSolved;
  }

  sol.X = rp.recover_X(state.x);
  sol.objective = objective_value(rp, state.x);
  sol.residuals = res;
  sol.iterations = state.iter;
  return sol;
}

}  // namespace dsproj
