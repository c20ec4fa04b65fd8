#include "searchplan/qp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace searchplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double inf_norm(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

Eigen::VectorXd clamp(const Eigen::VectorXd& v, const Eigen::VectorXd& lo,
                      const Eigen::VectorXd& hi) {
  return v.cwiseMax(lo).cwiseMin(hi);
}

}  // namespace

QpSolver::QpSolver(const QpProblem& problem, QpSettings settings)
    : settings_(settings) {
  n_ = problem.num_vars();
  m_ = problem.num_rows();
  if (problem.P.rows() != n_ || problem.P.cols() != n_) {
    throw std::invalid_argument("QpSolver: P dimension mismatch");
  }
  if (m_ > 0 && problem.A.cols() != n_) {
    throw std::invalid_argument("QpSolver: A dimension mismatch");
  }
  if (problem.row_lower.size() != m_ || problem.row_upper.size() != m_ ||
      problem.var_lower.size() != n_ || problem.var_upper.size() != n_) {
    throw std::invalid_argument("QpSolver: bound size mismatch");
  }

  // Abar = [A; I]: variable bounds ride along as identity rows so that
  // branching only ever touches bounds, never the matrix.
  const int mt = m_ + n_;
  P_orig_ = problem.P;
  P_orig_.makeCompressed();
  q_orig_ = problem.q;
  {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(problem.A.nonZeros() + n_);
    for (int k = 0; k < problem.A.outerSize(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(problem.A, k); it;
           ++it) {
        trips.emplace_back(static_cast<int>(it.row()),
                           static_cast<int>(it.col()), it.value());
      }
    }
    for (int i = 0; i < n_; ++i) trips.emplace_back(m_ + i, i, 1.0);
    Abar_orig_.resize(mt, n_);
    Abar_orig_.setFromTriplets(trips.begin(), trips.end());
    Abar_orig_.makeCompressed();
  }

  eq_row_.assign(mt, false);
  for (int i = 0; i < m_; ++i) {
    if (std::isfinite(problem.row_lower[i]) &&
        problem.row_lower[i] == problem.row_upper[i]) {
      eq_row_[i] = true;
    }
  }

  equilibrate(problem);
  factor();
  cold_start();
}

void QpSolver::equilibrate(const QpProblem& problem) {
  const int mt = m_ + n_;
  D_ = Eigen::VectorXd::Ones(n_);
  E_ = Eigen::VectorXd::Ones(mt);
  P_ = P_orig_;
  q_ = q_orig_;
  A_ = Abar_orig_;
  cost_scale_ = 1.0;

  // Modified Ruiz equilibration of [[P, A'], [A, 0]].
  for (int iter = 0; iter < settings_.scaling_iterations; ++iter) {
    Eigen::VectorXd col_norm = Eigen::VectorXd::Zero(n_);
    Eigen::VectorXd row_norm = Eigen::VectorXd::Zero(mt);
    for (int k = 0; k < P_.outerSize(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(P_, k); it; ++it) {
        col_norm[it.col()] = std::max(col_norm[it.col()], std::abs(it.value()));
      }
    }
    for (int k = 0; k < A_.outerSize(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(A_, k); it; ++it) {
        const double a = std::abs(it.value());
        col_norm[it.col()] = std::max(col_norm[it.col()], a);
        row_norm[it.row()] = std::max(row_norm[it.row()], a);
      }
    }
    Eigen::VectorXd dv(n_), ev(mt);
    for (int j = 0; j < n_; ++j) {
      dv[j] = col_norm[j] > 1e-12 ? 1.0 / std::sqrt(col_norm[j]) : 1.0;
    }
    for (int i = 0; i < mt; ++i) {
      ev[i] = row_norm[i] > 1e-12 ? 1.0 / std::sqrt(row_norm[i]) : 1.0;
    }
    P_ = dv.asDiagonal() * P_ * dv.asDiagonal();
    A_ = ev.asDiagonal() * A_ * dv.asDiagonal();
    q_ = dv.cwiseProduct(q_);
    D_ = D_.cwiseProduct(dv);
    E_ = E_.cwiseProduct(ev);
  }

  // Cost scaling keeps the objective in the same range as the constraints.
  double p_mean = 0.0;
  {
    Eigen::VectorXd col_norm = Eigen::VectorXd::Zero(n_);
    for (int k = 0; k < P_.outerSize(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(P_, k); it; ++it) {
        col_norm[it.col()] = std::max(col_norm[it.col()], std::abs(it.value()));
      }
    }
    p_mean = n_ > 0 ? col_norm.sum() / n_ : 0.0;
  }
  const double denom = std::max(p_mean, inf_norm(q_));
  cost_scale_ = denom > 1e-12 ? 1.0 / std::max(1e-6, denom) : 1.0;
  cost_scale_ = std::min(cost_scale_, 1.0);
  P_ *= cost_scale_;
  q_ *= cost_scale_;

  // Scaled bounds. Infinities survive scaling untouched.
  const int mtot = m_ + n_;
  lower0_.resize(mtot);
  upper0_.resize(mtot);
  for (int i = 0; i < mtot; ++i) {
    const double lo = i < m_ ? problem.row_lower[i] : problem.var_lower[i - m_];
    const double hi = i < m_ ? problem.row_upper[i] : problem.var_upper[i - m_];
    if (lo > hi) throw std::invalid_argument("QpSolver: lower > upper bound");
    lower0_[i] = std::isfinite(lo) ? E_[i] * lo : lo;
    upper0_[i] = std::isfinite(hi) ? E_[i] * hi : hi;
  }
  lower_ = lower0_;
  upper_ = upper0_;

  rho_.resize(mtot);
  for (int i = 0; i < mtot; ++i) {
    rho_[i] = eq_row_[i] ? settings_.rho * settings_.rho_eq_scale
                         : settings_.rho;
  }
  rho_inv_ = rho_.array().inverse();
}

void QpSolver::factor() {
  const int mt = m_ + n_;
  const int dim = n_ + mt;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(P_.nonZeros() + A_.nonZeros() + dim);
  // Lower triangle of [[P + sigma I, A'], [A, -1/rho]].
  for (int k = 0; k < P_.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(P_, k); it; ++it) {
      if (it.row() > it.col()) {
        trips.emplace_back(static_cast<int>(it.row()),
                           static_cast<int>(it.col()), it.value());
      }
    }
  }
  Eigen::VectorXd pdiag = Eigen::VectorXd::Zero(n_);
  for (int k = 0; k < P_.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(P_, k); it; ++it) {
      if (it.row() == it.col()) pdiag[it.row()] = it.value();
    }
  }
  for (int j = 0; j < n_; ++j) {
    trips.emplace_back(j, j, pdiag[j] + settings_.sigma);
  }
  for (int k = 0; k < A_.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(A_, k); it; ++it) {
      trips.emplace_back(n_ + static_cast<int>(it.row()),
                         static_cast<int>(it.col()), it.value());
    }
  }
  for (int i = 0; i < mt; ++i) {
    trips.emplace_back(n_ + i, n_ + i, -rho_inv_[i]);
  }
  kkt_.resize(dim, dim);
  kkt_.setFromTriplets(trips.begin(), trips.end());
  kkt_.makeCompressed();
  ldlt_.compute(kkt_);
  factor_ok_ = (ldlt_.info() == Eigen::Success);
}

void QpSolver::set_var_bounds(int var, double lo, double hi) {
  if (var < 0 || var >= n_) throw std::out_of_range("set_var_bounds: index");
  const int i = m_ + var;
  lower_[i] = std::isfinite(lo) ? E_[i] * lo : lo;
  upper_[i] = std::isfinite(hi) ? E_[i] * hi : hi;
}

void QpSolver::reset_bounds() {
  lower_ = lower0_;
  upper_ = upper0_;
}

void QpSolver::warm_start(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const int mt = m_ + n_;
  if (x.size() != n_ || y.size() != mt) {
    throw std::invalid_argument("warm_start: size mismatch");
  }
  xs_ = x.cwiseQuotient(D_);
  ys_ = cost_scale_ * y.cwiseQuotient(E_);
  zs_ = clamp(A_ * xs_, lower_, upper_);
}

void QpSolver::cold_start() {
  const int mt = m_ + n_;
  xs_ = Eigen::VectorXd::Zero(n_);
  ys_ = Eigen::VectorXd::Zero(mt);
  zs_ = clamp(Eigen::VectorXd::Zero(mt), lower_, upper_);
}

double QpSolver::unscaled_objective(const Eigen::VectorXd& x) const {
  return 0.5 * x.dot(P_orig_ * x) + q_orig_.dot(x);
}

QpSolution QpSolver::solve() {
  QpSolution sol;
  const int mt = m_ + n_;
  if (!factor_ok_) {
    // Retry with a heavier regularizer before giving up.
    for (double sigma = settings_.sigma * 100.0;
         sigma <= 1e-2 && !factor_ok_; sigma *= 100.0) {
      settings_.sigma = sigma;
      factor();
    }
    if (!factor_ok_) {
      sol.status = QpStatus::numerical_error;
      return sol;
    }
  }

  Eigen::VectorXd rhs(n_ + mt), xz(n_ + mt);
  Eigen::VectorXd x_prev, y_prev;
  int refactor_budget = 20;

  for (int iter = 1; iter <= settings_.max_iterations; ++iter) {
    x_prev = xs_;
    y_prev = ys_;

    rhs.head(n_) = settings_.sigma * xs_ - q_;
    rhs.tail(mt) = zs_ - rho_inv_.matrix().cwiseProduct(ys_);
    xz = ldlt_.solve(rhs);
    const auto x_tilde = xz.head(n_);
    const auto nu = xz.tail(mt);

    Eigen::VectorXd z_tilde =
        zs_ + rho_inv_.matrix().cwiseProduct(nu - ys_);
    xs_ = settings_.alpha * x_tilde + (1.0 - settings_.alpha) * xs_;
    Eigen::VectorXd z_relaxed =
        settings_.alpha * z_tilde + (1.0 - settings_.alpha) * zs_;
    Eigen::VectorXd z_new =
        clamp(z_relaxed + rho_inv_.matrix().cwiseProduct(ys_), lower_, upper_);
    ys_ = ys_ + rho_.cwiseProduct(z_relaxed - z_new);
    zs_ = z_new;

    if (iter % settings_.check_interval != 0 &&
        iter != settings_.max_iterations) {
      continue;
    }

    // Unscaled iterates and residuals.
    const Eigen::VectorXd x_u = D_.cwiseProduct(xs_);
    const Eigen::VectorXd z_u = zs_.cwiseQuotient(E_);
    const Eigen::VectorXd y_u = E_.cwiseProduct(ys_) / cost_scale_;
    const Eigen::VectorXd Ax = Abar_orig_ * x_u;
    const Eigen::VectorXd Px = P_orig_ * x_u;
    const Eigen::VectorXd Aty = Abar_orig_.transpose() * y_u;

    const double rp = inf_norm(Ax - z_u);
    const double rd = inf_norm(Px + q_orig_ + Aty);
    const double eps_prim =
        settings_.eps_abs +
        settings_.eps_rel * std::max(inf_norm(Ax), inf_norm(z_u));
    const double eps_dual =
        settings_.eps_abs +
        settings_.eps_rel * std::max({inf_norm(Px), inf_norm(Aty),
                                      inf_norm(q_orig_)});

    if (rp <= eps_prim && rd <= eps_dual) {
      sol.status = QpStatus::solved;
      sol.x = x_u;
      sol.y = y_u;
      sol.primal_residual = rp;
      sol.dual_residual = rd;
      sol.iterations = iter;
      if (settings_.polish) polish(sol);
      sol.objective = unscaled_objective(sol.x);
      return sol;
    }

    // Infeasibility certificates from the iterate differences.
    const Eigen::VectorXd dy_u =
        E_.cwiseProduct(ys_ - y_prev) / cost_scale_;
    const double dy_norm = inf_norm(dy_u);
    if (dy_norm > settings_.eps_infeasible) {
      const double eps = settings_.eps_infeasible * dy_norm;
      if (inf_norm(Abar_orig_.transpose() * dy_u) <= eps) {
        double support = 0.0;
        bool unbounded_term = false;
        for (int i = 0; i < mt; ++i) {
          const double lo = i < m_ ? lower0_[i] / E_[i] : lower0_[i] / E_[i];
          const double hi = upper0_[i] / E_[i];
          const double lo_cur = lower_[i] / E_[i];
          const double hi_cur = upper_[i] / E_[i];
          (void)lo;
          (void)hi;
          if (dy_u[i] > 0) {
            if (!std::isfinite(hi_cur)) { unbounded_term = true; break; }
            support += hi_cur * dy_u[i];
          } else if (dy_u[i] < 0) {
            if (!std::isfinite(lo_cur)) { unbounded_term = true; break; }
            support += lo_cur * dy_u[i];
          }
        }
        if (!unbounded_term && support <= -eps) {
          sol.status = QpStatus::primal_infeasible;
          sol.iterations = iter;
          return sol;
        }
      }
    }
    const Eigen::VectorXd dx_u = D_.cwiseProduct(xs_ - x_prev);
    const double dx_norm = inf_norm(dx_u);
    if (dx_norm > settings_.eps_infeasible) {
      const double eps = settings_.eps_infeasible * dx_norm;
      if (inf_norm(P_orig_ * dx_u) <= eps && q_orig_.dot(dx_u) <= -eps) {
        const Eigen::VectorXd Adx = Abar_orig_ * dx_u;
        bool in_cone = true;
        for (int i = 0; i < mt && in_cone; ++i) {
          if (std::isfinite(upper_[i]) && Adx[i] > eps) in_cone = false;
          if (std::isfinite(lower_[i]) && Adx[i] < -eps) in_cone = false;
        }
        if (in_cone) {
          sol.status = QpStatus::dual_infeasible;
          sol.iterations = iter;
          return sol;
        }
      }
    }

    // Adaptive rho keeps the two residuals balanced.
    if (settings_.adaptive_rho && refactor_budget > 0 &&
        iter % (settings_.check_interval * 8) == 0) {
      const double prim_rel =
          rp / std::max(1e-12, std::max(inf_norm(Ax), inf_norm(z_u)));
      const double dual_rel =
          rd / std::max(1e-12, std::max({inf_norm(Px), inf_norm(Aty),
                                         inf_norm(q_orig_)}));
      const double ratio =
          std::sqrt(prim_rel / std::max(1e-16, dual_rel));
      if (ratio > 5.0 || ratio < 0.2) {
        const double factor_change = std::clamp(ratio, 1e-3, 1e3);
        settings_.rho =
            std::clamp(settings_.rho * factor_change, 1e-6, 1e6);
        for (int i = 0; i < mt; ++i) {
          rho_[i] = eq_row_[i] ? settings_.rho * settings_.rho_eq_scale
                               : settings_.rho;
        }
        rho_inv_ = rho_.array().inverse();
        factor();
        if (!factor_ok_) {
          sol.status = QpStatus::numerical_error;
          return sol;
        }
        --refactor_budget;
      }
    }
  }

  // Out of iterations: report the best point honestly.
  const Eigen::VectorXd x_u = D_.cwiseProduct(xs_);
  const Eigen::VectorXd z_u = zs_.cwiseQuotient(E_);
  const Eigen::VectorXd y_u = E_.cwiseProduct(ys_) / cost_scale_;
  sol.status = QpStatus::max_iterations;
  sol.x = x_u;
  sol.y = y_u;
  sol.primal_residual = inf_norm(Abar_orig_ * x_u - z_u);
  sol.dual_residual =
      inf_norm(P_orig_ * x_u + q_orig_ + Abar_orig_.transpose() * y_u);
  sol.iterations = settings_.max_iterations;
  sol.objective = unscaled_objective(x_u);
  return sol;
}

bool QpSolver::polish(QpSolution& sol) const {
  const int mt = m_ + n_;
  // Guess the active set from the dual signs.
  std::vector<int> active;
  std::vector<double> active_rhs;
  active.reserve(mt);
  for (int i = 0; i < mt; ++i) {
    const double lo = lower_[i] / E_[i];
    const double hi = upper_[i] / E_[i];
    if (std::isfinite(lo) && lo == hi) {
      active.push_back(i);
      active_rhs.push_back(lo);
    } else if (sol.y[i] < 0.0 && std::isfinite(lo)) {
      active.push_back(i);
      active_rhs.push_back(lo);
    } else if (sol.y[i] > 0.0 && std::isfinite(hi)) {
      active.push_back(i);
      active_rhs.push_back(hi);
    }
  }
  const int ma = static_cast<int>(active.size());
  const int dim = n_ + ma;

  // Regularized KKT of the equality-constrained QP on the active set.
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(P_orig_.nonZeros() + Abar_orig_.nonZeros() + dim);
  for (int k = 0; k < P_orig_.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(P_orig_, k); it; ++it) {
      if (it.row() > it.col()) {
        trips.emplace_back(static_cast<int>(it.row()),
                           static_cast<int>(it.col()), it.value());
      }
    }
  }
  Eigen::VectorXd pdiag = Eigen::VectorXd::Zero(n_);
  for (int k = 0; k < P_orig_.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(P_orig_, k); it; ++it) {
      if (it.row() == it.col()) pdiag[it.row()] = it.value();
    }
  }
  for (int j = 0; j < n_; ++j) {
    trips.emplace_back(j, j, pdiag[j] + settings_.polish_delta);
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> Arow = Abar_orig_;
  for (int a = 0; a < ma; ++a) {
    const int row = active[a];
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(
             Arow, row);
         it; ++it) {
      trips.emplace_back(n_ + a, static_cast<int>(it.col()), it.value());
    }
    trips.emplace_back(n_ + a, n_ + a, -settings_.polish_delta);
  }
  Eigen::SparseMatrix<double> kkt(dim, dim);
  kkt.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> fact(kkt);
  if (fact.info() != Eigen::Success) return false;

  Eigen::VectorXd rhs(dim);
  rhs.head(n_) = -q_orig_;
  for (int a = 0; a < ma; ++a) rhs[n_ + a] = active_rhs[a];

  Eigen::VectorXd sol_vec = fact.solve(rhs);
  // Iterative refinement against the unregularized KKT operator.
  for (int step = 0; step < settings_.polish_refine_steps; ++step) {
    Eigen::VectorXd resid = rhs;
    const auto xv = sol_vec.head(n_);
    const auto nv = sol_vec.tail(ma);
    resid.head(n_) -= P_orig_ * xv;
    for (int a = 0; a < ma; ++a) {
      const int row = active[a];
      double dot = 0.0;
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(
               Arow, row);
           it; ++it) {
        dot += it.value() * xv[it.col()];
        // Accumulate A_act' nu into the stationarity residual lazily below.
      }
      resid[n_ + a] -= dot;
    }
    // Stationarity: subtract A_act' nu.
    for (int a = 0; a < ma; ++a) {
      const int row = active[a];
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(
               Arow, row);
           it; ++it) {
        resid[it.col()] -= it.value() * nv[a];
      }
    }
    sol_vec += fact.solve(resid);
  }

  const Eigen::VectorXd x_pol = sol_vec.head(n_);
  Eigen::VectorXd y_pol = Eigen::VectorXd::Zero(mt);
  for (int a = 0; a < ma; ++a) y_pol[active[a]] = sol_vec[n_ + a];

  const Eigen::VectorXd Ax = Abar_orig_ * x_pol;
  Eigen::VectorXd z_pol(mt);
  for (int i = 0; i < mt; ++i) {
    z_pol[i] = std::min(std::max(Ax[i], lower_[i] / E_[i]), upper_[i] / E_[i]);
  }
  const double rp = inf_norm(Ax - z_pol);
  const double rd = inf_norm(P_orig_ * x_pol + q_orig_ +
                             Abar_orig_.transpose() * y_pol);
  if (std::max(rp, rd) <=
      std::max({sol.primal_residual, sol.dual_residual, 1e-12})) {
    sol.x = x_pol;
    sol.y = y_pol;
    sol.primal_residual = rp;
    sol.dual_residual = rd;
    sol.polished = true;
    return true;
  }
  return false;
}

}  // namespace searchplan
