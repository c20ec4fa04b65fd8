#ifndef SEARCHPLAN_QP_HPP
#define SEARCHPLAN_QP_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <limits>

namespace searchplan {

/// Convex QP in the form
///   minimize    0.5 x' P x + q' x
///   subject to  row_lower <= A x <= row_upper
///               var_lower <=   x <= var_upper
/// with P symmetric positive semidefinite. Equalities are rows with
/// row_lower == row_upper; one-sided rows use +-infinity.
struct QpProblem {
  Eigen::SparseMatrix<double> P;
  Eigen::VectorXd q;
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd row_lower;
  Eigen::VectorXd row_upper;
  Eigen::VectorXd var_lower;
  Eigen::VectorXd var_upper;

  int num_vars() const { return static_cast<int>(q.size()); }
  int num_rows() const { return static_cast<int>(A.rows()); }
};

enum class QpStatus {
  solved,
  primal_infeasible,
  dual_infeasible,
  max_iterations,
  numerical_error,
};

struct QpSettings {
  double eps_abs{1e-9};
  double eps_rel{1e-9};
  double eps_infeasible{1e-10};
  int max_iterations{200000};
  int check_interval{25};
  double rho{0.1};
  double rho_eq_scale{1e3};    // equality rows get rho * this
  double sigma{1e-6};
  double alpha{1.6};
  bool adaptive_rho{true};
  int scaling_iterations{10};
  bool polish{true};
  double polish_delta{1e-7};
  int polish_refine_steps{4};
};

struct QpSolution {
  QpStatus status{QpStatus::numerical_error};
  Eigen::VectorXd x;       // primal point
  Eigen::VectorXd y;       // duals for [A; I] rows (length m + n)
  double objective{0.0};
  double primal_residual{std::numeric_limits<double>::infinity()};
  double dual_residual{std::numeric_limits<double>::infinity()};
  int iterations{0};
  bool polished{false};
};

/// Operator-splitting QP solver. The KKT factorization depends only on the
/// constraint matrix, so bound changes (branching) re-solve without
/// refactorizing; warm starts carry the parent iterates.
class QpSolver {
 public:
  explicit QpSolver(const QpProblem& problem, QpSettings settings = {});

  int num_vars() const { return n_; }
  int num_rows() const { return m_; }

  /// Replace the local bounds of one variable (keeps the factorization).
  void set_var_bounds(int var, double lo, double hi);
  /// Restore the bounds the solver was constructed with.
  void reset_bounds();

  void warm_start(const Eigen::VectorXd& x, const Eigen::VectorXd& y);
  void cold_start();

  QpSolution solve();

 private:
  void equilibrate(const QpProblem& problem);
  void factor();
  bool polish(QpSolution& sol) const;
  double unscaled_objective(const Eigen::VectorXd& x) const;

  QpSettings settings_;
  int n_{0};   // variables
  int m_{0};   // user rows (total rows = m_ + n_)

  // Original (unscaled) data; Abar = [A; I].
  Eigen::SparseMatrix<double> P_orig_;
  Eigen::VectorXd q_orig_;
  Eigen::SparseMatrix<double> Abar_orig_;

  // Scaled working data.
  Eigen::SparseMatrix<double> P_;
  Eigen::VectorXd q_;
  Eigen::SparseMatrix<double> A_;   // scaled Abar
  Eigen::VectorXd lower_, upper_;   // scaled, current (after branching)
  Eigen::VectorXd lower0_, upper0_;
  Eigen::VectorXd D_, E_;           // x and row equilibration
  double cost_scale_{1.0};
  Eigen::VectorXd rho_;
  Eigen::ArrayXd rho_inv_;

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
  Eigen::SparseMatrix<double> kkt_;
  bool factor_ok_{false};

  // Iterates (scaled); kept across solves for warm starting.
  Eigen::VectorXd xs_, zs_, ys_;
};

}  // namespace searchplan

#endif  // SEARCHPLAN_QP_HPP
