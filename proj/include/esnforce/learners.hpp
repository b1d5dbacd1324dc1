#pragma once

#include <Eigen/Dense>

#include "esnforce/config.hpp"

namespace esnforce {

/// RLS inverse-correlation matrix, P(0) = I/a.
struct RlsState {
  Eigen::MatrixXd p;
  double a = 1.0;

  static RlsState init(int n, double a);
};

/// Exponentially weighted memories of the regressor outer product and the
/// regressor-target product:
///   Omega(k) = (1-lambda) Omega(k-1) + lambda r r^T
///   Y(k)     = (1-lambda) Y(k-1)     + lambda r f
/// This is the time-domain realization of the filter
/// L(z) = lambda / (1 - (1-lambda) z^-1), which has unit DC gain.
struct FilterBank {
  Eigen::MatrixXd omega;
  Eigen::VectorXd y;
  double lambda = 0.5;

  static FilterBank init(int n, double lambda);
};

struct LearnerOutput {
  Eigen::VectorXd w_out;
  double e_prior = 0.0;
  double e_posterior = 0.0;
  double e_norm = 0.0;  // ||E(k)||, zero for the basic RLS rule
};

/// e(k) = r^T w_out(k-1) - f(k).
double prior_error(const Eigen::VectorXd& r, const Eigen::VectorXd& w_out,
                   double f);

/// Rank-1 update P -= P r r^T P / (1 + r^T P r), then symmetrize.
void rls_update_p(RlsState& rls, const Eigen::VectorXd& r);

/// Basic RLS FORCE step: w(k) = w(k-1) - P(k) (e(k) r).
LearnerOutput rls_force_step(const Eigen::VectorXd& w_out, RlsState& rls,
                             const Eigen::VectorXd& r, double f);

void filter_update(FilterBank& bank, const Eigen::VectorXd& r, double f);

/// E(k) = Omega(k) w(k-1) - Y(k), from the filtered quantities and the
/// current weight (not a filter over instantaneous r e products).
Eigen::VectorXd generalized_error(const FilterBank& bank,
                                  const Eigen::VectorXd& w_out);

/// Composite RLS FORCE step:
///   w(k) = w(k-1) - P(k) (e(k) r -+ beta E(k))
/// sign=paper subtracts beta E inside the parentheses; sign=gradient adds it
/// (descent on both error terms). beta=0 reproduces rls_force_step
/// bit-for-bit.
LearnerOutput composite_rls_step(const Eigen::VectorXd& w_out, RlsState& rls,
                                 FilterBank& bank, const Eigen::VectorXd& r,
                                 double f, double beta, CompositeSign sign);

/// LMS composite baseline: the composite update with the matrix rate P(k)
/// replaced by the scalar rate eta.
LearnerOutput composite_lms_step(const Eigen::VectorXd& w_out,
                                 FilterBank& bank, const Eigen::VectorXd& r,
                                 double f, double beta, double eta,
                                 CompositeSign sign);

}  // namespace esnforce
