#include "esnforce/learners.hpp"

#include <cmath>
#include <stdexcept>

namespace esnforce {

namespace {

double signed_beta(double beta, CompositeSign sign) {
  return sign == CompositeSign::paper ? -beta : beta;
}

}  // namespace

RlsState RlsState::init(int n, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("rls: a must be > 0");
  return {Eigen::MatrixXd::Identity(n, n) / a, a};
}

FilterBank FilterBank::init(int n, double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("filter: lambda must be in (0, 1]");
  }
  return {Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n), lambda};
}

double prior_error(const Eigen::VectorXd& r, const Eigen::VectorXd& w_out,
                   double f) {
  if (r.size() != w_out.size()) {
    throw std::invalid_argument("prior_error: length mismatch");
  }
  return r.dot(w_out) - f;
}

void rls_update_p(RlsState& rls, const Eigen::VectorXd& r) {
  const Eigen::VectorXd pr = rls.p * r;
  const double denom = 1.0 + r.dot(pr);
  if (!std::isfinite(denom) || denom == 0.0) {
    throw std::runtime_error("rls: non-finite update denominator");
  }
  rls.p.noalias() -= (pr * pr.transpose()) / denom;
  rls.p = 0.5 * (rls.p + rls.p.transpose()).eval();
}

LearnerOutput rls_force_step(const Eigen::VectorXd& w_out, RlsState& rls,
                             const Eigen::VectorXd& r, double f) {
  LearnerOutput out;
  out.e_prior = prior_error(r, w_out, f);
  rls_update_p(rls, r);
  const Eigen::VectorXd delta = rls.p * (out.e_prior * r);
  out.w_out = w_out - delta;
  // e_prior - r'delta equals r'w_new - f exactly, but avoids cancelling the
  // two large terms r'w_new and f against each other
  out.e_posterior = out.e_prior - r.dot(delta);
  out.e_norm = 0.0;
  return out;
}

void filter_update(FilterBank& bank, const Eigen::VectorXd& r, double f) {
  const double keep = 1.0 - bank.lambda;
  bank.omega = keep * bank.omega + bank.lambda * (r * r.transpose());
  bank.y = keep * bank.y + bank.lambda * (f * r);
}

Eigen::VectorXd generalized_error(const FilterBank& bank,
                                  const Eigen::VectorXd& w_out) {
  if (bank.y.size() != w_out.size()) {
    throw std::invalid_argument("generalized_error: length mismatch");
  }
  return bank.omega * w_out - bank.y;
}

LearnerOutput composite_rls_step(const Eigen::VectorXd& w_out, RlsState& rls,
                                 FilterBank& bank, const Eigen::VectorXd& r,
                                 double f, double beta, CompositeSign sign) {
  LearnerOutput out;
  out.e_prior = prior_error(r, w_out, f);
  filter_update(bank, r, f);
  const Eigen::VectorXd e_gen = generalized_error(bank, w_out);
  out.e_norm = e_gen.norm();
  rls_update_p(rls, r);
  // the beta=0 branch repeats the rls_force_step expressions exactly, so
  // beta=0 is bit-identical to basic RLS
  const Eigen::VectorXd delta =
      beta == 0.0
          ? Eigen::VectorXd(rls.p * (out.e_prior * r))
          : Eigen::VectorXd(rls.p * (out.e_prior * r +
                                     signed_beta(beta, sign) * e_gen));
  out.w_out = w_out - delta;
  out.e_posterior = out.e_prior - r.dot(delta);
  return out;
}

LearnerOutput composite_lms_step(const Eigen::VectorXd& w_out,
                                 FilterBank& bank, const Eigen::VectorXd& r,
                                 double f, double beta, double eta,
                                 CompositeSign sign) {
  if (!(eta > 0.0)) throw std::invalid_argument("lms: eta must be > 0");
  LearnerOutput out;
  out.e_prior = prior_error(r, w_out, f);
  filter_update(bank, r, f);
  const Eigen::VectorXd e_gen = generalized_error(bank, w_out);
  out.e_norm = e_gen.norm();
  const Eigen::VectorXd delta =
      eta * (out.e_prior * r + signed_beta(beta, sign) * e_gen);
  out.w_out = w_out - delta;
  out.e_posterior = out.e_prior - r.dot(delta);
  return out;
}

}  // namespace esnforce
