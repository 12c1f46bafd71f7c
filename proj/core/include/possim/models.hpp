#pragma once

#include <cmath>
#include <memory>
#include <span>
#include <vector>

#include "possim/association.hpp"
#include "possim/distribution.hpp"
#include "possim/numerics.hpp"
#include "possim/random.hpp"

namespace possim {

// ---------------------------------------------------------------- Cauchy

/// Y = theta + U with U standard Cauchy.
Association cauchy_association();

/// pi_y(theta) = 2 (1 - F(|y - theta|)) with F the standard Cauchy CDF.
PosteriorContour cauchy_posterior_contour(double y);

/// Same value as the contour, usable without building a PosteriorContour.
double cauchy_contour_value(double y, double theta);

// ----------------------------------------------------------- curved normal

/// Form of the conditional density of V = U1/U2 given eta(U) = h.
enum class DensityForm {
  /// Jacobian factor |h - v|^-1 as commonly printed for this model.
  reference,
  /// Jacobian factor |h - v|^-3 from the change of variables (u1, u2) -> (v, h).
  exact_jacobian,
};

/// n draws from N(theta, theta^2) with the sign of theta known.
struct CurvedNormalModel {
  int n = 10;
  int sign = +1;
  DensityForm form = DensityForm::reference;

  void validate() const;
  /// Open half-line of parameter values with the assumed sign.
  Interval param_domain() const;
};

/// Sample mean, sample standard deviation (divisor n - 1) and h = y1 / y2.
struct CurvedNormalReduction {
  double y1 = 0.0;
  double y2 = 1.0;
  double h = 0.0;

  static CurvedNormalReduction from_statistics(double y1, double y2);
  DataRecord record() const { return {y1, y2}; }
};

CurvedNormalReduction curved_normal_reduce(std::span<const double> sample);

/// eta(u) = (sign + u1) / u2, the observed feature of U = (U1, U2).
double curved_normal_eta(int sign, std::span<const double> u);

/// Draws (Y1, Y2) = (theta + |theta| U1, |theta| U2) with U1 ~ N(0, 1/n) and
/// U2 ~ sqrt(chisq(n-1) / (n-1)), which is the law of the sample mean and
/// standard deviation.
CurvedNormalReduction simulate_curved_normal(const CurvedNormalModel& model, double theta, RandomStream& rng);

/// Conditional law of V = U1/U2 given eta(U) = h, normalized numerically.
///
/// Works in t = log(sign (h - v)), where the density has a single smooth
/// peak. A 4096-node tabulation of the cumulative mass backs the CDF,
/// quantiles and the contour pi_h(v) = P{f_h(V) < f_h(v)}.
class CurvedNormalConditional {
 public:
  CurvedNormalConditional(const CurvedNormalModel& model, double h,
                          numerics::LevelSetIntegrator::Options options = {});

  double h() const { return h_; }
  const CurvedNormalModel& model() const { return model_; }
  /// {v : sign (h - v) > 0}.
  Interval support() const;

  /// Unnormalized log density in v; -inf off the support.
  double log_kernel(double v) const;
  double density(double v) const;
  double cdf(double v) const;
  double quantile(double p) const;
  double sample(RandomStream& rng) const;
  /// pi_h(v).
  double contour(double v) const;

  double mode() const;
  bool unimodal() const { return table_->unimodal(); }
  /// Half the interquartile range of V.
  double spread() const;

  AuxiliaryDistribution as_distribution() const;

 private:
  double v_of_t(double t) const { return h_ - sign_ * std::exp(t); }
  double t_of_v(double v) const;

  CurvedNormalModel model_;
  double h_;
  double sign_;
  std::shared_ptr<const numerics::LevelSetIntegrator> table_;
};

/// Log of the unnormalized conditional density written in v.
double curved_normal_log_kernel(const CurvedNormalModel& model, double h, double v);

/// pi_{y|h}(theta) = pi_h((y1 - theta) / y2) on the half-line of the assumed sign.
PosteriorContour curved_normal_posterior_contour(const CurvedNormalModel& model, const CurvedNormalReduction& r);
PosteriorContour curved_normal_posterior_contour(std::shared_ptr<const CurvedNormalConditional> conditional,
                                                 const CurvedNormalReduction& r);

/// Association Y1 = theta + |theta| U1, Y2 = |theta| U2 on the sufficient statistics.
Association curved_normal_association(const CurvedNormalModel& model);

/// Reduced association Y1 = theta + Y2 V with V drawn from the conditional
/// law given h; data records are (y1, y2).
Association curved_normal_conditional_association(std::shared_ptr<const CurvedNormalConditional> conditional,
                                                  const CurvedNormalReduction& r);

// -------------------------------------------------- exponential errors-in-variables

/// Y1 = phi xi + U1, Y2 = xi + U2 with U_i ~ Exp(lambda_i) and observed (y1, y2).
struct EivModel {
  double lambda1 = 5.0;
  double lambda2 = 5.0;
  double y1 = 0.0;
  double y2 = 0.0;

  void validate() const;
  DataRecord record() const { return {y1, y2}; }
};

/// CDF of the asymmetric Laplace law with right-tail rate r1 and left-tail rate r2.
double asymmetric_laplace_cdf(double r1, double r2, double x);

/// Inverse of asymmetric_laplace_cdf.
double asymmetric_laplace_quantile(double r1, double r2, double p);

/// G_phi(x): CDF of U1 - phi U2, asymmetric Laplace with rates lambda1 and lambda2/phi.
double eiv_difference_cdf(double lambda1, double lambda2, double phi, double x);

/// pi_y(phi) = 1 - |2 G_phi(y1 - phi y2) - 1|.
double eiv_contour_value(const EivModel& model, double phi);

/// Marginal posterior contour for phi on (0, inf). Its shape is general:
/// it need not be unimodal and its supremum can fall short of 1.
PosteriorContour eiv_posterior_contour(const EivModel& model);

/// Limit of the contour as phi -> inf: 1 - |2 exp(-lambda2 y2) - 1| when y2 > 0, else 0.
double eiv_tail_limit(const EivModel& model);

/// Limit of the contour as phi -> 0+: 1 - |2 exp(-lambda1 y1) - 1| when y1 > 0, else 0.
double eiv_head_limit(const EivModel& model);

/// Draws (Y1, Y2) for true (phi, xi).
DataRecord simulate_eiv(double lambda1, double lambda2, double phi, double xi, RandomStream& rng);

/// Full association Y = theta + U on (theta1, theta2) with Exp auxiliaries.
Association eiv_association(double lambda1, double lambda2);

/// Marginal association for phi: V = G_phi(Y1 - phi Y2) with V ~ Unif(0, 1).
Association eiv_marginal_association(double lambda1, double lambda2);

}  // namespace possim
