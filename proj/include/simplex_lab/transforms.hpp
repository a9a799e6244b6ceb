#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "simplex_lab/core.hpp"
#include "simplex_lab/rng.hpp"
#include "simplex_lab/stats.hpp"

namespace simplex_lab {

/// Evaluation point f (strictly positive) and exponent c > 0 of
/// T_c(X)(f) = E <f,X>^{-c}.
struct TransformQuery {
  std::vector<double> f;
  double c = 1.0;

  /// Throws std::invalid_argument unless min(f) > 0 and c > 0.
  void validate() const;
};

/// Closed form at c = a: prod f_i^{-a_i}. Rejects any other c.
double tc_dirichlet(const TransformQuery& query, const DirichletParams& params);

/// sigma_j = sum_i a_i / f_i^j for j = 1..k (entry j-1).
std::vector<double> power_sums(const DirichletParams& params, std::span<const double> f, int k);

enum class QbMethod { compositions, partitions };

std::string_view to_string(QbMethod method);
QbMethod parse_method(std::string_view name);

/// T_k(B)(f) for B ~ B_k(a), summed over compositions of k or over
/// partitions of k through the power sums.
double tc_quasi_bernoulli(const DirichletParams& params, std::span<const double> f, int k,
                          QbMethod method);

/// (k!/(a)_k) sum over portraits m of prod_j sigma_j^{m_j} / (j^{m_j} m_j!).
double qb_transform_from_power_sums(std::span<const double> sigma, double a, int k);

/// Sample mean and standard error of <f,x>^{-c}.
McEstimate tc_monte_carlo(const PointCloud& samples, const TransformQuery& query);

struct RatioReport {
  double ta_dirichlet = 0.0;   // T_a(X)(f), closed form
  double tk_bernoulli = 0.0;   // T_k(B)(f), closed form
  double product = 0.0;        // their product, the closed form of T_{a+k}(X)(f)
  McEstimate mc;               // T_{a+k}(X)(f) over Dirichlet draws
  TestReport test;
};

/// Compares T_a(X) T_k(B) against a Monte Carlo estimate of T_{a+k}(X)
/// from n Dirichlet draws; passes within `band` standard errors.
RatioReport verify_ratio_identity(const DirichletParams& params, int k, std::span<const double> f,
                                  std::size_t n, const RngStream& rng, double band = 3.0);

struct DiffReport {
  double finite_difference = 0.0;
  double closed_form = 0.0;
  double relative_error = 0.0;
};

/// Central-difference H^k T_a(X)(f), with H = -sum_i d/df_i, against
/// (a)_k T_a(X)(f) T_k(B)(f). k must be 1 or 2.
DiffReport verify_diff_relation(const DirichletParams& params, int k, std::span<const double> f,
                                double h);

/// Pr(B_i = 0 for all i in zero_set) = Gamma(a) Gamma(a'+c) / (Gamma(a+c) Gamma(a')),
/// a' the parameter mass outside zero_set.
double face_mass(const DirichletParams& params, double c, std::span<const int> zero_set);
/// Pr(B = e_i).
double vertex_mass(const DirichletParams& params, double c, int i);

inline constexpr double kGapThreshold = 1e-3;

struct FcResult {
  double value = 0.0;
  double std_error = 0.0;
  bool monte_carlo = false;
};

/// F_c(f) = integral of <f,x>^{-(c+d+1)} against the uniform law on the
/// d-simplex, d = f.size() - 1. Closed divided differences when the
/// smallest pairwise gap of f exceeds kGapThreshold * max(f); Monte Carlo
/// with mc_n draws otherwise.
FcResult fc_uniform(std::span<const double> f, double c, RngStream& rng,
                    std::size_t mc_n = 200000);

}  // namespace simplex_lab
