#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "simplex_lab/core.hpp"
#include "simplex_lab/rng.hpp"

namespace simplex_lab {

/// Streaming mean and variance (Welford), mergeable in a fixed order.
class RunningMoments {
 public:
  void add(double x);
  void merge(const RunningMoments& other);

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance; zero below two observations.
  double variance() const;
  double std_error() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

/// Mean of n draws of `draw`, chunked like draw_points so the result is
/// independent of the worker count.
McEstimate monte_carlo_mean(std::size_t n, const RngStream& base,
                            const std::function<double(RngStream&)>& draw);

struct MomentIndex {
  std::vector<int> n;
  int order = 0;

  static MomentIndex of(std::vector<int> n);
  std::string to_string() const;
};

/// Every index over `dim` coordinates with 1 <= order <= max_order.
std::vector<MomentIndex> moment_indices(std::size_t dim, int max_order);

/// E prod X_i^{n_i} for X ~ D(a): prod (a_i)_{n_i} / (a)_{order}.
double dirichlet_moment_oracle(const DirichletParams& params, const MomentIndex& idx);

McEstimate empirical_moment(const PointCloud& samples, const MomentIndex& idx);

/// Outcome of one statistical check. For standard-error band checks
/// `statistic` is the distance in standard errors and `p_value` the
/// matching two-sided normal tail.
struct TestReport {
  double statistic = 0.0;
  double p_value = 1.0;
  bool pass = false;
  std::size_t n_used = 0;
};

/// {"statistic":..,"p_value":..,"pass":..,"n_used":..}
std::string to_json(const TestReport& report);

/// Passes when |estimate - target| <= band * std_error, or when the two
/// agree to 1e-12 relative.
TestReport se_band_test(double estimate, double std_error, double target, double band,
                        std::size_t n);

/// V-statistic energy distance between two point sets, scaled by nm/(n+m).
double energy_statistic(const PointCloud& xs, const PointCloud& ys);

inline constexpr std::size_t kEnergyMaxPoints = 2000;

/// Permutation energy test. Only the first max_points of each sample are
/// used; passes when p > alpha.
TestReport energy_two_sample_test(const PointCloud& xs, const PointCloud& ys,
                                  std::size_t permutations, RngStream& rng, double alpha = 0.01,
                                  std::size_t max_points = kEnergyMaxPoints);

/// Chi-square goodness of fit of face membership against expected masses.
/// Faces with expected count below 5 are pooled. A sample on a face of zero
/// expected mass fails the test outright. Throws std::logic_error on a point
/// with no nonzero coordinate.
TestReport chi_square_face_test(const PointCloud& samples, const FaceMasses& expected,
                                double alpha = 0.001);

/// Homogeneity of face membership between two samples (2 x faces table).
TestReport chi_square_two_sample_face_test(const PointCloud& xs, const PointCloud& ys,
                                           double alpha = 0.001);

double chi_square_survival(double statistic, double dof);

}  // namespace simplex_lab
