#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "simplex_lab/core.hpp"
#include "simplex_lab/rng.hpp"
#include "simplex_lab/stats.hpp"

namespace simplex_lab {

struct UniformBase {};

struct BetaBase {
  double p = 1.0;
  double q = 1.0;
};

/// CDF on [0,1] through knots (x, F): linear between knots, and a jump
/// (an atom) wherever two consecutive knots share x. Needs F = 0 at the
/// first knot and F = 1 at the last.
struct PiecewiseLinearCdf {
  std::vector<std::pair<double, double>> knots;
};

using BaseDistribution = std::variant<UniformBase, BetaBase, PiecewiseLinearCdf>;

/// Finite measure alpha = total_mass * base on [0,1].
class BaseMeasure {
 public:
  BaseMeasure(double total_mass, BaseDistribution base);

  /// "uniform", "beta:p,q" or "pl:x0:F0,x1:F1,..."
  static BaseMeasure parse(double total_mass, const std::string& spec);

  double total_mass() const { return total_mass_; }
  const BaseDistribution& base() const { return base_; }

  /// Base probability of [0, x).
  double cdf_left(double x) const;
  /// alpha([lo, hi)), or alpha([lo, 1]) when hi == 1.
  double mass(double lo, double hi) const;
  double sample_location(RngStream& rng) const;

 private:
  double total_mass_;
  BaseDistribution base_;
};

struct Atom {
  double location = 0.0;
  double weight = 0.0;
};

/// Purely atomic probability on [0,1], atoms sorted by location with
/// distinct locations.
struct AtomicProbability {
  std::vector<Atom> atoms;

  double total_weight() const;
};

/// Ewens portrait (concentration total_mass) -> one base draw per block ->
/// Dirichlet weights with the block sizes as parameters. Atoms sharing a
/// location are merged.
AtomicProbability sample_qb_process(int k, const BaseMeasure& measure, RngStream& rng);

/// (P(A_0), ..., P(A_d)) for the bins A_i = [e_i, e_{i+1}), last bin closed.
SimplexPoint bin_probability(const AtomicProbability& p, std::span<const double> edges);

/// alpha(A_i) for each bin; throws on a zero-mass bin.
DirichletParams bin_masses(const BaseMeasure& measure, std::span<const double> edges);

struct TransformCheck {
  std::vector<double> f;
  double closed_form = 0.0;
  McEstimate mc;
  TestReport test;
};

struct PberReport {
  DirichletParams target;
  TestReport face_test;
  std::vector<TransformCheck> transforms;
  bool pass = false;
};

/// Bins n processes and compares them with B_k(alpha(A_0), ..., alpha(A_d)):
/// chi-square on face membership (p > 0.001) and T_k Monte Carlo against
/// the closed form at every f in fs (within 4 standard errors).
PberReport verify_pber(int k, const BaseMeasure& measure, std::span<const double> edges,
                       std::size_t n, const RngStream& rng,
                       const std::vector<std::vector<double>>& fs);

struct PiecewiseConstant {
  std::vector<double> edges;   // 0 = e_0 < ... < e_m = 1
  std::vector<double> values;  // value on [e_i, e_{i+1})
};

/// T_k(P)(f) for P ~ B_k(alpha) through sigma_j(f) = integral alpha(dw) / f(w)^j.
double tc_process(const PiecewiseConstant& f, int k, const BaseMeasure& measure);

}  // namespace simplex_lab
