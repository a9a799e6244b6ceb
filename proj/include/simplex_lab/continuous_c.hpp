#pragma once

#include <span>
#include <vector>

#include "simplex_lab/rng.hpp"
#include "simplex_lab/transforms.hpp"

namespace simplex_lab {

/// nu_{c,d} as a mixture of the uniform face laws Lambda_0..Lambda_d.
struct NuSpec {
  double c = 1.0;
  int d = 1;
  /// dim_weights[k] is the mass carried by the k-dimensional faces; the
  /// entries can be negative when nu_{c,d} is a signed measure.
  std::vector<double> dim_weights;

  /// Mass of a single face of dimension k.
  double per_face(int k) const;
};

inline constexpr double kIntegerTolerance = 1e-12;

/// True iff c is a positive integer (within 1e-12) or c > d.
bool exists_probability(double c, int d);

NuSpec nu_weights(double c, int d);

/// Integral of x -> <f,x>^{-c} against the uniform law on the face spanned
/// by the indices in `face`. Uses the divided-difference closed form; falls
/// back to Monte Carlo (n draws) when the closed form is singular or the
/// face coordinates of f are too close together.
struct FaceIntegral {
  double value = 0.0;
  double std_error = 0.0;
  bool monte_carlo = false;
};

FaceIntegral face_transform(std::span<const double> f, std::span<const int> face, double c,
                            std::size_t mc_n, RngStream& rng);

struct CpReport {
  double lhs = 0.0;
  double lhs_std_error = 0.0;
  double rhs = 0.0;
  double rhs_std_error = 0.0;
  double relative_error = 0.0;
  bool monte_carlo = false;
  bool pass = false;
};

/// Checks  int nu_{c,d}(dx) <f,x>^{-c} == f_0...f_d int Lambda_d(dx) <f,x>^{-(c+d+1)}.
/// Closed-form comparisons pass below 1e-8 relative error; Monte Carlo
/// comparisons pass within 4 combined standard errors.
CpReport verify_cp(double c, int d, std::span<const double> f, std::size_t mc_n, RngStream& rng);

}  // namespace simplex_lab
