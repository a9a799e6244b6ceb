#include "simplex_lab/continuous_c.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "simplex_lab/core.hpp"
#include "simplex_lab/samplers.hpp"
#include "simplex_lab/stats.hpp"

namespace simplex_lab {

double NuSpec::per_face(int k) const {
  return dim_weights.at(static_cast<std::size_t>(k)) / binomial(d + 1, k + 1);
}

bool exists_probability(double c, int d) {
  if (!(c > 0.0)) throw std::invalid_argument("nu_{c,d} needs c > 0");
  if (d < 1) throw std::invalid_argument("nu_{c,d} needs d >= 1");
  const double nearest = std::round(c);
  if (nearest >= 1.0 && std::abs(c - nearest) <= kIntegerTolerance) return true;
  return c > d;
}

NuSpec nu_weights(double c, int d) {
  if (!(c > 0.0)) throw std::invalid_argument("nu_{c,d} needs c > 0");
  if (d < 1) throw std::invalid_argument("nu_{c,d} needs d >= 1");
  // d!(d+1)!/((c+1)...(c+d)) as a running product of ratios.
  double normalizer = 1.0;
  for (int j = 1; j <= d; ++j) normalizer *= j * (j + 1.0) / (c + j);

  NuSpec spec{c, d, std::vector<double>(static_cast<std::size_t>(d) + 1)};
  double falling = 1.0;  // (c-1)(c-2)...(c-k)
  for (int k = 0; k <= d; ++k) {
    if (k > 0) falling *= c - k;
    const double denom = std::exp(log_factorial(k) + log_factorial(k + 1) + log_factorial(d - k));
    spec.dim_weights[static_cast<std::size_t>(k)] = normalizer * falling / denom + 0.0;
  }
  return spec;
}

FaceIntegral face_transform(std::span<const double> f, std::span<const int> face, double c,
                            std::size_t mc_n, RngStream& rng) {
  if (face.empty()) throw std::invalid_argument("face must be nonempty");
  if (!(c > 0.0)) throw std::invalid_argument("face transform needs c > 0");
  const int k = static_cast<int>(face.size()) - 1;
  std::vector<double> g;
  g.reserve(face.size());
  for (int i : face) {
    if (i < 0 || static_cast<std::size_t>(i) >= f.size()) throw std::invalid_argument("face index out of range");
    if (!(f[static_cast<std::size_t>(i)] > 0.0)) throw std::invalid_argument("f must be strictly positive");
    g.push_back(f[static_cast<std::size_t>(i)]);
  }
  if (k == 0) return {std::pow(g[0], -c), 0.0, false};

  bool singular = false;
  double denom = 1.0;
  for (int j = 1; j <= k; ++j) {
    if (std::abs(c - j) <= 1e-9 * c) singular = true;
    denom *= c - j;
  }
  std::vector<double> sorted(g);
  std::sort(sorted.begin(), sorted.end());
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < sorted.size(); ++i) min_gap = std::min(min_gap, sorted[i] - sorted[i - 1]);

  if (!singular && min_gap / sorted.back() > kGapThreshold) {
    // Lagrange form: k!/((c-k)...(c-1)) sum_i f_i^{-(c-k)} / prod_{j != i} (f_j - f_i).
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      double prod = 1.0;
      for (std::size_t j = 0; j < g.size(); ++j)
        if (j != i) prod *= g[j] - g[i];
      sum += std::pow(g[i], -(c - k)) / prod;
    }
    return {std::exp(log_factorial(k)) / denom * sum, 0.0, false};
  }

  const McEstimate mc = monte_carlo_mean(mc_n, rng.substream(rng.next_u64()), [&](RngStream& r) {
    const SimplexPoint x = sample_face_uniform(k, k, r);
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g[i] * x[i];
    return std::pow(s, -c);
  });
  return {mc.estimate, mc.std_error, true};
}

CpReport verify_cp(double c, int d, std::span<const double> f, std::size_t mc_n, RngStream& rng) {
  if (f.size() != static_cast<std::size_t>(d) + 1) throw std::invalid_argument("f must have d+1 entries");
  if (d + 1 > kMaxSubsetDim) throw std::invalid_argument("verify_cp supports at most 21 coordinates");
  const NuSpec spec = nu_weights(c, d);

  CpReport r;
  double lhs_var = 0.0;
  const std::uint32_t count = 1U << (d + 1);
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    const int k = std::popcount(mask) - 1;
    const double w = spec.per_face(k);
    if (w == 0.0) continue;
    const std::vector<int> face = FaceSubset{mask}.indices();
    const FaceIntegral fi = face_transform(f, face, c, mc_n, rng);
    r.lhs += w * fi.value;
    lhs_var += (w * fi.std_error) * (w * fi.std_error);
    r.monte_carlo = r.monte_carlo || fi.monte_carlo;
  }
  r.lhs_std_error = std::sqrt(lhs_var);

  double prod_f = 1.0;
  for (double v : f) prod_f *= v;
  const FcResult fc = fc_uniform(f, c, rng, mc_n);
  r.rhs = prod_f * fc.value;
  r.rhs_std_error = prod_f * fc.std_error;
  r.monte_carlo = r.monte_carlo || fc.monte_carlo;

  r.relative_error = std::abs(r.lhs - r.rhs) / std::abs(r.rhs);
  if (!r.monte_carlo) {
    r.pass = r.relative_error < 1e-8;
  } else {
    const double se = std::hypot(r.lhs_std_error, r.rhs_std_error);
    r.pass = std::abs(r.lhs - r.rhs) <= std::max(4.0 * se, 1e-12 * std::abs(r.rhs));
  }
  return r;
}

}  // namespace simplex_lab
