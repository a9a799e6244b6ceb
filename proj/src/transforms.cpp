#include "simplex_lab/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "simplex_lab/samplers.hpp"

namespace simplex_lab {

void TransformQuery::validate() const {
  if (f.empty()) throw std::invalid_argument("transform query needs a nonempty f");
  for (double v : f)
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("transform query needs strictly positive finite f");
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("transform exponent must be > 0");
}

namespace {

void check_dims(std::span<const double> f, const DirichletParams& params) {
  if (f.size() != params.size()) throw std::invalid_argument("f and parameters differ in length");
}

double inner(std::span<const double> f, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * x[i];
  return s;
}

// prod f_i^{-a_i}
double dirichlet_closed_form(std::span<const double> f, const DirichletParams& params) {
  double log_v = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (params[i] > 0.0) log_v -= params[i] * std::log(f[i]);
  return std::exp(log_v);
}

}  // namespace

double tc_dirichlet(const TransformQuery& query, const DirichletParams& params) {
  query.validate();
  check_dims(query.f, params);
  if (std::abs(query.c - params.total()) > 1e-12 * std::max(1.0, params.total()))
    throw std::invalid_argument("Dirichlet closed form holds only at c = sum(a)");
  return dirichlet_closed_form(query.f, params);
}

std::vector<double> power_sums(const DirichletParams& params, std::span<const double> f, int k) {
  check_dims(f, params);
  std::vector<double> sigma(static_cast<std::size_t>(std::max(k, 0)), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double inv = 1.0 / f[i];
    double p = 1.0;
    for (int j = 0; j < k; ++j) {
      p *= inv;
      sigma[static_cast<std::size_t>(j)] += params[i] * p;
    }
  }
  return sigma;
}

std::string_view to_string(QbMethod method) {
  return method == QbMethod::compositions ? "compositions" : "partitions";
}

QbMethod parse_method(std::string_view name) {
  if (name == "compositions") return QbMethod::compositions;
  if (name == "partitions") return QbMethod::partitions;
  throw std::invalid_argument("unknown transform method: " + std::string(name));
}

double qb_transform_from_power_sums(std::span<const double> sigma, double a, int k) {
  if (k < 1) throw std::invalid_argument("quasi-Bernoulli transform needs k >= 1");
  if (sigma.size() < static_cast<std::size_t>(k))
    throw std::invalid_argument("need power sums sigma_1..sigma_k");
  double total = 0.0;
  for_each_portrait(k, [&](const std::vector<int>& m) {
    double term = 1.0;
    for (int j = 1; j <= k; ++j) {
      const double ratio = sigma[static_cast<std::size_t>(j - 1)] / j;
      for (int r = 1; r <= m[static_cast<std::size_t>(j - 1)]; ++r) term *= ratio / r;
    }
    total += term;
  });
  for (int t = 0; t < k; ++t) total *= (t + 1.0) / (a + t);
  return total;
}

double tc_quasi_bernoulli(const DirichletParams& params, std::span<const double> f, int k,
                          QbMethod method) {
  TransformQuery{std::vector<double>(f.begin(), f.end()), static_cast<double>(k)}.validate();
  check_dims(f, params);
  if (k < 1) throw std::invalid_argument("quasi-Bernoulli transform needs k >= 1");
  if (method == QbMethod::partitions)
    return qb_transform_from_power_sums(power_sums(params, f, k), params.total(), k);

  std::vector<double> inv(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) inv[i] = 1.0 / f[i];
  double total = 0.0;
  for_each_composition(static_cast<int>(f.size()), k, [&](const std::vector<int>& b) {
    double term = 1.0;
    for (std::size_t i = 0; i < b.size(); ++i)
      for (int t = 0; t < b[i]; ++t) term *= (params[i] + t) / (t + 1.0) * inv[i];
    total += term;
  });
  for (int t = 0; t < k; ++t) total *= (t + 1.0) / (params.total() + t);
  return total;
}

McEstimate tc_monte_carlo(const PointCloud& samples, const TransformQuery& query) {
  query.validate();
  if (samples.empty()) throw std::invalid_argument("transform estimate of an empty sample");
  if (samples.dim() != query.f.size()) throw std::invalid_argument("f and samples differ in dimension");
  RunningMoments acc;
  for (std::size_t s = 0; s < samples.size(); ++s)
    acc.add(std::pow(inner(query.f, samples[s]), -query.c));
  return {acc.mean(), acc.std_error(), acc.count()};
}

RatioReport verify_ratio_identity(const DirichletParams& params, int k, std::span<const double> f,
                                  std::size_t n, const RngStream& rng, double band) {
  if (k < 1) throw std::invalid_argument("ratio identity needs k >= 1");
  RatioReport r;
  const std::vector<double> fv(f.begin(), f.end());
  r.ta_dirichlet = tc_dirichlet({fv, params.total()}, params);
  r.tk_bernoulli = tc_quasi_bernoulli(params, f, k, QbMethod::partitions);
  r.product = r.ta_dirichlet * r.tk_bernoulli;
  const double exponent = params.total() + k;
  r.mc = monte_carlo_mean(n, rng, [&](RngStream& g) {
    const SimplexPoint x = sample_dirichlet(params, g);
    return std::pow(inner(fv, x.coords), -exponent);
  });
  r.test = se_band_test(r.mc.estimate, r.mc.std_error, r.product, band, n);
  return r;
}

DiffReport verify_diff_relation(const DirichletParams& params, int k, std::span<const double> f,
                                double h) {
  if (k != 1 && k != 2) throw std::invalid_argument("difference check supports k = 1 or 2");
  if (!(h > 0.0)) throw std::invalid_argument("difference step must be positive");
  check_dims(f, params);
  const double f_min = *std::min_element(f.begin(), f.end());
  if (!(f_min - h > 0.0)) throw std::invalid_argument("difference step leaves the positive orthant");

  // sum_i d/df_i is the derivative along (1,...,1), so H^k only needs
  // shifts of every coordinate by the same step.
  auto shifted = [&](double t) {
    std::vector<double> g(f.begin(), f.end());
    for (double& v : g) v += t;
    return dirichlet_closed_form(g, params);
  };
  DiffReport r;
  if (k == 1) {
    r.finite_difference = -(shifted(h) - shifted(-h)) / (2.0 * h);
  } else {
    r.finite_difference = (shifted(h) - 2.0 * shifted(0.0) + shifted(-h)) / (h * h);
  }
  r.closed_form = pochhammer(params.total(), k) * dirichlet_closed_form(f, params) *
                  tc_quasi_bernoulli(params, f, k, QbMethod::partitions);
  r.relative_error = std::abs(r.finite_difference - r.closed_form) / std::abs(r.closed_form);
  return r;
}

double face_mass(const DirichletParams& params, double c, std::span<const int> zero_set) {
  if (!(c > 0.0)) throw std::invalid_argument("face mass needs c > 0");
  std::vector<char> zeroed(params.size(), 0);
  for (int i : zero_set) {
    if (i < 0 || static_cast<std::size_t>(i) >= params.size())
      throw std::invalid_argument("zero-set index out of range");
    zeroed[static_cast<std::size_t>(i)] = 1;
  }
  double rest = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i)
    if (!zeroed[i]) rest += params[i];
  if (!(rest > 0.0)) throw std::invalid_argument("face mass needs positive parameter mass off the zero set");
  if (zero_set.empty()) return 1.0;
  return gamma_ratio(rest, c) / gamma_ratio(params.total(), c);
}

double vertex_mass(const DirichletParams& params, double c, int i) {
  std::vector<int> zero_set;
  for (int j = 0; j < static_cast<int>(params.size()); ++j)
    if (j != i) zero_set.push_back(j);
  return face_mass(params, c, zero_set);
}

FcResult fc_uniform(std::span<const double> f, double c, RngStream& rng, std::size_t mc_n) {
  // c = 0 is allowed here: the integrand exponent is c + d + 1.
  TransformQuery{std::vector<double>(f.begin(), f.end()), 1.0}.validate();
  if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("F_c needs c >= 0");
  const std::size_t n = f.size();
  const int d = static_cast<int>(n) - 1;

  std::vector<double> sorted(f.begin(), f.end());
  std::sort(sorted.begin(), sorted.end());
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < n; ++i) min_gap = std::min(min_gap, sorted[i] - sorted[i - 1]);

  if (d == 0) return {std::pow(f[0], -(c + 1.0)), 0.0, false};
  if (min_gap / sorted.back() > kGapThreshold) {
    // Newton divided differences of g(x) = x^{-(c+1)}; F_c = d!/((c+1)..(c+d)) (-1)^d g[f_0..f_d].
    std::vector<double> dd(n);
    for (std::size_t i = 0; i < n; ++i) dd[i] = std::pow(sorted[i], -(c + 1.0));
    for (std::size_t level = 1; level < n; ++level)
      for (std::size_t i = 0; i + level < n; ++i)
        dd[i] = (dd[i + 1] - dd[i]) / (sorted[i + level] - sorted[i]);
    double scale = 1.0;
    for (int j = 1; j <= d; ++j) scale *= j / (c + j);
    return {(d % 2 == 0 ? 1.0 : -1.0) * scale * dd[0], 0.0, false};
  }

  const double exponent = c + d + 1.0;
  const std::vector<double> fv(f.begin(), f.end());
  const McEstimate mc = monte_carlo_mean(mc_n, rng.substream(rng.next_u64()), [&](RngStream& g) {
    const SimplexPoint x = sample_face_uniform(d, d, g);
    return std::pow(inner(fv, x.coords), -exponent);
  });
  return {mc.estimate, mc.std_error, true};
}

}  // namespace simplex_lab
