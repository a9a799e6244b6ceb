#include "simplex_lab/samplers.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>

#include "simplex_lab/continuous_c.hpp"
#include "simplex_lab/parallel.hpp"

namespace simplex_lab {

namespace {

// Marsaglia & Tsang (2000), valid for shape >= 1.
double gamma_marsaglia_tsang(double shape, RngStream& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

void check_shape(double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape))
    throw std::invalid_argument("gamma shape must be positive and finite");
}

void renormalize(std::span<double> x) {
  const double sum = std::accumulate(x.begin(), x.end(), 0.0);
  for (double& v : x) v /= sum;
}

}  // namespace

double sample_gamma(double shape, RngStream& rng) {
  check_shape(shape);
  if (shape >= 1.0) return gamma_marsaglia_tsang(shape, rng);
  const double g = gamma_marsaglia_tsang(shape + 1.0, rng);
  return g * std::pow(rng.uniform(), 1.0 / shape);
}

double sample_log_gamma(double shape, RngStream& rng) {
  check_shape(shape);
  if (shape >= 1.0) return std::log(gamma_marsaglia_tsang(shape, rng));
  const double g = gamma_marsaglia_tsang(shape + 1.0, rng);
  return std::log(g) + std::log(rng.uniform()) / shape;
}

double sample_beta(double p, double q, RngStream& rng) {
  const double shapes[2] = {p, q};
  double out[2];
  sample_dirichlet_into(shapes, out, rng);
  return out[0];
}

std::size_t sample_categorical(std::span<const double> weights, RngStream& rng) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("categorical weights must have positive total");
  const double u = rng.uniform() * total;
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    cum += weights[i];
    last_positive = i;
    if (u < cum) return i;
  }
  return last_positive;
}

void sample_dirichlet_into(std::span<const double> shapes, std::span<double> out, RngStream& rng) {
  if (shapes.size() != out.size()) throw std::invalid_argument("Dirichlet output size mismatch");
  bool any_positive = false;
  bool any_small = false;
  for (double a : shapes) {
    if (!(a >= 0.0) || !std::isfinite(a))
      throw std::invalid_argument("Dirichlet shapes must be finite and nonnegative");
    any_positive = any_positive || a > 0.0;
    any_small = any_small || (a > 0.0 && a < 1.0);
  }
  if (!any_positive) throw std::invalid_argument("Dirichlet shapes are all zero");

  if (!any_small) {
    for (std::size_t i = 0; i < shapes.size(); ++i)
      out[i] = shapes[i] > 0.0 ? gamma_marsaglia_tsang(shapes[i], rng) : 0.0;
  } else {
    // Shapes below one can underflow a plain gamma draw; work in logs.
    double max_log = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < shapes.size(); ++i) {
      out[i] = shapes[i] > 0.0 ? sample_log_gamma(shapes[i], rng)
                               : -std::numeric_limits<double>::infinity();
      max_log = std::max(max_log, out[i]);
    }
    for (double& v : out) v = std::exp(v - max_log);
  }
  renormalize(out);
}

SimplexPoint sample_dirichlet(const DirichletParams& params, RngStream& rng) {
  SimplexPoint x{std::vector<double>(params.size())};
  sample_dirichlet_into(params.a(), x.coords, rng);
  assert(is_valid(x));
  return x;
}

SimplexPoint sample_bernoulli_vertex(const DirichletParams& params, RngStream& rng) {
  return vertex(params.size(), sample_categorical(params.a(), rng));
}

std::string_view to_string(QbRoute route) {
  return route == QbRoute::mixture ? "mixture" : "ewens";
}

QbRoute parse_route(std::string_view name) {
  if (name == "mixture") return QbRoute::mixture;
  if (name == "ewens") return QbRoute::ewens;
  throw std::invalid_argument("unknown quasi-Bernoulli route: " + std::string(name));
}

SimplexPoint sample_quasi_bernoulli_mixture(const QuasiBernoulliSpec& spec, RngStream& rng) {
  if (spec.k < 1) throw std::invalid_argument("quasi-Bernoulli order k must be >= 1");
  const std::size_t n = spec.params.size();
  std::vector<double> p(n);
  sample_dirichlet_into(spec.params.a(), p, rng);

  // Multinomial(k, p) by k categorical draws against the cumulative table.
  std::vector<double> cum(n);
  std::partial_sum(p.begin(), p.end(), cum.begin());
  std::vector<double> counts(n, 0.0);
  for (int t = 0; t < spec.k; ++t) {
    const double u = rng.uniform() * cum.back();
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    std::size_t i = it == cum.end() ? n - 1 : static_cast<std::size_t>(it - cum.begin());
    while (p[i] == 0.0 && i > 0) --i;  // never land on a zero-probability coordinate
    counts[i] += 1.0;
  }

  SimplexPoint x{std::vector<double>(n)};
  sample_dirichlet_into(counts, x.coords, rng);
  assert(is_valid(x));
  return x;
}

PartitionPortrait sample_crp_portrait(int k, double a, RngStream& rng) {
  if (k < 1) throw std::invalid_argument("CRP needs k >= 1");
  if (!(a > 0.0)) throw std::invalid_argument("CRP concentration must be positive");
  std::vector<int> tables;
  for (int t = 0; t < k; ++t) {
    // t customers already seated.
    const double u = rng.uniform() * (a + t);
    if (u < a || tables.empty()) {
      tables.push_back(1);
      continue;
    }
    double cum = a;
    std::size_t j = 0;
    for (; j + 1 < tables.size(); ++j) {
      cum += tables[j];
      if (u < cum) break;
    }
    ++tables[j];
  }
  PartitionPortrait portrait{std::vector<int>(static_cast<std::size_t>(k), 0)};
  for (int size : tables) ++portrait.m[static_cast<std::size_t>(size - 1)];
  return portrait;
}

SimplexPoint sample_quasi_bernoulli_ewens(const QuasiBernoulliSpec& spec, RngStream& rng) {
  if (spec.k < 1) throw std::invalid_argument("quasi-Bernoulli order k must be >= 1");
  const PartitionPortrait portrait = sample_crp_portrait(spec.k, spec.params.total(), rng);
  const std::vector<int> blocks = block_sizes(portrait);

  std::vector<std::size_t> labels(blocks.size());
  for (auto& label : labels) label = sample_categorical(spec.params.a(), rng);

  std::vector<double> shapes(blocks.begin(), blocks.end());
  std::vector<double> weights(blocks.size());
  sample_dirichlet_into(shapes, weights, rng);

  SimplexPoint x{std::vector<double>(spec.params.size(), 0.0)};
  for (std::size_t t = 0; t < blocks.size(); ++t) x[labels[t]] += weights[t];
  renormalize(x.coords);
  assert(is_valid(x));
  return x;
}

SimplexPoint sample_quasi_bernoulli(const QuasiBernoulliSpec& spec, RngStream& rng) {
  return spec.route == QbRoute::mixture ? sample_quasi_bernoulli_mixture(spec, rng)
                                        : sample_quasi_bernoulli_ewens(spec, rng);
}

SimplexPoint sample_face_uniform(int d, int k, RngStream& rng) {
  if (d < 0 || k < 0 || k > d) throw std::invalid_argument("face dimension must satisfy 0 <= k <= d");
  const std::size_t n = static_cast<std::size_t>(d) + 1;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const std::size_t chosen = static_cast<std::size_t>(k) + 1;
  for (std::size_t i = 0; i < chosen; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);

  SimplexPoint x{std::vector<double>(n, 0.0)};
  if (chosen == 1) {
    x[idx[0]] = 1.0;
    return x;
  }
  for (std::size_t i = 0; i < chosen; ++i) x[idx[i]] = -std::log(rng.uniform());
  renormalize(x.coords);
  return x;
}

SimplexPoint sample_nu(double c, int d, RngStream& rng) {
  if (d < 1) throw std::invalid_argument("nu_{c,d} needs d >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("nu_{c,d} needs c > 0");
  if (!exists_probability(c, d)) throw NonexistentMeasure("nu_{c,d} is not a probability");
  const NuSpec spec = nu_weights(c, d);
  std::vector<double> w(spec.dim_weights);
  for (double& v : w) v = std::max(v, 0.0);
  const int k = static_cast<int>(sample_categorical(w, rng));
  return sample_face_uniform(d, k, rng);
}

void stream_points(std::size_t n, std::size_t dim, const RngStream& base,
                   const PointSampler& sampler, const std::function<void(const PointCloud&)>& sink) {
  const std::size_t chunks = (n + kBatchChunk - 1) / kBatchChunk;
  const std::size_t group = 4 * worker_count();
  for (std::size_t first = 0; first < chunks; first += group) {
    const std::size_t count_in_group = std::min(group, chunks - first);
    std::vector<PointCloud> parts(count_in_group, PointCloud(dim));
    parallel_for(count_in_group, [&](std::size_t t) {
      const std::size_t j = first + t;
      RngStream rng = base.substream(j);
      const std::size_t count = std::min(kBatchChunk, n - j * kBatchChunk);
      parts[t].reserve(count);
      for (std::size_t i = 0; i < count; ++i) parts[t].push_back(sampler(rng));
    });
    for (const auto& part : parts) sink(part);
  }
}

PointCloud draw_points(std::size_t n, std::size_t dim, const RngStream& base,
                       const PointSampler& sampler) {
  PointCloud out(dim);
  out.reserve(n);
  stream_points(n, dim, base, sampler, [&](const PointCloud& part) { out.append(part); });
  return out;
}

}  // namespace simplex_lab
