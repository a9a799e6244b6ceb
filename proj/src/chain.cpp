#include "simplex_lab/chain.hpp"

#include <numeric>
#include <ostream>
#include <stdexcept>

#include "simplex_lab/io.hpp"

namespace simplex_lab {

void ChainConfig::validate() const {
  if (k < 1) throw std::invalid_argument("chain needs k >= 1");
  if (burn_in < 0) throw std::invalid_argument("burn-in must be >= 0");
  if (thin < 1) throw std::invalid_argument("thin must be >= 1");
  if (x0.dim() != params.size()) throw std::invalid_argument("x0 and parameters differ in dimension");
  if (!is_valid(x0)) throw std::invalid_argument("x0 is not a point of the simplex");
}

SimplexPoint affine_update(const SimplexPoint& x, double y, const SimplexPoint& b) {
  SimplexPoint out{std::vector<double>(x.dim())};
  double sum = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    out[i] = (1.0 - y) * x[i] + y * b[i];
    sum += out[i];
  }
  for (double& v : out.coords) v /= sum;
  return out;
}

SimplexPoint chain_step(const SimplexPoint& x, const ChainConfig& config, RngStream& rng) {
  const double y = sample_beta(config.k, config.params.total(), rng);
  const SimplexPoint b = sample_quasi_bernoulli({config.params, config.k, config.route}, rng);
  return affine_update(x, y, b);
}

void run_chain(const ChainConfig& config, std::size_t n, RngStream& rng,
               const std::function<void(const SimplexPoint&)>& emit) {
  config.validate();
  if (n < 1) throw std::invalid_argument("chain needs n >= 1");
  SimplexPoint x = config.x0;
  for (int s = 0; s < config.burn_in; ++s) x = chain_step(x, config, rng);
  for (std::size_t i = 0; i < n; ++i) {
    for (int s = 0; s < config.thin; ++s) x = chain_step(x, config, rng);
    emit(x);
  }
}

PointCloud run_chain(const ChainConfig& config, std::size_t n, RngStream& rng) {
  PointCloud cloud(config.params.size());
  cloud.reserve(n);
  run_chain(config, n, rng, [&](const SimplexPoint& x) { cloud.push_back(x); });
  return cloud;
}

void write_chain_csv(std::ostream& out, const ChainConfig& config, std::size_t n, RngStream& rng) {
  write_csv_header(out, config.params.size());
  run_chain(config, n, rng, [&](const SimplexPoint& x) { write_csv_row(out, x.coords); });
}

SeriesDraw backward_series_sample(const DirichletParams& params, int k, double epsilon,
                                  RngStream& rng, QbRoute route) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0,1)");
  if (k < 1) throw std::invalid_argument("backward series needs k >= 1");
  const QuasiBernoulliSpec spec{params, k, route};
  SeriesDraw draw{SimplexPoint{std::vector<double>(params.size(), 0.0)}, 0, 1.0};
  while (draw.residual >= epsilon) {
    const double y = sample_beta(k, params.total(), rng);
    const SimplexPoint b = sample_quasi_bernoulli(spec, rng);
    const double w = draw.residual * y;
    for (std::size_t i = 0; i < params.size(); ++i) draw.point[i] += w * b[i];
    draw.residual *= 1.0 - y;
    ++draw.terms_used;
  }
  const double sum = std::accumulate(draw.point.coords.begin(), draw.point.coords.end(), 0.0);
  for (double& v : draw.point.coords) v /= sum;
  return draw;
}

}  // namespace simplex_lab
