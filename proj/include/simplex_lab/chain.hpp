#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>

#include "simplex_lab/core.hpp"
#include "simplex_lab/rng.hpp"
#include "simplex_lab/samplers.hpp"

namespace simplex_lab {

struct ChainConfig {
  DirichletParams params;
  int k = 1;
  int burn_in = 200;
  int thin = 1;
  SimplexPoint x0;
  QbRoute route = QbRoute::mixture;

  void validate() const;
};

/// (1 - y) x + y b, renormalized.
SimplexPoint affine_update(const SimplexPoint& x, double y, const SimplexPoint& b);

/// Draws Y ~ beta(k, a) and then a fresh B ~ B_k(a).
SimplexPoint chain_step(const SimplexPoint& x, const ChainConfig& config, RngStream& rng);

/// Emits n states after burn_in steps, keeping every thin-th state.
void run_chain(const ChainConfig& config, std::size_t n, RngStream& rng,
               const std::function<void(const SimplexPoint&)>& emit);
PointCloud run_chain(const ChainConfig& config, std::size_t n, RngStream& rng);

/// Streams a trajectory as CSV with header x0,...,xd.
void write_chain_csv(std::ostream& out, const ChainConfig& config, std::size_t n, RngStream& rng);

struct SeriesDraw {
  SimplexPoint point;
  int terms_used = 0;
  double residual = 1.0;  // prod (1 - Y_j) over the terms used
};

/// sum_n (prod_{j<n} (1 - Y_j)) Y_n B(n), stopped once the residual falls
/// below epsilon and divided by (1 - residual).
SeriesDraw backward_series_sample(const DirichletParams& params, int k, double epsilon,
                                  RngStream& rng, QbRoute route = QbRoute::mixture);

}  // namespace simplex_lab
