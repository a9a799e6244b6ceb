#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>

#include "simplex_lab/core.hpp"
#include "simplex_lab/rng.hpp"

namespace simplex_lab {

/// Thrown when a requested measure is signed, so no sampler exists.
class NonexistentMeasure : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Scalar variates.

/// Gamma(shape, 1). Shapes below one use the boost x = G(shape+1) U^{1/shape}.
double sample_gamma(double shape, RngStream& rng);
/// log of a Gamma(shape, 1) draw, computed without underflow for tiny shapes.
double sample_log_gamma(double shape, RngStream& rng);
/// Beta(p, q) with density proportional to y^{p-1} (1-y)^{q-1}.
double sample_beta(double p, double q, RngStream& rng);
/// Index i with probability weights[i] / sum(weights); zero weights are never chosen.
std::size_t sample_categorical(std::span<const double> weights, RngStream& rng);

// Simplex samplers.

/// Normalized independent gammas. Zero shapes give exact zero coordinates.
void sample_dirichlet_into(std::span<const double> shapes, std::span<double> out, RngStream& rng);
SimplexPoint sample_dirichlet(const DirichletParams& params, RngStream& rng);

/// Vertex e_i with probability a_i / a.
SimplexPoint sample_bernoulli_vertex(const DirichletParams& params, RngStream& rng);

enum class QbRoute { mixture, ewens };

std::string_view to_string(QbRoute route);
QbRoute parse_route(std::string_view name);

struct QuasiBernoulliSpec {
  DirichletParams params;
  int k = 1;
  QbRoute route = QbRoute::mixture;
};

/// Dirichlet -> multinomial composition -> extended Dirichlet D(N).
SimplexPoint sample_quasi_bernoulli_mixture(const QuasiBernoulliSpec& spec, RngStream& rng);

/// Chinese restaurant seating of k customers with concentration a; returns
/// the block-size portrait.
PartitionPortrait sample_crp_portrait(int k, double a, RngStream& rng);

/// Ewens portrait -> category label per block -> D(block sizes) -> sum per label.
SimplexPoint sample_quasi_bernoulli_ewens(const QuasiBernoulliSpec& spec, RngStream& rng);

SimplexPoint sample_quasi_bernoulli(const QuasiBernoulliSpec& spec, RngStream& rng);

/// Uniform law on the union of the k-dimensional faces of the d-simplex.
SimplexPoint sample_face_uniform(int d, int k, RngStream& rng);

/// Draw from nu_{c,d}; throws NonexistentMeasure when it is signed.
SimplexPoint sample_nu(double c, int d, RngStream& rng);

// Batches.

using PointSampler = std::function<SimplexPoint(RngStream&)>;

inline constexpr std::size_t kBatchChunk = 4096;

/// n draws split into chunks of kBatchChunk; chunk j uses base.substream(j),
/// so the result does not depend on the worker count.
PointCloud draw_points(std::size_t n, std::size_t dim, const RngStream& base,
                       const PointSampler& sampler);

/// Same draws as draw_points, handed to `sink` chunk by chunk in order so
/// memory stays bounded.
void stream_points(std::size_t n, std::size_t dim, const RngStream& base,
                   const PointSampler& sampler, const std::function<void(const PointCloud&)>& sink);

}  // namespace simplex_lab
