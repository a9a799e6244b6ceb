#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace simplex_lab {

/// Thrown when a combinatorial enumeration would exceed its size cap.
class EnumerationTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A point of the simplex: nonnegative coordinates summing to one.
struct SimplexPoint {
  std::vector<double> coords;

  std::size_t dim() const { return coords.size(); }
  double operator[](std::size_t i) const { return coords[i]; }
  double& operator[](std::size_t i) { return coords[i]; }
};

bool is_valid(const SimplexPoint& x, double tol = 1e-12);

/// Row-major batch of points of a common dimension.
class PointCloud {
 public:
  explicit PointCloud(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
  bool empty() const { return data_.empty(); }
  std::span<const double> operator[](std::size_t i) const {
    return std::span<const double>(data_).subspan(i * dim_, dim_);
  }
  void reserve(std::size_t n) { data_.reserve(n * dim_); }
  void push_back(std::span<const double> x);
  void push_back(const SimplexPoint& x) { push_back(std::span<const double>(x.coords)); }
  void append(const PointCloud& other);

 private:
  std::size_t dim_;
  std::vector<double> data_;
};
SimplexPoint vertex(std::size_t dim, std::size_t i);
SimplexPoint barycenter(std::size_t dim);

/// Dirichlet weights (a_0, ..., a_d). Zero entries are allowed as long as
/// the total stays positive; a zero entry pins that coordinate to 0.
class DirichletParams {
 public:
  explicit DirichletParams(std::vector<double> a);

  std::span<const double> a() const { return a_; }
  double operator[](std::size_t i) const { return a_[i]; }
  std::size_t size() const { return a_.size(); }
  double total() const { return total_; }
  bool strictly_positive() const;

 private:
  std::vector<double> a_;
  double total_;
};

struct Composition {
  std::vector<int> b;
  int k = 0;
};

/// m[j-1] counts the blocks of size j, so sum_j j*m[j-1] == m.size().
struct PartitionPortrait {
  std::vector<int> m;

  int k() const { return static_cast<int>(m.size()); }
  int blocks() const;
  bool valid() const;
};

/// Nondecreasing block sizes of a portrait: value j repeated m_j times.
std::vector<int> block_sizes(const PartitionPortrait& portrait);

/// Nonempty subset of {0, ..., d} stored as a bitmask.
struct FaceSubset {
  std::uint32_t mask = 0;

  int size() const;
  bool contains(std::size_t i) const { return (mask >> i) & 1U; }
  std::vector<int> indices() const;
  std::string to_string() const;
  auto operator<=>(const FaceSubset&) const = default;
};

FaceSubset make_face(std::span<const int> indices, std::size_t dim);
FaceSubset support_of(const SimplexPoint& x);
FaceSubset support_of(std::span<const double> x);

/// Face masses indexed by bitmask; entry 0 (the empty set) is unused.
class FaceMasses {
 public:
  explicit FaceMasses(std::size_t dim) : dim_(dim), w_(std::size_t{1} << dim, 0.0) {}

  std::size_t dim() const { return dim_; }
  double operator[](FaceSubset t) const { return w_[t.mask]; }
  double& operator[](FaceSubset t) { return w_[t.mask]; }
  std::span<const double> raw() const { return w_; }
  double sum() const;
  /// Faces ordered by size, then by mask.
  std::vector<FaceSubset> faces() const;

 private:
  std::size_t dim_;
  std::vector<double> w_;
};

inline constexpr double kDefaultEnumerationCap = 1e7;
inline constexpr int kDefaultPortraitCap = 60;
inline constexpr int kMaxSubsetDim = 21;

double pochhammer(double c, int n);
/// Gamma(x + s) / Gamma(x) for real s; reduces to pochhammer for integer s.
double gamma_ratio(double x, double s);
double log_factorial(int n);
double binomial(int n, int r);

/// Compositions of k into `parts` nonnegative parts in descending
/// lexicographic order: (k,0,...,0) first, (0,...,0,k) last.
std::vector<Composition> enumerate_compositions(int parts, int k,
                                                double cap = kDefaultEnumerationCap);
void for_each_composition(int parts, int k, const std::function<void(const std::vector<int>&)>& fn,
                          double cap = kDefaultEnumerationCap);

/// Partitions of k in portrait form. Order: m_1 descending, then m_2, ...
/// so k=3 yields (3,0,0), (1,1,0), (0,0,1).
std::vector<PartitionPortrait> enumerate_portraits(int k, int cap = kDefaultPortraitCap);
void for_each_portrait(int k, const std::function<void(const std::vector<int>&)>& fn,
                       int cap = kDefaultPortraitCap);

/// Mixture weight of D(b) inside the quasi-Bernoulli law B_k(a).
double composition_weight(const Composition& b, const DirichletParams& params);

/// Ewens probability of a portrait with concentration a.
double ewens_pmf(const PartitionPortrait& m, double a);

/// Symmetric polynomial sum_S (-1)^{n-|S|} (a_S)_k over subsets of the
/// given variables; zero whenever k < a.size().
double pk_polynomial(int k, std::span<const double> a);

/// Masses w_T = P_k(a_T) / (a)_k of B_k(a) on each open face F_T.
FaceMasses face_weights(int k, const DirichletParams& params);

}  // namespace simplex_lab
