#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bdg {

/// One-dimensional partition of [x_left, x_right] into elements.
///
/// Edges are stored explicitly so non-uniform partitions are representable,
/// even though only uniform meshes are built here.
class Mesh1D {
 public:
  explicit Mesh1D(std::vector<double> edges) : edges_(std::move(edges)) {
    if (edges_.size() < 2) {
      throw std::invalid_argument("Mesh1D: need at least two edges");
    }
    for (std::size_t i = 1; i < edges_.size(); ++i) {
      if (!(edges_[i] > edges_[i - 1])) {
        throw std::invalid_argument("Mesh1D: edges must be strictly increasing");
      }
    }
  }

  std::size_t n_el() const { return edges_.size() - 1; }
  double x_left() const { return edges_.front(); }
  double x_right() const { return edges_.back(); }
  double length() const { return x_right() - x_left(); }
  const std::vector<double>& edges() const { return edges_; }

  double width(std::size_t e) const { return edges_.at(e + 1) - edges_.at(e); }
  double center(std::size_t e) const { return 0.5 * (edges_.at(e) + edges_.at(e + 1)); }
  /// dx/dxi of the affine map from [-1, 1].
  double jacobian(std::size_t e) const { return 0.5 * width(e); }
  double to_physical(std::size_t e, double xi) const { return center(e) + jacobian(e) * xi; }

  /// Element containing x; points on an interior edge belong to the right element.
  std::size_t locate(double x) const {
    if (x < x_left() || x > x_right()) {
      throw std::out_of_range("Mesh1D::locate: point outside the domain");
    }
    std::size_t lo = 0, hi = n_el();
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      if (x >= edges_[mid]) lo = mid; else hi = mid;
    }
    return lo;
  }

 private:
  std::vector<double> edges_;
};

inline Mesh1D build_uniform_mesh(double x_left, double x_right, std::size_t n_el) {
  if (n_el < 1) throw std::invalid_argument("build_uniform_mesh: n_el must be >= 1");
  if (!(x_left < x_right)) {
    throw std::invalid_argument("build_uniform_mesh: degenerate interval");
  }
  std::vector<double> edges(n_el + 1);
  const double dx = (x_right - x_left) / static_cast<double>(n_el);
  for (std::size_t i = 0; i <= n_el; ++i) edges[i] = x_left + dx * static_cast<double>(i);
  edges.back() = x_right;
  return Mesh1D(std::move(edges));
}

}  // namespace bdg
