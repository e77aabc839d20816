#pragma once

#include <cstddef>
#include <numbers>

namespace wickflow {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
/// Lebesgue volume of the torus [0, 2pi)^2.
inline constexpr double kTorusVolume = kTwoPi * kTwoPi;

/// Truncated frequency lattice {-K..K}^2 on the torus [0, 2pi)^2 together with
/// the M x M collocation grid used for pointwise products.
///
/// Products of d band-limited factors are alias-free on the retained modes
/// when M >= (d + 1) K + 1; the default grid additionally keeps
/// M >= 2 (2K + 1) so that cubic nonlinearities (N = 2) never need more than
/// the classical two-fold padding.
class TorusGrid
{
 public:
  static constexpr int kMaxDegree = 64;

  /// Grid able to dealias products of `degree` factors.
  explicit TorusGrid(int K, int degree = 3);

  /// Grid with an explicit number of points per axis.
  static TorusGrid with_points(int K, int M);

  static int required_points(int K, int degree);

  int K() const { return K_; }
  int M() const { return M_; }
  /// Largest number of band-limited factors whose product is alias-free.
  int degree() const { return degree_; }
  int modes_per_axis() const { return 2 * K_ + 1; }
  std::size_t mode_count() const
  {
    return static_cast<std::size_t>(modes_per_axis()) * static_cast<std::size_t>(modes_per_axis());
  }
  std::size_t point_count() const { return static_cast<std::size_t>(M_) * static_cast<std::size_t>(M_); }

  bool contains(int k1, int k2) const { return k1 >= -K_ && k1 <= K_ && k2 >= -K_ && k2 <= K_; }
  std::size_t index(int k1, int k2) const
  {
    return static_cast<std::size_t>(k1 + K_) * static_cast<std::size_t>(modes_per_axis()) +
           static_cast<std::size_t>(k2 + K_);
  }
  /// Eigenvalue of 1 - Delta on e_k.
  static double eigenvalue(int k1, int k2) { return 1.0 + static_cast<double>(k1 * k1 + k2 * k2); }
  bool supports_degree(int d) const { return d <= degree_; }

  /// Grid spacing 2 pi / M.
  double spacing() const { return kTwoPi / M_; }

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

 private:
  TorusGrid(int K, int M, int degree, bool) : K_(K), M_(M), degree_(degree) {}

  int K_;
  int M_;
  int degree_;
};

}  // namespace wickflow
