#include "wickflow/grid.hpp"

#include <algorithm>
#include <string>

#include "wickflow/errors.hpp"

namespace wickflow {

namespace {

int supported_degree(int K, int M)
{
  if (K == 0) return TorusGrid::kMaxDegree;
  return std::min(TorusGrid::kMaxDegree, (M - 1) / K - 1);
}

}  // namespace

int TorusGrid::required_points(int K, int degree)
{
  return std::max(2 * (2 * K + 1), (degree + 1) * K + 1);
}

TorusGrid::TorusGrid(int K, int degree)
{
  if (K < 0) throw ConfigurationError("TorusGrid: K must be >= 0, got " + std::to_string(K));
  if (degree < 1 || degree > kMaxDegree)
    throw ConfigurationError("TorusGrid: degree must lie in [1, " + std::to_string(kMaxDegree) + "]");
  K_ = K;
  M_ = required_points(K, degree);
  degree_ = supported_degree(K, M_);
}

TorusGrid TorusGrid::with_points(int K, int M)
{
  if (K < 0) throw ConfigurationError("TorusGrid: K must be >= 0");
  if (M < 2 * K + 2 || M < 2)
    throw ConfigurationError("TorusGrid: M = " + std::to_string(M) + " cannot resolve K = " + std::to_string(K));
  return TorusGrid(K, M, supported_degree(K, M), true);
}

}  // namespace wickflow
