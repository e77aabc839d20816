#include "wickflow/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wickflow/errors.hpp"

namespace wickflow {

namespace {

void require_same_grid(const TorusGrid& a, const TorusGrid& b, const char* what)
{
  if (!(a == b)) throw ConfigurationError(std::string(what) + ": fields live on different grids");
}

}  // namespace

// ---------------------------------------------------------------------------
RealField::RealField(TorusGrid grid) : grid_(grid), values_(grid.point_count(), 0.0) {}

RealField::RealField(TorusGrid grid, std::vector<double> values) : grid_(grid), values_(std::move(values))
{
  if (values_.size() != grid_.point_count())
    throw ConfigurationError("RealField: expected " + std::to_string(grid_.point_count()) + " samples, got " +
                             std::to_string(values_.size()));
}

RealField RealField::constant(TorusGrid grid, double value)
{
  RealField f(grid);
  std::fill(f.values_.begin(), f.values_.end(), value);
  return f;
}

double RealField::sup_norm() const
{
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double RealField::mean() const
{
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

bool RealField::all_finite() const
{
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

RealField& RealField::operator+=(const RealField& other)
{
  require_same_grid(grid_, other.grid_, "RealField +=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

RealField& RealField::operator-=(const RealField& other)
{
  require_same_grid(grid_, other.grid_, "RealField -=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

RealField& RealField::operator*=(const RealField& other)
{
  require_same_grid(grid_, other.grid_, "RealField *=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= other.values_[i];
  return *this;
}

RealField& RealField::operator*=(double s)
{
  for (double& v : values_) v *= s;
  return *this;
}

RealField operator+(RealField a, const RealField& b) { return a += b; }
RealField operator-(RealField a, const RealField& b) { return a -= b; }
RealField operator*(RealField a, const RealField& b) { return a *= b; }
RealField operator*(double s, RealField a) { return a *= s; }

// ---------------------------------------------------------------------------
SpectralField::SpectralField(TorusGrid grid) : grid_(grid), coeffs_(grid.mode_count()) {}

SpectralField SpectralField::constant(TorusGrid grid, double value)
{
  SpectralField u(grid);
  u(0, 0) = kTwoPi * value;
  return u;
}

void SpectralField::set_mode(int k1, int k2, value_type value)
{
  if (k1 == 0 && k2 == 0) {
    (*this)(0, 0) = value_type(value.real(), 0.0);
    return;
  }
  (*this)(k1, k2) = value;
  (*this)(-k1, -k2) = std::conj(value);
}

double SpectralField::l2_norm() const
{
  double s = 0.0;
  for (const auto& c : coeffs_) s += std::norm(c);
  return std::sqrt(s);
}

double SpectralField::max_abs() const
{
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double SpectralField::hermitian_defect() const
{
  double d = 0.0;
  const int K = grid_.K();
  for (int k1 = -K; k1 <= K; ++k1)
    for (int k2 = -K; k2 <= K; ++k2) d = std::max(d, std::abs((*this)(-k1, -k2) - std::conj((*this)(k1, k2))));
  return d;
}

bool SpectralField::all_finite() const
{
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const value_type& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

SpectralField& SpectralField::operator+=(const SpectralField& other)
{
  require_same_grid(grid_, other.grid_, "SpectralField +=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other)
{
  require_same_grid(grid_, other.grid_, "SpectralField -=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s)
{
  for (auto& c : coeffs_) c *= s;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

double relative_difference(const SpectralField& a, const SpectralField& b)
{
  const double scale = std::max({a.l2_norm(), b.l2_norm(), std::numeric_limits<double>::min()});
  return (a - b).l2_norm() / scale;
}

double relative_difference(const RealField& a, const RealField& b)
{
  const double scale = std::max({a.sup_norm(), b.sup_norm(), std::numeric_limits<double>::min()});
  return (a - b).sup_norm() / scale;
}

}  // namespace wickflow
