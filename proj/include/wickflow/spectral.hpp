#pragma once

#include <span>

#include "wickflow/fields.hpp"

namespace wickflow {

/// Galerkin projection of the trigonometric interpolant of `f` onto |k|inf <= K.
/// For band-limited data this inverts to_real exactly.
SpectralField to_spectral(const RealField& f);

/// Evaluates the truncated Fourier series on the collocation grid.
RealField to_real(const SpectralField& u);

/// e^{tA} u with A = Delta - 1: multiplies u_k by exp(-(1 + |k|^2) t).
SpectralField apply_semigroup(const SpectralField& u, double t);

/// Spectral coefficients of the pointwise product of all factors, exact on the
/// retained modes. Throws ConfigurationError when the grid padding cannot
/// dealias that many factors.
SpectralField dealiased_product(std::span<const SpectralField> factors);

/// Convolution with the Gaussian approximate identity, symbol exp(-eps^2 |k|^2 / 2).
SpectralField mollify(const SpectralField& u, double eps);

/// Sharp truncation to |k|inf <= K_target (K_target <= u.grid().K()), kept on
/// the same grid.
SpectralField truncate(const SpectralField& u, int K_target);

/// Copies the coefficients of `u` onto `target`; modes outside either lattice are
/// dropped or zero-filled.
SpectralField resample(const SpectralField& u, const TorusGrid& target);

}  // namespace wickflow
