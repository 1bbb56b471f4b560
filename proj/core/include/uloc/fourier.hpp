// Unitary discrete Fourier transform matching the continuum convention
//   fhat(xi) = integral f(x) exp(-2 pi i xi . x) dx.
//
// Implemented per axis as phase * FFT * phase with the grid quadrature weight,
// so Parseval holds to machine precision and forward/inverse round-trip is an
// exact algebraic identity up to FFT roundoff.
#pragma once

#include "uloc/grid.hpp"

namespace uloc {

/// Time -> frequency on the induced dual grid.
SampledFunction fourier_transform(const SampledFunction& f);

/// Frequency -> time onto the given primal grid (its dual must equal F's grid);
/// exact inverse of fourier_transform.
SampledFunction inverse_fourier_transform(const SampledFunction& F, const GridSpec& timeGrid);

/// Frequency -> time assuming a centered primal box [-nh/2, nh/2).
SampledFunction inverse_fourier_transform(const SampledFunction& F);

/// q-th spectral partial derivative along the given axis.
SampledFunction spectral_derivative(const SampledFunction& f, int axis, int order);

namespace detail {
/// In-place radix-2 FFT; sign = -1 forward, +1 inverse (unscaled).
void fft_pow2(std::vector<cplx>& a, int sign);
} // namespace detail

} // namespace uloc
