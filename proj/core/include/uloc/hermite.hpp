// Hermite functions in the self-dual convention h_0(t) = 2^{1/4} e^{-pi t^2},
// their d-dimensional tensor products, and the extremal audits built on them.
//
// Evaluation uses the normalized upward three-term recurrence
//   h_{k+1}(t) = (2 sqrt(pi) t h_k(t) - sqrt(k) h_{k-1}(t)) / sqrt(k+1),
// stable over the validated range k <= 64 on the default boxes.
#pragma once

#include <vector>

#include "uloc/system.hpp"

namespace uloc {

struct HermiteIndex {
    std::vector<int> indices; // length d, entries >= 0

    int order() const;
};

/// Maximum supported Hermite order (validated recurrence range).
inline constexpr int kMaxHermiteOrder = 64;

/// 1-D Hermite function h_k on the grid. Throws Truncation when the order is
/// beyond the validated range or the box cannot hold the oscillatory region.
SampledFunction hermite_function(int k, const GridSpec& grid);

/// Tensor product h_{i_1}(x_1) ... h_{i_d}(x_d).
SampledFunction hermite_tensor(const HermiteIndex& I, const GridSpec& grid);

/// Raw recurrence table: values[k][i] = h_k(points[i]) for k = 0..kmax.
std::vector<std::vector<double>> hermite_table(int kmax, const std::vector<double>& points);

struct MeanDispersionSum {
    double numeric = 0.0;  // sum over k<=n of mu^2 + Delta^2 + muhat^2 + Deltahat^2
    double analytic = 0.0; // (n+1)^2 / (2 pi)
};

/// Evaluates the sharp orthonormal-family moment sum for {h_0..h_n}.
MeanDispersionSum mean_dispersion_sum(int n, const GridSpec& grid);
MeanDispersionSum mean_dispersion_sum(int n);

struct TauGrowthAudit {
    std::vector<std::size_t> memberCounts;  // N per order K = 1..maxOrder
    std::vector<double> momentSums;         // sum of tau_p^p(f) + tau_p^p(fhat)
    std::vector<double> inversePartialSums; // partial sums of (tau + tauhat)^{-2d}
    double fittedSlope = 0.0;               // log-log slope of momentSums vs counts
    double targetSlope = 0.0;               // 1 + p/(2d)
};

/// Moment-sum growth scan over tensor orders |I| <= K, K = 1..maxOrder.
TauGrowthAudit tau_growth_audit(double p, int d, int maxOrder, const GridSpec& grid);
TauGrowthAudit tau_growth_audit(double p, int d, int maxOrder);

/// Default desk-scale grids: d=1 -> 2048 samples on [-16,16),
/// d=2 -> 256^2 on [-16,16)^2.
GridSpec default_grid(int d);

} // namespace uloc
