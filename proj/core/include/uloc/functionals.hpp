// Scalar functionals of a sampled function: moments, dispersions, radial
// moments, weighted norms, set concentration, and rearrangement measure.
#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "uloc/system.hpp"

namespace uloc {

// --- weights -----------------------------------------------------------------

/// |x - center|^p
struct RadialPowerWeight {
    double p;
    Point center{0.0, 0.0};
};

/// |x_1|^a1 ... |x_d|^ad
struct SeparablePowerWeight {
    std::array<double, 2> alpha{1.0, 1.0};
};

/// (|x| + 1)^p
struct RadialPlusOneWeight {
    double p;
};

struct WeightSpec {
    std::variant<RadialPowerWeight, SeparablePowerWeight, RadialPlusOneWeight> kind;

    double operator()(const Point& x, int dim) const;
};

// --- functionals ---------------------------------------------------------------

/// First moment vector of |f|^2. Requires unit norm (1e-8), else Unnormalized.
Point mean_vector(const SampledFunction& f);

/// Radial second central moment (sqrt). Coincides with the classical time
/// dispersion in d = 1. Requires unit norm.
double dispersion(const SampledFunction& f);

/// (integral |x|^p |f|^2)^{1/p}. Requires unit norm.
double tau_p(const SampledFunction& f, double p);

/// (integral |x - a|^p |f|^2)^{1/p}. Requires unit norm.
double tau_p_shifted(const SampledFunction& f, double p, const Point& a);

/// (integral w(x) |f|^2)^{1/2}. No normalization requirement.
double weighted_l2(const SampledFunction& f, const WeightSpec& w);

/// sum_m integral |xi_m|^{2d} |ghat|^2 dxi for a time-domain g.
double sobolev_energy(const SampledFunction& g, int d);

/// integral over masked cells of |f|^2. Requires unit norm.
double concentration_on_set(const SampledFunction& f, const std::vector<std::uint8_t>& mask);

struct RearrangementResult {
    double measure = 0.0;              // selected cell count * cell volume
    std::vector<std::uint8_t> mask;    // selected cells
};

/// Greedy smallest-measure set whose complement holds at most eps^2 of the
/// energy. Ties broken by flat grid index. Requires unit norm.
RearrangementResult k_epsilon(const SampledFunction& omega, double eps);

// --- dyadic scan ---------------------------------------------------------------

struct DyadicBin {
    int k = 0;
    std::size_t count = 0;
    double binUpper = 0.0; // tau values in (binUpper/2, binUpper]
};

struct DyadicScanReport {
    std::vector<DyadicBin> bins;            // sorted by k
    double supProduct = 0.0;                // sup_n tau_p(b_n,q_n) tau_p(bhat_n,r_n)
    std::vector<double> products;           // per member, construction order
    std::vector<int> memberBin;             // bin index k per member
    std::string description;
};

/// Bins members by tau_p(b_n, q_n) in (D 2^{-k}, D 2^{-k+1}], D = sup of the
/// per-member product of shifted radial moments.
DyadicScanReport dyadic_bin_scan(const OrthonormalSystem& system, double p,
                                 const std::vector<std::pair<Point, Point>>* shifts = nullptr);

} // namespace uloc
