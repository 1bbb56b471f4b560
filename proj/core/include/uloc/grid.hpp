// Uniform tensor grids on R^d (d = 1, 2) and functions sampled on them.
//
// A grid axis carries n samples x0 + i*h, i = 0..n-1, so the box is
// [x0, x0 + n*h). The induced frequency axis has the same count, spacing
// 1/(n*h), and is centered: frequencies span [-1/(2h), 1/(2h)). Quadrature is
// the left-endpoint Riemann sum h^d * sum, which coincides with the trapezoid
// rule for functions vanishing at the box boundary and keeps the discrete
// Fourier transform exactly unitary.
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "uloc/errors.hpp"
#include "uloc/summation.hpp"

namespace uloc {

enum class Domain { Time, Frequency };

struct AxisSpec {
    std::size_t n = 0; // sample count, power of two, >= 16
    double h = 0.0;    // spacing, > 0
    double x0 = 0.0;   // coordinate of sample 0

    bool operator==(const AxisSpec&) const = default;
};

/// A point in R^d; only the first dim() entries are meaningful.
using Point = std::array<double, 2>;

/// Analytic point evaluator attached to a SampledFunction when its values come
/// from a closed form. Enables exact re-evaluation under affine maps.
using PointFn = std::function<cplx(const Point&)>;

class GridSpec {
public:
    explicit GridSpec(std::vector<AxisSpec> axes);

    /// 1-D grid with n samples on [lo, hi).
    static GridSpec line(std::size_t n, double lo, double hi);
    /// 2-D tensor grid, axis 0 slowest (row-major).
    static GridSpec plane(std::size_t n0, double lo0, double hi0,
                          std::size_t n1, double lo1, double hi1);
    /// Square 2-D grid on [lo, hi)^2.
    static GridSpec square(std::size_t n, double lo, double hi);

    int dim() const { return dim_; }
    const AxisSpec& axis(int m) const { return axes_[static_cast<std::size_t>(m)]; }
    std::size_t size() const;
    double cellVolume() const;

    double coord(int m, std::size_t i) const { return axis(m).x0 + static_cast<double>(i) * axis(m).h; }
    double boxLo(int m) const { return axis(m).x0; }
    double boxHi(int m) const { return axis(m).x0 + static_cast<double>(axis(m).n) * axis(m).h; }

    /// Flat row-major index -> point.
    Point point(std::size_t flat) const;

    /// The induced frequency grid.
    GridSpec dual() const;

    bool operator==(const GridSpec& o) const { return dim_ == o.dim_ && axes_ == o.axes_; }

private:
    int dim_;
    std::array<AxisSpec, 2> axes_{};
};

/// A complex function sampled on a grid, tagged time- or frequency-domain.
class SampledFunction {
public:
    SampledFunction(GridSpec grid, Domain domain, std::vector<cplx> samples,
                    std::shared_ptr<const PointFn> source = nullptr);

    static SampledFunction zero(const GridSpec& grid, Domain domain);
    /// Samples fn on the grid and keeps it for later exact re-evaluation.
    static SampledFunction fromFunction(const GridSpec& grid, Domain domain, PointFn fn);

    const GridSpec& grid() const { return grid_; }
    Domain domain() const { return domain_; }
    std::span<const cplx> samples() const { return samples_; }
    std::span<cplx> mutableSamples() { return samples_; }
    const std::shared_ptr<const PointFn>& source() const { return source_; }

    cplx operator[](std::size_t i) const { return samples_[i]; }
    std::size_t size() const { return samples_.size(); }

    /// L2 norm under the grid quadrature.
    double norm() const;
    double normSq() const;

    SampledFunction& scale(cplx factor);
    /// Rescales to unit L2 norm. Throws on the zero function.
    SampledFunction& normalize();

private:
    GridSpec grid_;
    Domain domain_;
    std::vector<cplx> samples_;
    std::shared_ptr<const PointFn> source_;
};

/// Quadrature inner product sum f_k conj(g_k) h^d; conjugate-symmetric.
cplx inner_product(const SampledFunction& f, const SampledFunction& g);

/// x -> c * f(diag(scale)^-1 (x - shift)) with the L2-preserving constant c.
/// Re-evaluates exactly when f carries an analytic source, otherwise resamples
/// by trigonometric (band-limited) interpolation.
SampledFunction affine_scale(const SampledFunction& f, const std::array<double, 2>& scale,
                             const std::array<double, 2>& shift);

/// Multiplies by the unimodular character exp(2 pi i freq . x).
SampledFunction modulate(const SampledFunction& f, const std::array<double, 2>& freq);

void require_same_grid(const SampledFunction& f, const SampledFunction& g);

} // namespace uloc
