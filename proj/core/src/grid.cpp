#include "uloc/grid.hpp"

#include <cmath>
#include <numbers>

#include "uloc/fourier.hpp"

namespace uloc {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void validate_axis(const AxisSpec& a)
{
    if (a.n < 16 || !is_pow2(a.n))
        throw Error("axis sample count must be a power of two >= 16");
    if (!(a.h > 0.0) || !std::isfinite(a.h) || !std::isfinite(a.x0))
        throw Error("axis spacing must be positive and finite");
}

} // namespace

GridSpec::GridSpec(std::vector<AxisSpec> axes)
{
    if (axes.empty() || axes.size() > 2)
        throw Error("grid dimension must be 1 or 2");
    dim_ = static_cast<int>(axes.size());
    for (std::size_t m = 0; m < axes.size(); ++m) {
        validate_axis(axes[m]);
        axes_[m] = axes[m];
    }
}

GridSpec GridSpec::line(std::size_t n, double lo, double hi)
{
    if (!(hi > lo)) throw Error("grid box is empty");
    return GridSpec({AxisSpec{n, (hi - lo) / static_cast<double>(n), lo}});
}

GridSpec GridSpec::plane(std::size_t n0, double lo0, double hi0,
                         std::size_t n1, double lo1, double hi1)
{
    if (!(hi0 > lo0) || !(hi1 > lo1)) throw Error("grid box is empty");
    return GridSpec({AxisSpec{n0, (hi0 - lo0) / static_cast<double>(n0), lo0},
                     AxisSpec{n1, (hi1 - lo1) / static_cast<double>(n1), lo1}});
}

GridSpec GridSpec::square(std::size_t n, double lo, double hi)
{
    return plane(n, lo, hi, n, lo, hi);
}

std::size_t GridSpec::size() const
{
    std::size_t s = 1;
    for (int m = 0; m < dim_; ++m) s *= axis(m).n;
    return s;
}

double GridSpec::cellVolume() const
{
    double v = 1.0;
    for (int m = 0; m < dim_; ++m) v *= axis(m).h;
    return v;
}

Point GridSpec::point(std::size_t flat) const
{
    Point p{0.0, 0.0};
    if (dim_ == 1) {
        p[0] = coord(0, flat);
    } else {
        const std::size_t n1 = axis(1).n;
        p[0] = coord(0, flat / n1);
        p[1] = coord(1, flat % n1);
    }
    return p;
}

GridSpec GridSpec::dual() const
{
    std::vector<AxisSpec> out;
    for (int m = 0; m < dim_; ++m) {
        const AxisSpec& a = axis(m);
        const double dxi = 1.0 / (static_cast<double>(a.n) * a.h);
        out.push_back(AxisSpec{a.n, dxi, -0.5 / a.h});
    }
    return GridSpec(std::move(out));
}

SampledFunction::SampledFunction(GridSpec grid, Domain domain, std::vector<cplx> samples,
                                 std::shared_ptr<const PointFn> source)
    : grid_(std::move(grid)), domain_(domain), samples_(std::move(samples)), source_(std::move(source))
{
    if (samples_.size() != grid_.size())
        throw Error("sample count does not match grid");
    for (const cplx& z : samples_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw Error("non-finite sample value");
    }
}

SampledFunction SampledFunction::zero(const GridSpec& grid, Domain domain)
{
    return SampledFunction(grid, domain, std::vector<cplx>(grid.size()));
}

SampledFunction SampledFunction::fromFunction(const GridSpec& grid, Domain domain, PointFn fn)
{
    std::vector<cplx> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.point(i));
    return SampledFunction(grid, domain, std::move(v),
                           std::make_shared<const PointFn>(std::move(fn)));
}

double SampledFunction::normSq() const
{
    return grid_.cellVolume() *
           pairwise_sum(samples_.size(), [&](std::size_t i) { return std::norm(samples_[i]); });
}

double SampledFunction::norm() const { return std::sqrt(normSq()); }

SampledFunction& SampledFunction::scale(cplx factor)
{
    for (cplx& z : samples_) z *= factor;
    if (source_) {
        const PointFn inner = *source_;
        source_ = std::make_shared<const PointFn>(
            [inner, factor](const Point& x) { return factor * inner(x); });
    }
    return *this;
}

SampledFunction& SampledFunction::normalize()
{
    const double n = norm();
    if (n == 0.0) throw Error("cannot normalize the zero function");
    return scale(1.0 / n);
}

void require_same_grid(const SampledFunction& f, const SampledFunction& g)
{
    if (!(f.grid() == g.grid()))
        throw GridMismatchError("functions live on different grids");
    if (f.domain() != g.domain())
        throw GridMismatchError("functions carry different domain tags");
}

cplx inner_product(const SampledFunction& f, const SampledFunction& g)
{
    require_same_grid(f, g);
    const auto fs = f.samples();
    const auto gs = g.samples();
    const cplx s = pairwise_sum_cplx(fs.size(),
                                     [&](std::size_t i) { return fs[i] * std::conj(gs[i]); });
    return s * f.grid().cellVolume();
}

namespace {

// Band-limited interpolation: evaluates the centered discrete spectrum of f at
// an arbitrary point. The spectrum (computed once by the caller) is the
// quadrature transform, so f(y) = dxi * sum_k F_k e^{2 pi i xi_k y} reproduces
// the samples exactly at grid points.
class TrigInterpolator {
public:
    explicit TrigInterpolator(const SampledFunction& f) : freqGrid_(f.grid().dual())
    {
        if (f.grid().dim() != 1)
            throw Error("band-limited resampling implemented for d = 1 only; attach an analytic source");
        SampledFunction F = fourier_transform(f);
        spectrum_.assign(F.samples().begin(), F.samples().end());
    }

    cplx operator()(const Point& y) const
    {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        const AxisSpec& a = freqGrid_.axis(0);
        cplx acc = 0.0;
        for (std::size_t k = 0; k < spectrum_.size(); ++k) {
            const double xi = a.x0 + static_cast<double>(k) * a.h;
            acc += spectrum_[k] * std::polar(1.0, two_pi * xi * y[0]);
        }
        return acc * a.h;
    }

private:
    GridSpec freqGrid_;
    std::vector<cplx> spectrum_;
};

} // namespace

SampledFunction affine_scale(const SampledFunction& f, const std::array<double, 2>& scale,
                             const std::array<double, 2>& shift)
{
    if (f.domain() != Domain::Time)
        throw DomainTagError("affine_scale expects a time-domain function");
    const GridSpec& g = f.grid();
    double c = 1.0;
    for (int m = 0; m < g.dim(); ++m) {
        if (!(scale[static_cast<std::size_t>(m)] > 0.0))
            throw Error("affine_scale requires positive scales");
        c /= std::sqrt(scale[static_cast<std::size_t>(m)]);
    }

    // Support check: the essential support of f mapped forward must stay in the box.
    double peak = 0.0;
    for (const cplx& z : f.samples()) peak = std::max(peak, std::abs(z));
    if (peak > 0.0) {
        const double thresh = peak * 1e-13;
        std::array<double, 2> lo{1e300, 1e300}, hi{-1e300, -1e300};
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (std::abs(f[i]) <= thresh) continue;
            const Point p = g.point(i);
            for (int m = 0; m < g.dim(); ++m) {
                lo[static_cast<std::size_t>(m)] = std::min(lo[static_cast<std::size_t>(m)], p[static_cast<std::size_t>(m)]);
                hi[static_cast<std::size_t>(m)] = std::max(hi[static_cast<std::size_t>(m)], p[static_cast<std::size_t>(m)]);
            }
        }
        double overflow = 0.0;
        for (int m = 0; m < g.dim(); ++m) {
            const std::size_t mm = static_cast<std::size_t>(m);
            const double a = scale[mm] * lo[mm] + shift[mm];
            const double b = scale[mm] * hi[mm] + shift[mm];
            if (a < g.boxLo(m) - 0.5 * g.axis(m).h || b > g.boxHi(m) + 0.5 * g.axis(m).h)
                overflow += 1.0;
        }
        if (overflow > 0.0) {
            // estimate the escaping mass for the error message
            double mass = 0.0;
            for (std::size_t i = 0; i < f.size(); ++i) {
                Point p = g.point(i);
                bool outside = false;
                for (int m = 0; m < g.dim(); ++m) {
                    const std::size_t mm = static_cast<std::size_t>(m);
                    const double xm = scale[mm] * p[mm] + shift[mm];
                    if (xm < g.boxLo(m) || xm >= g.boxHi(m)) outside = true;
                }
                if (outside) mass += std::norm(f[i]);
            }
            mass *= g.cellVolume();
            throw TruncationError("affine_scale: mapped support leaves the grid box, escaping mass " +
                                  std::to_string(mass));
        }
    }

    std::vector<cplx> out(g.size());
    if (f.source()) {
        const PointFn& src = *f.source();
        PointFn mapped = [src, scale, shift, c](const Point& x) {
            Point y{0.0, 0.0};
            for (std::size_t m = 0; m < 2; ++m)
                y[m] = (x[m] - shift[m]) / scale[m];
            return c * src(y);
        };
        return SampledFunction::fromFunction(g, Domain::Time, std::move(mapped));
    }
    const TrigInterpolator interp(f);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Point x = g.point(i);
        Point y{0.0, 0.0};
        for (int m = 0; m < g.dim(); ++m) {
            const std::size_t mm = static_cast<std::size_t>(m);
            y[mm] = (x[mm] - shift[mm]) / scale[mm];
        }
        bool inside = true;
        for (int m = 0; m < g.dim(); ++m) {
            const std::size_t mm = static_cast<std::size_t>(m);
            if (y[mm] < g.boxLo(m) || y[mm] >= g.boxHi(m)) inside = false;
        }
        out[i] = inside ? c * interp(y) : 0.0;
    }
    return SampledFunction(g, Domain::Time, std::move(out));
}

SampledFunction modulate(const SampledFunction& f, const std::array<double, 2>& freq)
{
    if (f.domain() != Domain::Time)
        throw DomainTagError("modulate expects a time-domain function");
    const GridSpec& g = f.grid();
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<cplx> out(f.samples().begin(), f.samples().end());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Point x = g.point(i);
        double phase = 0.0;
        for (int m = 0; m < g.dim(); ++m)
            phase += freq[static_cast<std::size_t>(m)] * x[static_cast<std::size_t>(m)];
        out[i] *= std::polar(1.0, two_pi * phase);
    }
    std::shared_ptr<const PointFn> src;
    if (f.source()) {
        const PointFn inner = *f.source();
        src = std::make_shared<const PointFn>([inner, freq](const Point& x) {
            double phase = 0.0;
            for (std::size_t m = 0; m < 2; ++m) phase += freq[m] * x[m];
            return inner(x) * std::polar(1.0, 2.0 * std::numbers::pi * phase);
        });
    }
    return SampledFunction(g, Domain::Time, std::move(out), std::move(src));
}

} // namespace uloc
