#include "uloc/fourier.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace uloc {

namespace detail {

namespace {

const std::vector<cplx>& twiddles(std::size_t n)
{
    static std::mutex mtx;
    static std::map<std::size_t, std::vector<cplx>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<cplx> w(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k)
        w[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    return cache.emplace(n, std::move(w)).first->second;
}

} // namespace

void fft_pow2(std::vector<cplx>& a, int sign)
{
    const std::size_t n = a.size();
    if (n < 2) return;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const std::vector<cplx>& w = twiddles(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx tw = (sign < 0) ? w[k * stride] : std::conj(w[k * stride]);
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * tw;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

} // namespace detail

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// One axis of the continuum-convention transform on row-major data.
//   forward:  F_k = h e^{-2 pi i xi_k x0} sum_n f_n (-1)^n W^{kn}
//   inverse:  f_n = dxi (-1)^n sum_k F_k e^{+2 pi i xi_k x0} W^{-kn}
// The (-1)^n factor is the centering phase e^{-2 pi i xi_0 x}, xi_0 = -1/(2h).
void transform_axis(std::vector<cplx>& data, const GridSpec& timeGrid, int axis, bool forward)
{
    const AxisSpec& a = timeGrid.axis(axis);
    const std::size_t n = a.n;
    const double dxi = 1.0 / (static_cast<double>(n) * a.h);
    const double xi0 = -0.5 / a.h;

    std::vector<cplx> phase(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double xi = xi0 + static_cast<double>(k) * dxi;
        phase[k] = std::polar(1.0, (forward ? -two_pi : two_pi) * xi * a.x0);
    }

    const std::size_t total = data.size();
    const std::size_t inner = (timeGrid.dim() == 2 && axis == 0) ? timeGrid.axis(1).n : 1;
    const std::size_t lines = total / n;

    std::vector<cplx> line(n);
    for (std::size_t l = 0; l < lines; ++l) {
        std::size_t base;
        if (inner == 1) {
            base = l * n;
            for (std::size_t i = 0; i < n; ++i) line[i] = data[base + i];
        } else {
            base = l;
            for (std::size_t i = 0; i < n; ++i) line[i] = data[base + i * inner];
        }

        if (forward) {
            for (std::size_t i = 1; i < n; i += 2) line[i] = -line[i];
            detail::fft_pow2(line, -1);
            for (std::size_t k = 0; k < n; ++k) line[k] *= a.h * phase[k];
        } else {
            for (std::size_t k = 0; k < n; ++k) line[k] *= phase[k];
            detail::fft_pow2(line, +1);
            for (std::size_t i = 0; i < n; ++i) {
                line[i] *= dxi;
                if (i & 1) line[i] = -line[i];
            }
        }

        if (inner == 1) {
            for (std::size_t i = 0; i < n; ++i) data[base + i] = line[i];
        } else {
            for (std::size_t i = 0; i < n; ++i) data[base + i * inner] = line[i];
        }
    }
}

GridSpec centered_primal(const GridSpec& freqGrid)
{
    std::vector<AxisSpec> axes;
    for (int m = 0; m < freqGrid.dim(); ++m) {
        const AxisSpec& a = freqGrid.axis(m);
        const double h = 1.0 / (static_cast<double>(a.n) * a.h);
        axes.push_back(AxisSpec{a.n, h, -0.5 * static_cast<double>(a.n) * h});
    }
    return GridSpec(axes);
}

} // namespace

SampledFunction fourier_transform(const SampledFunction& f)
{
    if (f.domain() != Domain::Time)
        throw DomainTagError("fourier_transform expects a time-domain function");
    std::vector<cplx> data(f.samples().begin(), f.samples().end());
    for (int m = 0; m < f.grid().dim(); ++m)
        transform_axis(data, f.grid(), m, /*forward=*/true);
    return SampledFunction(f.grid().dual(), Domain::Frequency, std::move(data));
}

SampledFunction inverse_fourier_transform(const SampledFunction& F, const GridSpec& timeGrid)
{
    if (F.domain() != Domain::Frequency)
        throw DomainTagError("inverse_fourier_transform expects a frequency-domain function");
    if (!(timeGrid.dual() == F.grid()))
        throw GridMismatchError("frequency grid is not the dual of the requested time grid");
    std::vector<cplx> data(F.samples().begin(), F.samples().end());
    for (int m = 0; m < timeGrid.dim(); ++m)
        transform_axis(data, timeGrid, m, /*forward=*/false);
    return SampledFunction(timeGrid, Domain::Time, std::move(data));
}

SampledFunction inverse_fourier_transform(const SampledFunction& F)
{
    return inverse_fourier_transform(F, centered_primal(F.grid()));
}

SampledFunction spectral_derivative(const SampledFunction& f, int axis, int order)
{
    if (f.domain() != Domain::Time)
        throw DomainTagError("spectral_derivative expects a time-domain function");
    SampledFunction F = fourier_transform(f);
    const GridSpec& fg = F.grid();
    auto v = F.mutableSamples();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point xi = fg.point(i);
        v[i] *= std::pow(cplx(0.0, two_pi * xi[static_cast<std::size_t>(axis)]), order);
    }
    return inverse_fourier_transform(F, f.grid());
}

} // namespace uloc
