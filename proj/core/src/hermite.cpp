#include "uloc/hermite.hpp"

#include <cmath>
#include <numbers>

#include "uloc/fourier.hpp"
#include "uloc/functionals.hpp"

namespace uloc {

namespace {

constexpr double pi = std::numbers::pi;

void check_order(int k, const GridSpec& grid)
{
    if (k < 0) throw Error("hermite order must be nonnegative");
    if (k > kMaxHermiteOrder)
        throw TruncationError("hermite order " + std::to_string(k) + " beyond validated range " +
                              std::to_string(kMaxHermiteOrder));
    // the oscillatory region |t| <= sqrt((2k+1)/(2 pi)) must sit well inside the box
    const double turning = std::sqrt((2.0 * k + 1.0) / (2.0 * pi));
    for (int m = 0; m < grid.dim(); ++m) {
        const double lo = grid.boxLo(m), hi = grid.boxHi(m);
        if (lo > -(turning + 6.0) || hi < turning + 6.0)
            throw TruncationError("grid box too small for hermite order " + std::to_string(k));
        const double nyquist = 0.5 / grid.axis(m).h;
        if (nyquist < turning + 2.0)
            throw TruncationError("grid too coarse for hermite order " + std::to_string(k));
    }
}

} // namespace

int HermiteIndex::order() const
{
    int s = 0;
    for (int i : indices) s += i;
    return s;
}

std::vector<std::vector<double>> hermite_table(int kmax, const std::vector<double>& points)
{
    const double c = 2.0 * std::sqrt(pi);
    std::vector<std::vector<double>> values(static_cast<std::size_t>(kmax) + 1,
                                            std::vector<double>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double t = points[i];
        values[0][i] = std::pow(2.0, 0.25) * std::exp(-pi * t * t);
        if (kmax >= 1) values[1][i] = c * t * values[0][i];
        for (int k = 1; k < kmax; ++k) {
            values[static_cast<std::size_t>(k) + 1][i] =
                (c * t * values[static_cast<std::size_t>(k)][i] -
                 std::sqrt(static_cast<double>(k)) * values[static_cast<std::size_t>(k) - 1][i]) /
                std::sqrt(static_cast<double>(k) + 1.0);
        }
    }
    return values;
}

SampledFunction hermite_function(int k, const GridSpec& grid)
{
    if (grid.dim() != 1) throw Error("hermite_function is 1-D; use hermite_tensor");
    check_order(k, grid);
    const AxisSpec& a = grid.axis(0);
    std::vector<double> pts(a.n);
    for (std::size_t i = 0; i < a.n; ++i) pts[i] = grid.coord(0, i);
    auto table = hermite_table(k, pts);
    std::vector<cplx> v(a.n);
    for (std::size_t i = 0; i < a.n; ++i) v[i] = table[static_cast<std::size_t>(k)][i];
    return SampledFunction(grid, Domain::Time, std::move(v));
}

SampledFunction hermite_tensor(const HermiteIndex& I, const GridSpec& grid)
{
    if (static_cast<int>(I.indices.size()) != grid.dim())
        throw Error("hermite index length must equal grid dimension");
    for (int idx : I.indices) check_order(idx, grid);

    if (grid.dim() == 1) return hermite_function(I.indices[0], grid);

    const int kmax = std::max(I.indices[0], I.indices[1]);
    std::array<std::vector<std::vector<double>>, 2> tables;
    for (int m = 0; m < 2; ++m) {
        const AxisSpec& a = grid.axis(m);
        std::vector<double> pts(a.n);
        for (std::size_t i = 0; i < a.n; ++i) pts[i] = grid.coord(m, i);
        tables[static_cast<std::size_t>(m)] = hermite_table(kmax, pts);
    }
    const std::size_t n0 = grid.axis(0).n, n1 = grid.axis(1).n;
    std::vector<cplx> v(n0 * n1);
    const auto& t0 = tables[0][static_cast<std::size_t>(I.indices[0])];
    const auto& t1 = tables[1][static_cast<std::size_t>(I.indices[1])];
    for (std::size_t i = 0; i < n0; ++i)
        for (std::size_t j = 0; j < n1; ++j) v[i * n1 + j] = t0[i] * t1[j];
    return SampledFunction(grid, Domain::Time, std::move(v));
}

GridSpec default_grid(int d)
{
    if (d == 1) return GridSpec::line(2048, -16.0, 16.0);
    if (d == 2) return GridSpec::square(256, -16.0, 16.0);
    throw Error("default grids exist for d = 1, 2 only");
}

MeanDispersionSum mean_dispersion_sum(int n, const GridSpec& grid)
{
    if (n < 0 || n > 32) throw Error("mean_dispersion_sum supports n in [0, 32]");
    MeanDispersionSum out;
    out.analytic = (n + 1.0) * (n + 1.0) / (2.0 * pi);
    for (int k = 0; k <= n; ++k) {
        SampledFunction hk = hermite_function(k, grid);
        hk.normalize();
        SampledFunction hkHat = fourier_transform(hk);
        const Point mu = mean_vector(hk);
        const Point muHat = mean_vector(hkHat);
        const double dt = dispersion(hk);
        const double df = dispersion(hkHat);
        out.numeric += mu[0] * mu[0] + dt * dt + muHat[0] * muHat[0] + df * df;
    }
    return out;
}

MeanDispersionSum mean_dispersion_sum(int n) { return mean_dispersion_sum(n, default_grid(1)); }

namespace {

// all multi-indices I with |I| == total for the given dimension
void enumerate_orders(int d, int total, std::vector<std::vector<int>>& out)
{
    if (d == 1) {
        out.push_back({total});
        return;
    }
    for (int i = 0; i <= total; ++i) out.push_back({i, total - i});
}

} // namespace

TauGrowthAudit tau_growth_audit(double p, int d, int maxOrder, const GridSpec& grid)
{
    if (d != grid.dim()) throw Error("tau_growth_audit: dimension mismatch");
    if ((d == 2 && maxOrder > 12) || (d == 1 && maxOrder > kMaxHermiteOrder))
        throw Error("tau_growth_audit: maxOrder beyond desk-scale budget");

    TauGrowthAudit audit;
    audit.targetSlope = 1.0 + p / (2.0 * d);

    double running = 0.0;
    double runningInverse = 0.0;
    std::size_t count = 0;
    for (int K = 0; K <= maxOrder; ++K) {
        std::vector<std::vector<int>> layer;
        enumerate_orders(d, K, layer);
        for (const auto& idx : layer) {
            SampledFunction f = hermite_tensor(HermiteIndex{idx}, grid);
            f.normalize();
            const SampledFunction fh = fourier_transform(f);
            const double t1 = tau_p(f, p);
            const double t2 = tau_p(fh, p);
            running += std::pow(t1, p) + std::pow(t2, p);
            runningInverse += std::pow(t1 + t2, -2.0 * d);
            ++count;
        }
        if (K >= 1) {
            audit.memberCounts.push_back(count);
            audit.momentSums.push_back(running);
            audit.inversePartialSums.push_back(runningInverse);
        }
    }

    // least-squares slope of log(momentSums) against log(memberCounts)
    const std::size_t m = audit.memberCounts.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = std::log(static_cast<double>(audit.memberCounts[i]));
        const double y = std::log(audit.momentSums[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    audit.fittedSlope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return audit;
}

TauGrowthAudit tau_growth_audit(double p, int d, int maxOrder)
{
    return tau_growth_audit(p, d, maxOrder, default_grid(d));
}

} // namespace uloc
