#include "uloc/bump.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "uloc/fourier.hpp"
#include "uloc/functionals.hpp"

namespace uloc {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::size_t next_pow2(std::size_t n)
{
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

double mollifier(double r2norm) // argument |u/rad|^2
{
    if (r2norm >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r2norm));
}

// phi = chi * omega tabulated on a lattice {off_m + j delta_m} covering the
// support of the convolution. Sampling chi left-closed on the unit-side cube
// makes the lattice autocorrelations of phi vanish exactly at the integer
// frequencies the families need.
//
// All block scales share one reference table at a fixed dyadic spacing
// 2^{-refLevel}; each scale's evaluation lattice nests into it exactly on
// dyadic grids, so the sampled profile is literally the same function across
// scales and the dilation laws hold to machine precision.
struct PhiLattice {
    int dim = 1;
    std::array<double, 2> off{0.0, 0.0};
    std::array<double, 2> delta{1.0, 1.0};
    std::array<long, 2> jLo{0, 0};
    std::array<std::size_t, 2> count{1, 1};
    std::array<std::size_t, 2> padded{1, 1};
    std::vector<double> phi;

    bool lookup(const Point& y, double& out) const
    {
        std::size_t idx[2] = {0, 0};
        for (int m = 0; m < dim; ++m) {
            const std::size_t mm = static_cast<std::size_t>(m);
            const double t = (y[mm] - off[mm]) / delta[mm] - static_cast<double>(jLo[mm]);
            const double r = std::round(t);
            if (r < -0.5 || r >= static_cast<double>(count[mm])) {
                out = 0.0;
                return true;
            }
            if (std::abs(t - r) > 1e-6) return false; // misaligned point
            idx[mm] = static_cast<std::size_t>(r);
        }
        out = dim == 1 ? phi[idx[0]] : phi[idx[0] * padded[1] + idx[1]];
        return true;
    }
};

void fft2d(std::vector<cplx>& a, std::size_t m0, std::size_t m1, int sign)
{
    std::vector<cplx> line(std::max(m0, m1));
    for (std::size_t i = 0; i < m0; ++i) {
        line.assign(a.begin() + static_cast<std::ptrdiff_t>(i * m1),
                    a.begin() + static_cast<std::ptrdiff_t>((i + 1) * m1));
        detail::fft_pow2(line, sign);
        std::copy(line.begin(), line.begin() + static_cast<std::ptrdiff_t>(m1),
                  a.begin() + static_cast<std::ptrdiff_t>(i * m1));
    }
    line.resize(m0);
    for (std::size_t j = 0; j < m1; ++j) {
        for (std::size_t i = 0; i < m0; ++i) line[i] = a[i * m1 + j];
        detail::fft_pow2(line, sign);
        for (std::size_t i = 0; i < m0; ++i) a[i * m1 + j] = line[i];
    }
}

// Tabulates the convolution on the lattice {off + j delta} (same spacing and
// offset on every axis).
PhiLattice tabulate_phi(const BumpSpec& spec, int dim, double delta, double offset)
{
    PhiLattice lat;
    lat.dim = dim;
    const double rad = spec.mollifierRadius;
    const double yLo = spec.cubeLo - rad;
    const double yHi = spec.cubeHi + rad;

    for (int m = 0; m < lat.dim; ++m) {
        const std::size_t mm = static_cast<std::size_t>(m);
        lat.delta[mm] = delta;
        lat.off[mm] = offset;
        if (lat.delta[mm] > rad / 2.0)
            throw ResolutionError("grid too coarse to resolve the mollifier");
        lat.jLo[mm] = static_cast<long>(std::ceil((yLo - 4.0 * lat.delta[mm] - lat.off[mm]) / lat.delta[mm]));
        const long jHi = static_cast<long>(std::floor((yHi + 4.0 * lat.delta[mm] - lat.off[mm]) / lat.delta[mm]));
        lat.count[mm] = static_cast<std::size_t>(std::max<long>(jHi - lat.jLo[mm] + 1, 1));
        const std::size_t kernelCells = static_cast<std::size_t>(std::ceil(2.0 * rad / lat.delta[mm])) + 4;
        lat.padded[mm] = next_pow2(lat.count[mm] + kernelCells);
    }

    const std::size_t m0 = lat.padded[0];
    const std::size_t m1 = lat.dim == 2 ? lat.padded[1] : 1;
    std::vector<cplx> chi(m0 * m1, cplx{0.0, 0.0});
    std::vector<cplx> omega(m0 * m1, cplx{0.0, 0.0});

    // indicator samples, left-closed cube
    for (std::size_t i0 = 0; i0 < lat.count[0]; ++i0) {
        const double y0 = lat.off[0] + static_cast<double>(lat.jLo[0] + static_cast<long>(i0)) * lat.delta[0];
        const bool in0 = (y0 >= spec.cubeLo && y0 < spec.cubeHi);
        if (lat.dim == 1) {
            if (in0) chi[i0] = 1.0;
            continue;
        }
        if (!in0) continue;
        for (std::size_t i1 = 0; i1 < lat.count[1]; ++i1) {
            const double y1 = lat.off[1] + static_cast<double>(lat.jLo[1] + static_cast<long>(i1)) * lat.delta[1];
            if (y1 >= spec.cubeLo && y1 < spec.cubeHi) chi[i0 * m1 + i1] = 1.0;
        }
    }

    // wrapped radial kernel
    for (std::size_t i0 = 0; i0 < m0; ++i0) {
        const long s0 = static_cast<long>(i0) <= static_cast<long>(m0 / 2)
                            ? static_cast<long>(i0)
                            : static_cast<long>(i0) - static_cast<long>(m0);
        const double u0 = static_cast<double>(s0) * lat.delta[0];
        if (lat.dim == 1) {
            omega[i0] = mollifier((u0 / rad) * (u0 / rad));
            continue;
        }
        for (std::size_t i1 = 0; i1 < m1; ++i1) {
            const long s1 = static_cast<long>(i1) <= static_cast<long>(m1 / 2)
                                ? static_cast<long>(i1)
                                : static_cast<long>(i1) - static_cast<long>(m1);
            const double u1 = static_cast<double>(s1) * lat.delta[1];
            omega[i0 * m1 + i1] = mollifier((u0 * u0 + u1 * u1) / (rad * rad));
        }
    }

    double vol = 1.0;
    for (int m = 0; m < lat.dim; ++m) vol *= lat.delta[static_cast<std::size_t>(m)];

    if (lat.dim == 1) {
        detail::fft_pow2(chi, -1);
        detail::fft_pow2(omega, -1);
        for (std::size_t i = 0; i < chi.size(); ++i) chi[i] *= omega[i] * vol;
        detail::fft_pow2(chi, +1);
        for (auto& z : chi) z /= static_cast<double>(m0);
    } else {
        fft2d(chi, m0, m1, -1);
        fft2d(omega, m0, m1, -1);
        for (std::size_t i = 0; i < chi.size(); ++i) chi[i] *= omega[i] * vol;
        fft2d(chi, m0, m1, +1);
        for (auto& z : chi) z /= static_cast<double>(m0 * m1);
    }

    lat.phi.resize(chi.size());
    double peak = 0.0;
    for (std::size_t i = 0; i < chi.size(); ++i) peak = std::max(peak, chi[i].real());
    // phi vanishes outside the closed support of chi * omega; the spectral
    // convolution leaves roundoff dust there, which must be exactly zero for
    // the disjoint-support bookkeeping downstream.
    const double floor = peak * 1e-14;
    const double supLo = spec.cubeLo - rad, supHi = spec.cubeHi + rad;
    for (std::size_t i0 = 0; i0 < m0; ++i0) {
        const double y0 = lat.off[0] + static_cast<double>(lat.jLo[0] + static_cast<long>(i0)) * lat.delta[0];
        const bool in0 = (i0 < lat.count[0]) && y0 >= supLo && y0 <= supHi;
        if (lat.dim == 1) {
            const double v = chi[i0].real();
            lat.phi[i0] = (in0 && v > floor) ? v : 0.0;
            continue;
        }
        for (std::size_t i1 = 0; i1 < m1; ++i1) {
            const double y1 = lat.off[1] + static_cast<double>(lat.jLo[1] + static_cast<long>(i1)) * lat.delta[1];
            const bool in = in0 && (i1 < lat.count[1]) && y1 >= supLo && y1 <= supHi;
            const double v = chi[i0 * m1 + i1].real();
            lat.phi[i0 * m1 + i1] = (in && v > floor) ? v : 0.0;
        }
    }
    return lat;
}

int auto_ref_level(const BumpSpec& spec, int dim)
{
    if (spec.refLevel > 0) return spec.refLevel;
    return dim == 1 ? 13 : 8;
}

// Shared reference table at spacing 2^{-refLevel}, offset 0.
std::shared_ptr<const PhiLattice> reference_table(const BumpSpec& spec, int dim)
{
    struct Key {
        int dim, level;
        double cubeLo, cubeHi, rad;
        auto operator<=>(const Key&) const = default;
    };
    static std::mutex mtx;
    static std::map<Key, std::shared_ptr<const PhiLattice>> cache;
    const int level = auto_ref_level(spec, dim);
    const Key key{dim, level, spec.cubeLo, spec.cubeHi, spec.mollifierRadius};
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto table = std::make_shared<const PhiLattice>(
        tabulate_phi(spec, dim, std::exp2(static_cast<double>(-level)), 0.0));
    cache.emplace(key, table);
    return table;
}

// Table for evaluating psi-arguments at block scale s on this grid: the shared
// reference table when the grid lattice nests into it, otherwise a one-off
// table at the grid's own spacing.
std::shared_ptr<const PhiLattice> phi_for_scale(const BumpSpec& spec, const GridSpec& grid, int s)
{
    const int dim = grid.dim();
    const double refDelta = std::exp2(static_cast<double>(-auto_ref_level(spec, dim)));
    bool aligned = true;
    for (int m = 0; m < dim; ++m) {
        const double scale = std::exp2(static_cast<double>(s)) * spec.finalScale;
        const double delta = grid.axis(m).h / scale;
        const double off = grid.axis(m).x0 / scale;
        const double stride = delta / refDelta;
        const double offCells = off / refDelta;
        if (stride < 1.0 - 1e-9 || std::abs(stride - std::round(stride)) > 1e-9 * stride ||
            std::abs(offCells - std::round(offCells)) > 1e-9 * std::max(1.0, std::abs(offCells)))
            aligned = false;
    }
    if (aligned) return reference_table(spec, dim);
    if (grid.dim() == 2 && grid.axis(0).h != grid.axis(1).h)
        throw ResolutionError("bump evaluation needs equal spacings off the reference lattice");
    const double scale = std::exp2(static_cast<double>(s)) * spec.finalScale;
    return std::make_shared<const PhiLattice>(
        tabulate_phi(spec, dim, grid.axis(0).h / scale, grid.axis(0).x0 / scale));
}

// Raw (unnormalized) member values of Psi_{j,s}.
std::vector<cplx> member_values(const BumpSpec& spec, const PhiLattice& lat,
                                const std::array<int, 2>& j, int s, const GridSpec& grid)
{
    const int d = grid.dim();
    const double invScale = std::exp2(static_cast<double>(-s));
    std::vector<cplx> v(grid.size(), cplx{0.0, 0.0});
    const double lo = shell_lo(s), hi = shell_hi(s);

    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point x = grid.point(i);
        bool nearShell = true;
        for (int m = 0; m < d; ++m) {
            const double ax = spec.evenized ? std::abs(x[static_cast<std::size_t>(m)])
                                            : x[static_cast<std::size_t>(m)];
            if (ax < lo - 1.0 || ax > hi + 1.0) nearShell = false;
        }
        if (!nearShell) continue;

        Point y{0.0, 0.0};
        for (int m = 0; m < d; ++m) {
            const std::size_t mm = static_cast<std::size_t>(m);
            y[mm] = x[mm] * invScale / spec.finalScale;
        }
        double base = 0.0;
        if (!lat.lookup(y, base))
            throw ResolutionError("grid lattice misaligned with the bump construction");
        double amp = base > 0.0 ? std::sqrt(base) : 0.0;
        if (spec.evenized) {
            Point yneg{-y[0], -y[1]};
            double baseNeg = 0.0;
            if (!lat.lookup(yneg, baseNeg))
                throw ResolutionError("grid lattice misaligned with the bump construction");
            const double ampNeg = baseNeg > 0.0 ? std::sqrt(baseNeg) : 0.0;
            amp = (amp + ampNeg) / std::numbers::sqrt2;
        }
        if (amp == 0.0) continue;

        double phase = 0.0;
        for (int m = 0; m < d; ++m)
            phase += static_cast<double>(j[static_cast<std::size_t>(m)]) * invScale * x[static_cast<std::size_t>(m)];
        v[i] = amp * std::polar(1.0, two_pi * phase);
    }
    return v;
}

void require_shell_inside(const GridSpec& grid, int s, bool evenized)
{
    for (int m = 0; m < grid.dim(); ++m) {
        const double needLo = evenized ? -shell_hi(s) : shell_lo(s) - 1.0;
        if (grid.boxLo(m) > needLo || grid.boxHi(m) < shell_hi(s))
            throw TruncationError("shell (" + std::to_string(shell_lo(s)) + ", " +
                                  std::to_string(shell_hi(s)) + ") does not fit inside the grid box");
    }
}

} // namespace

std::size_t block_size(int s, int d)
{
    const std::size_t perAxis = (std::size_t{2} << s) + 1; // 2^{s+1} + 1
    std::size_t total = 1;
    for (int m = 0; m < d; ++m) total *= perAxis;
    return total;
}

std::vector<std::array<int, 2>> block_lattice(int s, int d)
{
    const int half = 1 << s;
    std::vector<std::array<int, 2>> out;
    if (d == 1) {
        for (int j = -half; j <= half; ++j) out.push_back({j, 0});
        return out;
    }
    for (int j0 = -half; j0 <= half; ++j0)
        for (int j1 = -half; j1 <= half; ++j1) out.push_back({j0, j1});
    return out;
}

SampledFunction build_bump(const BumpSpec& spec, const GridSpec& grid)
{
    require_shell_inside(grid, 0, spec.evenized);
    const auto lat = phi_for_scale(spec, grid, 0);
    std::vector<cplx> v = member_values(spec, *lat, {0, 0}, 0, grid);
    SampledFunction psi(grid, Domain::Time, std::move(v));
    psi.normalize();

    // half-integer autocorrelation check (Resolution error when it fails)
    double worst = 0.0;
    const int d = grid.dim();
    for (int twice0 = -8; twice0 <= 8; ++twice0) {
        for (int twice1 = (d == 2 ? -8 : 0); twice1 <= (d == 2 ? 8 : 0); ++twice1) {
            if (twice0 == 0 && twice1 == 0) continue;
            const Point b{0.5 * twice0, 0.5 * twice1};
            const cplx corr =
                pairwise_sum_cplx(psi.size(), [&](std::size_t i) {
                    const Point x = grid.point(i);
                    double phase = b[0] * x[0];
                    if (d == 2) phase += b[1] * x[1];
                    return std::norm(psi[i]) * std::polar(1.0, -two_pi * phase);
                }) *
                grid.cellVolume();
            worst = std::max(worst, std::abs(corr));
        }
    }
    if (worst > 1e-6)
        throw ResolutionError("bump autocorrelation check failed at " + std::to_string(worst));
    return psi;
}

SampledFunction psi_member(const BumpSpec& spec, const std::array<int, 2>& j, int s,
                           const GridSpec& grid)
{
    require_shell_inside(grid, s, spec.evenized);
    const auto lat = phi_for_scale(spec, grid, s);
    SampledFunction f(grid, Domain::Time, member_values(spec, *lat, j, s, grid));
    f.normalize();
    return f;
}

OrthonormalSystem psi_family(const BumpSpec& spec, int s, const GridSpec& grid)
{
    require_shell_inside(grid, s, spec.evenized);
    const auto lat = phi_for_scale(spec, grid, s);
    const auto lattice = block_lattice(s, grid.dim());
    std::vector<SampledFunction> members;
    members.reserve(lattice.size());
    for (const auto& j : lattice) {
        SampledFunction f(grid, Domain::Time, member_values(spec, *lat, j, s, grid));
        f.normalize();
        members.push_back(std::move(f));
    }
    return OrthonormalSystem(std::move(members), 1e-8);
}

DerivativeBoundAudit derivative_bound_check(const BumpSpec& spec, const std::vector<cplx>& coeffs,
                                            int s, int q, int axis, const GridSpec& grid)
{
    const auto lattice = block_lattice(s, grid.dim());
    if (coeffs.size() > lattice.size())
        throw Error("derivative_bound_check: more coefficients than block members");
    require_shell_inside(grid, s, spec.evenized);
    const auto lat = phi_for_scale(spec, grid, s);

    std::vector<cplx> acc(grid.size(), cplx{0.0, 0.0});
    double coeffNorm = 0.0;
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
        if (coeffs[n] == cplx{0.0, 0.0}) continue;
        SampledFunction f(grid, Domain::Time, member_values(spec, *lat, lattice[n], s, grid));
        f.normalize();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += coeffs[n] * f[i];
        coeffNorm += std::norm(coeffs[n]);
    }
    SampledFunction R(grid, Domain::Time, std::move(acc));
    DerivativeBoundAudit audit;
    audit.coeffNormSq = coeffNorm;
    audit.lhs = coeffNorm == 0.0 ? 0.0 : std::pow(spectral_derivative(R, axis, q).norm(), 2.0);
    audit.ratio = coeffNorm == 0.0 ? 0.0 : audit.lhs / coeffNorm;
    return audit;
}

SampledFunction dyadic_mother(const GridSpec& grid)
{
    if (grid.dim() != 1) throw Error("dyadic_mother is 1-D");
    PointFn fn = [](const Point& x) -> cplx {
        const double u = 2.0 * (std::abs(x[0]) - 1.5);
        if (std::abs(u) >= 1.0) return 0.0;
        return std::exp(-1.0 / (1.0 - u * u));
    };
    SampledFunction f = SampledFunction::fromFunction(grid, Domain::Time, fn);
    const double n = f.norm();
    PointFn scaled = [fn, n](const Point& x) { return fn(x) / n; };
    return SampledFunction::fromFunction(grid, Domain::Time, scaled);
}

OrthonormalSystem dyadic_example(const SampledFunction& mother, int nLo, int nHi)
{
    if (nLo > nHi) throw Error("dyadic_example: empty index range");
    const GridSpec& grid = mother.grid();
    if (!mother.source()) throw Error("dyadic_example needs an analytic mother");
    const PointFn src = *mother.source();

    std::vector<SampledFunction> members;
    for (int n = nLo; n <= nHi; ++n) {
        const double outer = std::exp2(static_cast<double>(-n)) * 2.0;
        for (int m = 0; m < grid.dim(); ++m)
            if (grid.boxLo(m) > -outer || grid.boxHi(m) < outer)
                throw TruncationError("dyadic member support leaves the grid box");
        const double pref = std::exp2(0.5 * n);
        const double dil = std::exp2(static_cast<double>(n));
        SampledFunction f = SampledFunction::fromFunction(
            grid, Domain::Time, [src, pref, dil](const Point& x) {
                return pref * src(Point{dil * x[0], dil * x[1]});
            });
        f.normalize();
        members.push_back(std::move(f));
    }
    return OrthonormalSystem(std::move(members), 1e-8);
}

CovarianceLawsAudit covariance_laws_check(const SampledFunction& mother, int m, int n,
                                          double relTol)
{
    if (mother.grid().dim() != 1) throw Error("covariance_laws_check is 1-D");
    SampledFunction psi = mother;
    psi.normalize();

    const Point mu0 = mean_vector(psi);
    const double d0 = dispersion(psi);
    const SampledFunction psiHat = fourier_transform(psi);
    const Point muHat0 = mean_vector(psiHat);
    const double dHat0 = dispersion(psiHat);

    const double scale = std::exp2(static_cast<double>(-m));
    SampledFunction member = affine_scale(psi, {scale, 1.0}, {n * scale, 0.0});
    member.normalize();
    const SampledFunction memberHat = fourier_transform(member);

    CovarianceLawsAudit audit;
    audit.meanTime = mean_vector(member)[0];
    audit.meanTimeExpected = scale * (mu0[0] + n);
    audit.dispTime = dispersion(member);
    audit.dispTimeExpected = scale * d0;
    audit.meanFreq = mean_vector(memberHat)[0];
    audit.meanFreqExpected = muHat0[0] / scale;
    audit.dispFreq = dispersion(memberHat);
    audit.dispFreqExpected = dHat0 / scale;

    const double baseProduct = d0 * dHat0;
    audit.productRelSpread = std::abs(audit.dispTime * audit.dispFreq / baseProduct - 1.0);

    auto ok = [relTol](double got, double want) {
        const double denom = std::max(std::abs(want), 1e-12);
        return std::abs(got - want) / denom <= relTol;
    };
    audit.pass = ok(audit.meanTime, audit.meanTimeExpected) &&
                 ok(audit.dispTime, audit.dispTimeExpected) &&
                 ok(audit.dispFreq, audit.dispFreqExpected) &&
                 std::abs(audit.meanFreq - audit.meanFreqExpected) <= relTol +
                     relTol * std::abs(audit.meanFreqExpected) &&
                 audit.productRelSpread <= relTol;
    return audit;
}

SampledFunction cube_mother(const GridSpec& grid)
{
    PointFn fn = [d = grid.dim()](const Point& x) -> cplx {
        double v = 1.0;
        for (int m = 0; m < d; ++m) {
            const double u = x[static_cast<std::size_t>(m)];
            if (std::abs(u) >= 1.0) return 0.0;
            v *= std::exp(-1.0 / (1.0 - u * u));
        }
        return v;
    };
    SampledFunction f = SampledFunction::fromFunction(grid, Domain::Time, fn);
    const double n = f.norm();
    PointFn scaled = [fn, n](const Point& x) { return fn(x) / n; };
    return SampledFunction::fromFunction(grid, Domain::Time, scaled);
}

std::pair<OrthonormalSystem, HomogeneousFamilyAudit>
homogeneous_family(const std::array<double, 2>& alpha, const SampledFunction& mother, int jMax,
                   const GridSpec& grid)
{
    if (grid.dim() != 2) throw Error("homogeneous_family requires d >= 2");
    if (!(alpha[0] > 0.0) || !(alpha[1] > 0.0)) throw Error("weights must be positive");
    if (!mother.source()) throw Error("homogeneous_family needs an analytic mother");
    if (grid.boxHi(0) < std::exp2(static_cast<double>(jMax) + 2.0))
        throw TruncationError("grid box too small for the requested jMax");

    const PointFn src = *mother.source();
    const double ratio = alpha[0] / alpha[1];

    std::vector<SampledFunction> members;
    HomogeneousFamilyAudit audit;
    audit.timeBound = std::exp2(2.0 * alpha[0]);
    const WeightSpec w{SeparablePowerWeight{alpha}};

    for (int j = 0; j <= jMax; ++j) {
        const double pref = std::exp2(0.5 * j * (ratio - 1.0));
        const double inv1 = std::exp2(static_cast<double>(-j));
        const double dil2 = std::exp2(static_cast<double>(j) * ratio);
        SampledFunction f = SampledFunction::fromFunction(
            grid, Domain::Time, [src, pref, inv1, dil2](const Point& x) {
                return pref * src(Point{inv1 * x[0] - 3.0, dil2 * x[1]});
            });
        f.normalize();
        audit.timeWeighted.push_back(std::pow(weighted_l2(f, w), 2.0));
        audit.freqWeighted.push_back(std::pow(weighted_l2(fourier_transform(f), w), 2.0));
        members.push_back(std::move(f));
    }

    double spread = 0.0;
    for (double v : audit.freqWeighted)
        spread = std::max(spread, std::abs(v / audit.freqWeighted.front() - 1.0));
    audit.freqSpread = spread;
    audit.pass = spread <= 0.02;
    for (double v : audit.timeWeighted)
        if (v > audit.timeBound + 1e-6) audit.pass = false;

    return {OrthonormalSystem(std::move(members), 1e-8), std::move(audit)};
}

} // namespace uloc
