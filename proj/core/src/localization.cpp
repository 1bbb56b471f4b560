#include "uloc/localization.hpp"

#include <cmath>
#include <numbers>

namespace uloc {

namespace {

constexpr double pi = std::numbers::pi;
constexpr std::size_t kDenseBudget = 4096;

double ball_volume(int d, double r)
{
    if (d == 1) return 2.0 * r;
    return pi * r * r;
}

/// Gamma(d/2 + 1)^2 without tgamma roundoff for the dimensions we support.
double gamma_half_sq(int d)
{
    if (d == 1) return pi / 4.0;  // Gamma(3/2)^2 = pi/4
    if (d == 2) return 1.0;       // Gamma(2)^2 = 1
    const double g = std::tgamma(d / 2.0 + 1.0);
    return g * g;
}

} // namespace

MeasurableSet MeasurableSet::box(const Point& lo, const Point& hi)
{
    return MeasurableSet(BoxShape{lo, hi});
}

MeasurableSet MeasurableSet::ball(const Point& center, double radius)
{
    if (radius < 0.0) throw Error("ball radius must be nonnegative");
    return MeasurableSet(BallShape{center, radius});
}

MeasurableSet MeasurableSet::mask(std::vector<std::uint8_t> cells)
{
    return MeasurableSet(MaskShape{std::move(cells)});
}

MeasurableSet MeasurableSet::empty()
{
    return MeasurableSet(BoxShape{{0.0, 0.0}, {0.0, 0.0}});
}

std::vector<std::uint8_t> MeasurableSet::buildMask(const GridSpec& grid) const
{
    std::vector<std::uint8_t> mask(grid.size(), 0);
    if (const auto* mk = std::get_if<MaskShape>(&shape_)) {
        if (mk->cells.size() != grid.size())
            throw GridMismatchError("mask shape size does not match grid");
        return mk->cells;
    }
    if (const auto* bx = std::get_if<BoxShape>(&shape_)) {
        // half-open membership [lo, hi): exact cell count for grid-aligned boxes
        for (std::size_t i = 0; i < mask.size(); ++i) {
            const Point x = grid.point(i);
            bool in = true;
            for (int m = 0; m < grid.dim(); ++m) {
                const std::size_t mm = static_cast<std::size_t>(m);
                if (x[mm] < bx->lo[mm] || x[mm] >= bx->hi[mm]) in = false;
            }
            mask[i] = in ? 1 : 0;
        }
        return mask;
    }
    const auto& bl = std::get<BallShape>(shape_);
    for (std::size_t i = 0; i < mask.size(); ++i) {
        const Point x = grid.point(i);
        double r2 = 0.0;
        for (int m = 0; m < grid.dim(); ++m) {
            const std::size_t mm = static_cast<std::size_t>(m);
            const double dm = x[mm] - bl.center[mm];
            r2 += dm * dm;
        }
        mask[i] = (r2 <= bl.radius * bl.radius) ? 1 : 0;
    }
    return mask;
}

double MeasurableSet::exactMeasure(int dim, const GridSpec* grid) const
{
    if (const auto* bx = std::get_if<BoxShape>(&shape_)) {
        double v = 1.0;
        for (int m = 0; m < dim; ++m) {
            const std::size_t mm = static_cast<std::size_t>(m);
            v *= std::max(0.0, bx->hi[mm] - bx->lo[mm]);
        }
        return v;
    }
    if (const auto* bl = std::get_if<BallShape>(&shape_)) return ball_volume(dim, bl->radius);
    if (!grid) throw Error("mask measure requires a grid");
    return maskMeasure(*grid);
}

double MeasurableSet::maskMeasure(const GridSpec& grid) const
{
    const auto mask = buildMask(grid);
    std::size_t count = 0;
    for (std::uint8_t c : mask) count += c;
    return static_cast<double>(count) * grid.cellVolume();
}

bool MeasurableSet::isEmpty() const
{
    if (const auto* bx = std::get_if<BoxShape>(&shape_)) {
        for (std::size_t m = 0; m < 2; ++m)
            if (bx->hi[m] <= bx->lo[m]) return true;
        return false;
    }
    if (const auto* bl = std::get_if<BallShape>(&shape_)) return bl->radius <= 0.0;
    const auto& mk = std::get<MaskShape>(shape_);
    for (std::uint8_t c : mk.cells)
        if (c) return false;
    return true;
}

SampledFunction project_time(const SampledFunction& f, const MeasurableSet& T)
{
    if (f.domain() != Domain::Time)
        throw DomainTagError("project_time expects a time-domain function");
    const auto mask = T.buildMask(f.grid());
    std::vector<cplx> v(f.samples().begin(), f.samples().end());
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!mask[i]) v[i] = 0.0;
    return SampledFunction(f.grid(), Domain::Time, std::move(v));
}

SampledFunction project_freq(const SampledFunction& f, const MeasurableSet& W)
{
    if (f.domain() != Domain::Time)
        throw DomainTagError("project_freq expects a time-domain function");
    SampledFunction F = fourier_transform(f);
    const auto mask = W.buildMask(F.grid());
    auto v = F.mutableSamples();
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!mask[i]) v[i] = 0.0;
    return inverse_fourier_transform(F, f.grid());
}

void materialize_Q(LocalizationSetup& setup)
{
    const std::size_t n = setup.grid.size();
    if (n > kDenseBudget)
        throw BudgetError("dense Q budget is " + std::to_string(kDenseBudget) + " samples");
    const auto maskT = setup.T.buildMask(setup.grid);
    const auto maskW = setup.W.buildMask(setup.grid.dual());

    Eigen::MatrixXcd Q(n, n);
    std::vector<cplx> unit(n);
    // Column j = P_T P_W P_T delta_j, via the per-column transform pipeline.
    // Deterministic parallel fill over columns.
    parallel_for(n, [&](std::size_t j) {
        if (!maskT[j]) {
            for (std::size_t i = 0; i < n; ++i) Q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 0.0;
            return;
        }
        std::vector<cplx> col(n, cplx{0.0, 0.0});
        col[j] = 1.0;
        SampledFunction delta(setup.grid, Domain::Time, std::move(col));
        SampledFunction F = fourier_transform(delta);
        auto fv = F.mutableSamples();
        for (std::size_t i = 0; i < n; ++i)
            if (!maskW[i]) fv[i] = 0.0;
        SampledFunction back = inverse_fourier_transform(F, setup.grid);
        for (std::size_t i = 0; i < n; ++i)
            Q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = maskT[i] ? back[i] : cplx{0.0, 0.0};
    });
    setup.Q = std::move(Q);
}

double trace_Q(const LocalizationSetup& setup)
{
    if (setup.Q) {
        cplx tr = 0.0;
        for (Eigen::Index i = 0; i < setup.Q->rows(); ++i) tr += (*setup.Q)(i, i);
        return tr.real();
    }
    // diagonal formula: each kept time cell contributes the discrete W measure
    return setup.T.maskMeasure(setup.grid) * setup.W.maskMeasure(setup.grid.dual());
}

double hs_norm_PWPT(const LocalizationSetup& setup)
{
    const std::size_t n = setup.grid.size();
    if (n > kDenseBudget)
        throw BudgetError("dense HS budget is " + std::to_string(kDenseBudget) + " samples");
    const auto maskT = setup.T.buildMask(setup.grid);
    const auto maskW = setup.W.buildMask(setup.grid.dual());
    // ||P_W P_T||_HS^2 = sum_{j in T} || masked transform of unit delta_j ||^2
    // in the weighted sample basis; by unitarity the frequency mass is read
    // directly from the masked spectrum.
    std::vector<double> colNorm(n, 0.0);
    parallel_for(n, [&](std::size_t j) {
        if (!maskT[j]) return;
        std::vector<cplx> col(n, cplx{0.0, 0.0});
        col[j] = 1.0;
        SampledFunction delta(setup.grid, Domain::Time, std::move(col));
        SampledFunction F = fourier_transform(delta);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (maskW[i]) acc += std::norm(F[i]);
        colNorm[j] = acc * F.grid().cellVolume();
    });
    // HS^2 = sum_j ||A e_j||^2 over the orthonormal sample basis e_j = delta_j / sqrt(vol)
    const double hs2 = pairwise_sum(std::span<const double>(colNorm)) / setup.grid.cellVolume();
    return std::sqrt(std::max(hs2, 0.0));
}

double rayleigh_Q(const SampledFunction& f, const MeasurableSet& T, const MeasurableSet& W)
{
    SampledFunction pt = project_time(f, T);
    SampledFunction F = fourier_transform(pt);
    const auto maskW = W.buildMask(F.grid());
    const double vol = F.grid().cellVolume();
    return vol * pairwise_sum(F.size(), [&](std::size_t i) {
               return maskW[i] ? std::norm(F[i]) : 0.0;
           });
}

ConcentrationAudit localization_audit(const OrthonormalSystem& system, const MeasurableSet& T,
                                      const MeasurableSet& W)
{
    if (system.gramAudit().residual() > 1e-6)
        throw NotOrthonormalError("localization_audit requires an orthonormal system");
    const GridSpec& grid = system.grid();
    const auto maskT = T.buildMask(grid);
    const auto maskW = W.buildMask(grid.dual());

    ConcentrationAudit audit;
    audit.perMember.resize(system.size());
    parallel_for(system.size(), [&](std::size_t i) {
        const SampledFunction& phi = system.member(i);
        const double concT = concentration_on_set(phi, maskT);
        const SampledFunction phiHat = fourier_transform(phi);
        const double vol = phiHat.grid().cellVolume();
        const double concW = vol * pairwise_sum(phiHat.size(), [&](std::size_t k) {
                                 return maskW[k] ? std::norm(phiHat[k]) : 0.0;
                             });
        ConcentrationAudit::PerMember pm;
        pm.a = std::sqrt(std::max(0.0, 1.0 - concT));
        pm.b = std::sqrt(std::max(0.0, 1.0 - concW));
        pm.rayleigh = rayleigh_Q(phi, T, W);
        audit.perMember[i] = pm;
    });

    for (const auto& pm : audit.perMember) {
        audit.lhsSum += 1.0 - 1.5 * pm.a - 1.5 * pm.b;
        audit.lhsTimeHeavy += 1.0 - 2.0 * pm.a - pm.b;
        audit.lhsFreqHeavy += 1.0 - pm.a - 2.0 * pm.b;
        audit.rayleighSum += pm.rayleigh;
    }
    audit.bound = T.exactMeasure(grid.dim(), &grid);
    {
        const GridSpec dualGrid = grid.dual();
        audit.bound *= W.exactMeasure(grid.dim(), &dualGrid);
    }
    audit.traceDiscrete = T.maskMeasure(grid) * W.maskMeasure(grid.dual());
    audit.pass = audit.lhsSum <= audit.bound + 1e-8 &&
                 audit.rayleighSum <= audit.traceDiscrete + 1e-6;
    return audit;
}

double concentration_count_bound(double r0, double rho0, double eps, int d)
{
    if (!(eps > 0.0) || !(eps < 1.0 / 3.0))
        throw Error("concentration_count_bound requires eps in (0, 1/3)");
    if (r0 < 0.0 || rho0 < 0.0) throw Error("radii must be nonnegative");
    return std::pow(pi, d) * std::pow(r0, d) * std::pow(rho0, d) /
           ((1.0 - 3.0 * eps) * gamma_half_sq(d));
}

double umbrella_bound(const SampledFunction& phi, const SampledFunction& psi, double eps)
{
    if (!(eps > 0.0) || !(eps < 1.0 / 3.0))
        throw Error("umbrella_bound requires eps in (0, 1/3)");
    const double kPhi = k_epsilon(phi, eps).measure;
    const double kPsi = k_epsilon(psi, eps).measure;
    return kPhi * kPsi / (1.0 - 3.0 * eps);
}

double jk_count_bound(double J, double K, double p, int d)
{
    if (!(J > 0.0) || !(K > 0.0)) throw Error("jk_count_bound requires positive J, K");
    if (!(p > 0.0)) throw Error("jk_count_bound requires p > 0");
    // Chebyshev: mass of |phi|^2 outside radius R is at most (tau_p / R)^p, so
    // eps-concentration holds at R = tau_p eps^{-2/p}; compose at eps = 1/4.
    const double eps = 0.25;
    const double r0 = J * std::pow(eps, -2.0 / p);
    const double rho0 = K * std::pow(eps, -2.0 / p);
    return concentration_count_bound(r0, rho0, eps, d);
}

namespace {

double band_kernel(int d, double c, double dist)
{
    if (d == 1) {
        if (dist == 0.0) return 2.0 * c;
        return std::sin(2.0 * pi * c * dist) / (pi * dist);
    }
    if (dist == 0.0) return pi * c * c;
    return c * std::cyl_bessel_j(1, 2.0 * pi * c * dist) / dist;
}

} // namespace

AnnihilatorResult annihilating_function(double b, double c, const GridSpec& grid)
{
    if (b < 0.0 || !(c > 0.0)) throw Error("annihilating_function requires b >= 0, c > 0");
    const int d = grid.dim();
    for (int m = 0; m < d; ++m) {
        if (grid.boxLo(m) > -b || grid.boxHi(m) < b)
            throw InfeasibleGeometryError("spatial ball does not fit inside the grid box");
    }

    // free cells: strictly outside the closed spatial ball
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Point x = grid.point(i);
        double r2 = 0.0;
        for (int m = 0; m < d; ++m) r2 += x[static_cast<std::size_t>(m)] * x[static_cast<std::size_t>(m)];
        if (r2 > b * b) free.push_back(i);
    }
    if (free.empty()) throw InfeasibleGeometryError("spatial ball covers the whole grid");
    const std::size_t nf = free.size();
    if (nf > 8192) throw BudgetError("annihilating_function: free-cell budget exceeded");

    // Band-energy quadratic form on the free cells, under the L2 grid norm:
    //   q(f) = vol^2 sum_{jl} f_j conj(f_l) K(x_j - x_l),   ||f||^2 = vol sum |f_j|^2,
    // so the generalized problem reduces to B = vol * K symmetric.
    const double vol = grid.cellVolume();
    Eigen::MatrixXd B(nf, nf);
    parallel_for(nf, [&](std::size_t jj) {
        const Point xj = grid.point(free[jj]);
        for (std::size_t ll = jj; ll < nf; ++ll) {
            const Point xl = grid.point(free[ll]);
            double dist = (d == 1) ? std::abs(xj[0] - xl[0]) : std::hypot(xj[0] - xl[0], xj[1] - xl[1]);
            const double v = vol * band_kernel(d, c, dist);
            B(static_cast<Eigen::Index>(jj), static_cast<Eigen::Index>(ll)) = v;
            B(static_cast<Eigen::Index>(ll), static_cast<Eigen::Index>(jj)) = v;
        }
    });

    Eigen::VectorXd vec(nf);
    double lambda = 0.0;
    if (nf <= 1024) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
        lambda = es.eigenvalues()(0);
        vec = es.eigenvectors().col(0);
    } else {
        // inverse iteration with a tiny shift against the singular bottom
        const double shift = 1e-13 * B.norm();
        Eigen::LDLT<Eigen::MatrixXd> ldlt(B + shift * Eigen::MatrixXd::Identity(nf, nf));
        vec.setOnes();
        vec.normalize();
        for (int it = 0; it < 30; ++it) {
            Eigen::VectorXd next = ldlt.solve(vec);
            next.normalize();
            const double delta = (next - vec).norm();
            vec = next;
            if (delta < 1e-13) break;
        }
        lambda = vec.dot(B * vec);
    }

    std::vector<cplx> out(grid.size(), cplx{0.0, 0.0});
    for (std::size_t jj = 0; jj < nf; ++jj) out[free[jj]] = vec(static_cast<Eigen::Index>(jj));
    SampledFunction f(grid, Domain::Time, std::move(out));
    f.normalize();

    AnnihilatorResult res{std::move(f), std::sqrt(std::max(lambda, 0.0))};
    return res;
}

} // namespace uloc
