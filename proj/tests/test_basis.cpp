#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "test_util.hpp"
#include "uloc/bump.hpp"
#include "uloc/functionals.hpp"

using namespace uloc;
using namespace testutil;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("bump: unit norm, support shell, half-integer autocorrelations")
{
    const GridSpec g = GridSpec::line(2048, -16.0, 16.0);
    SampledFunction psi = build_bump({}, g);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-8);

    double outside = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double x = g.coord(0, i);
        if (x <= shell_lo(0) || x >= shell_hi(0)) outside += std::norm(psi[i]);
    }
    CHECK(outside * g.cellVolume() <= 1e-10);

    // <Psi, e^{2 pi i b x} Psi> = 0 for half-integer b != 0
    for (int twice = 1; twice <= 8; ++twice) {
        const double b = 0.5 * twice;
        const cplx corr = inner_product(psi, modulate(psi, {b, 0.0}));
        CHECK(std::abs(corr) < 1e-6);
    }
}

TEST_CASE("bump: resolution guard on coarse grids")
{
    const GridSpec coarse = GridSpec::line(16, -16.0, 16.0);
    CHECK_THROWS_AS((void)build_bump({}, coarse), ResolutionError);
}

TEST_CASE("block family: counts, exact orthonormality, moment scaling laws")
{
    const GridSpec g = GridSpec::line(4096, -64.0, 64.0);
    SampledFunction base = build_bump({}, g);
    const double tauBase = tau_p(base, 2.0);
    const double tauHatBase = tau_p(fourier_transform(base), 2.0);

    for (int s = 1; s <= 3; ++s) {
        OrthonormalSystem fam = psi_family({}, s, g);
        CHECK(fam.size() == block_size(s, 1));
        CHECK(fam.size() == static_cast<std::size_t>((2 << s) + 1));
        CHECK(fam.gramAudit().maxOffDiagonal < 1e-10);

        // tau_p(Psi_{j,s}) = 2^s tau_p(Psi)
        const double ratio = tau_p(fam.member(0), 2.0) / tauBase;
        CHECK(std::abs(ratio - std::exp2(s)) / std::exp2(s) < 1e-6);

        // tau_p(Psi_{j,s}^, 2^{-s} j) = 2^{-s} tau_p(Psi^)
        const auto lattice = block_lattice(s, 1);
        const std::size_t mid = lattice.size() / 2 + 1;
        const Point shift{std::exp2(-s) * lattice[mid][0], 0.0};
        const double fr = tau_p_shifted(fourier_transform(fam.member(mid)), 2.0, shift);
        CHECK(std::abs(fr / tauHatBase - std::exp2(-s)) * std::exp2(s) < 1e-6);
    }

    // the same frequency-side constant across scales
    std::vector<double> c2;
    for (int s = 1; s <= 3; ++s) {
        OrthonormalSystem fam = psi_family({}, s, g);
        const auto lattice = block_lattice(s, 1);
        const std::size_t mid = lattice.size() / 2;
        const Point shift{std::exp2(-s) * lattice[mid][0], 0.0};
        c2.push_back(tau_p_shifted(fourier_transform(fam.member(mid)), 2.0, shift) * std::exp2(s));
    }
    for (double v : c2) CHECK(std::abs(v / c2.front() - 1.0) < 1e-4);
}

TEST_CASE("block family: shell overflow throws")
{
    const GridSpec g = GridSpec::line(1024, -16.0, 16.0);
    CHECK_THROWS_AS((void)psi_family({}, 2, g), TruncationError); // shell (16,32)
}

TEST_CASE("derivative bound: single member, scaling trend, zero coefficients")
{
    const GridSpec g = GridSpec::line(4096, -64.0, 64.0);

    std::vector<cplx> e1{cplx(1.0, 0.0)};
    const auto single = derivative_bound_check({}, e1, 1, 1, 0, g);
    CHECK(single.ratio > 0.0);
    CHECK(std::isfinite(single.ratio));

    Rng rng(99);
    double prev = 1e300;
    for (int s = 1; s <= 3; ++s) {
        double worst = 0.0;
        for (int rep = 0; rep < 5; ++rep) {
            const auto lattice = block_lattice(s, 1);
            std::vector<cplx> coeffs(lattice.size());
            double nrm = 0.0;
            for (auto& c : coeffs) {
                c = cplx(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
                nrm += std::norm(c);
            }
            for (auto& c : coeffs) c /= std::sqrt(nrm);
            worst = std::max(worst, derivative_bound_check({}, coeffs, s, 1, 0, g).ratio);
        }
        CHECK(worst < 100.0); // uniformly bounded
        CHECK(worst <= prev); // the 2^{-2sq} factor makes it non-increasing
        prev = worst;
    }

    std::vector<cplx> zeros(5, cplx{0.0, 0.0});
    CHECK(derivative_bound_check({}, zeros, 1, 1, 0, g).lhs == 0.0);
}

TEST_CASE("dyadic dilates: orthonormal, zero means, constant product")
{
    const GridSpec g = GridSpec::line(8192, -8.0, 8.0);
    SampledFunction mother = dyadic_mother(g);
    OrthonormalSystem sys = dyadic_example(mother, -2, 2);
    CHECK(sys.size() == 5);
    CHECK(sys.gramAudit().maxOffDiagonal < 1e-10);

    double base = 0.0;
    for (std::size_t n = 0; n < sys.size(); ++n) {
        const SampledFunction& m = sys.member(n);
        const SampledFunction mh = fourier_transform(m);
        CHECK(std::abs(mean_vector(m)[0]) < 1e-8);
        CHECK(std::abs(mean_vector(mh)[0]) < 1e-8);
        const double prod = dispersion(m) * dispersion(mh);
        if (n == 0)
            base = prod;
        else
            CHECK(std::abs(prod / base - 1.0) < 1e-6);
    }

    CHECK_THROWS_AS((void)dyadic_example(mother, -4, 0), TruncationError);
}

TEST_CASE("wavelet covariance laws")
{
    const GridSpec g = GridSpec::line(8192, -16.0, 16.0);
    PointFn fn = [](const Point& x) -> cplx {
        const double u = (x[0] - 0.37) / 1.3;
        if (std::abs(u) >= 1.0) return 0.0;
        return std::exp(-1.0 / (1.0 - u * u)) * (1.0 + 0.4 * u);
    };
    SampledFunction psi = SampledFunction::fromFunction(g, Domain::Time, fn);
    psi.normalize();

    const auto identity = covariance_laws_check(psi, 0, 0);
    CHECK(identity.pass);
    CHECK(identity.productRelSpread < 1e-12);

    CHECK(covariance_laws_check(psi, 1, 3).pass);
    CHECK(covariance_laws_check(psi, -1, 2).pass);
    // strongly compressed dilate: product constancy limited by quadrature
    CHECK(covariance_laws_check(psi, 2, -5, 1e-6).pass);
}

TEST_CASE("homogeneous-weight family: disjoint supports and bounded weights")
{
    const GridSpec g = GridSpec::plane(2048, -32.0, 224.0, 2048, -8.0, 8.0);
    SampledFunction mother = cube_mother(g);
    auto [sys, audit] = homogeneous_family({1.0, 1.0}, mother, 4, g);
    CHECK(sys.size() == 5);
    CHECK(sys.gramAudit().maxOffDiagonal < 1e-10);
    CHECK(audit.pass);
    CHECK(audit.freqSpread <= 0.02);
    for (std::size_t j = 0; j < audit.timeWeighted.size(); ++j)
        CHECK(audit.timeWeighted[j] <= 4.0 + 1e-6);

    // supports inside E_j
    for (std::size_t j = 0; j < sys.size(); ++j) {
        const SampledFunction& m = sys.member(j);
        const double lo = std::exp2(static_cast<double>(j) + 1.0);
        const double hi = std::exp2(static_cast<double>(j) + 2.0);
        const double w2 = std::exp2(-static_cast<double>(j));
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (std::abs(m[i]) == 0.0) continue;
            const Point x = g.point(i);
            CHECK(x[0] >= lo);
            CHECK(x[0] <= hi);
            CHECK(std::abs(x[1]) <= w2);
        }
    }

    CHECK_THROWS_AS((void)homogeneous_family({1.0, 1.0}, mother, 8, g), TruncationError);
}
