// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Tolerances are fixed here, not tunable from outside.
#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "uloc/completion.hpp"
#include "uloc/fourier.hpp"
#include "uloc/functionals.hpp"
#include "uloc/hermite.hpp"
#include "uloc/localization.hpp"

using namespace uloc;

namespace {

constexpr double kPi = std::numbers::pi;
using clock_t_ = std::chrono::steady_clock;

double seconds_since(clock_t_::time_point t0)
{
    return std::chrono::duration<double>(clock_t_::now() - t0).count();
}

int g_failures = 0;

void criterion(int number, const std::string& label, bool pass, const std::string& detail)
{
    std::printf("criterion %2d [%s] %s -- %s\n", number, pass ? "PASS" : "FAIL", label.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::vector<SampledFunction> hermite_members(int count, const GridSpec& grid)
{
    std::vector<SampledFunction> out;
    for (int k = 0; k < count; ++k) {
        SampledFunction h = hermite_function(k, grid);
        h.normalize();
        out.push_back(std::move(h));
    }
    return out;
}

SampledFunction bump_probe(const GridSpec& g, const Point& c, double w)
{
    const int d = g.dim();
    PointFn fn = [c, w, d](const Point& x) -> cplx {
        double v = 1.0;
        for (int m = 0; m < d; ++m) {
            const std::size_t mm = static_cast<std::size_t>(m);
            const double u = (x[mm] - c[mm]) / w;
            if (std::abs(u) >= 1.0) return 0.0;
            v *= std::exp(-1.0 / (1.0 - u * u));
        }
        return v;
    };
    SampledFunction f = SampledFunction::fromFunction(g, Domain::Time, fn);
    f.normalize();
    return f;
}

double uniform_bits(std::mt19937_64& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

} // namespace

int main()
{
    // ---- criterion 1: hermite dispersion table --------------------------------
    {
        const auto t0 = clock_t_::now();
        const GridSpec g = GridSpec::line(2048, -16.0, 16.0);
        double worst = 0.0;
        for (int k = 0; k <= 20; ++k) {
            SampledFunction hk = hermite_function(k, g);
            hk.normalize();
            const double ana = std::sqrt((2.0 * k + 1.0) / (4.0 * kPi));
            worst = std::max(worst, std::abs(dispersion(hk) - ana) / ana);
        }
        const double dt = seconds_since(t0);
        criterion(1, "hermite dispersion table", worst <= 1e-6 && dt < 5.0,
                  "worst rel err " + std::to_string(worst) + ", " + std::to_string(dt) + " s");
    }

    // ---- criterion 2: transform eigenproperty ---------------------------------
    {
        const GridSpec g = GridSpec::line(2048, -16.0, 16.0);
        double worst = 0.0;
        for (int k = 0; k <= 8; ++k) {
            SampledFunction hk = hermite_function(k, g);
            hk.normalize();
            SampledFunction H = fourier_transform(hk);
            const cplx phase = std::pow(cplx(0.0, -1.0), k);
            std::vector<double> pts(H.size());
            for (std::size_t i = 0; i < H.size(); ++i) pts[i] = H.grid().coord(0, i);
            const auto table = hermite_table(k, pts);
            double err = 0.0;
            for (std::size_t i = 0; i < H.size(); ++i)
                err += std::norm(H[i] - phase * table[static_cast<std::size_t>(k)][i]);
            worst = std::max(worst, std::sqrt(err * H.grid().cellVolume()));
        }
        criterion(2, "transform eigenproperty i^{-k}", worst <= 1e-6,
                  "worst L2 err " + std::to_string(worst));
    }

    // ---- criterion 3: sharp moment sums ----------------------------------------
    {
        double worstEq = 0.0;
        for (int n = 0; n <= 8; ++n) {
            const auto s = mean_dispersion_sum(n);
            worstEq = std::max(worstEq, std::abs(s.numeric - s.analytic) / s.analytic);
        }
        // 20 seeded rotations of the four lowest members
        const GridSpec g = GridSpec::line(2048, -16.0, 16.0);
        const auto fam = hermite_members(4, g);
        std::mt19937_64 eng(20250808);
        double worstGap = 0.0;
        const double target = 16.0 / (2.0 * kPi);
        for (int rep = 0; rep < 20; ++rep) {
            double m[4][4];
            for (auto& row : m)
                for (double& v : row) {
                    const double u1 = std::max(uniform_bits(eng), 1e-300);
                    v = std::sqrt(-2.0 * std::log(u1)) *
                        std::cos(2.0 * kPi * uniform_bits(eng));
                }
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < i; ++j) {
                    double dot = 0.0;
                    for (int c = 0; c < 4; ++c) dot += m[i][c] * m[j][c];
                    for (int c = 0; c < 4; ++c) m[i][c] -= dot * m[j][c];
                }
                double nrm = 0.0;
                for (int c = 0; c < 4; ++c) nrm += m[i][c] * m[i][c];
                nrm = std::sqrt(nrm);
                for (int c = 0; c < 4; ++c) m[i][c] /= nrm;
            }
            double total = 0.0;
            for (int i = 0; i < 4; ++i) {
                std::vector<cplx> v(g.size(), cplx{0.0, 0.0});
                for (int j = 0; j < 4; ++j)
                    for (std::size_t idx = 0; idx < v.size(); ++idx) v[idx] += m[i][j] * fam[j][idx];
                SampledFunction e(g, Domain::Time, std::move(v));
                e.normalize();
                const SampledFunction ehat = fourier_transform(e);
                const Point mu = mean_vector(e), muh = mean_vector(ehat);
                const double dt = dispersion(e), df = dispersion(ehat);
                total += mu[0] * mu[0] + dt * dt + muh[0] * muh[0] + df * df;
            }
            worstGap = std::min(worstGap, total - target);
        }
        criterion(3, "sharp moment-sum equality and rotations",
                  worstEq <= 1e-6 && worstGap >= -1e-6,
                  "equality rel err " + std::to_string(worstEq) + ", rotation slack " +
                      std::to_string(worstGap));
    }

    // ---- criterion 4: trace identity with refinement --------------------------
    {
        // time boxes are grid-aligned at the bottom with a sub-cell overhang at
        // the top; frequency boxes sit half-cell off the lattice so that their
        // discrete measure is exact and the refinement halves only the time error
        const double delta = 1.0 / 256.0;
        const double half = 1.0 / 64.0;
        struct Pair {
            double a, L, c, M;
        };
        std::vector<Pair> pairs = {{-6.0, 5.0, -2.0, 4.0},  {-5.0, 6.0, -3.0, 5.0},
                                   {-4.0, 7.0, -1.0, 6.0},  {-3.0, 5.0, -2.5, 4.0},
                                   {-2.0, 6.0, -1.5, 5.0},  {0.5, 7.0, -3.5, 6.0},
                                   {-1.5, 5.0, 0.5, 4.0},   {-7.0, 6.0, 1.5, 5.0},
                                   {1.0, 5.0, -0.5, 6.0},   {-0.25, 6.0, -4.0, 4.0}};
        bool pass = true;
        double worstRel = 0.0, worstRatio = 0.0;
        for (const Pair& p : pairs) {
            const MeasurableSet T = MeasurableSet::box({p.a, 0}, {p.a + p.L + delta, 0});
            const MeasurableSet W = MeasurableSet::box({p.c + half, 0}, {p.c + half + p.M, 0});
            const double want = (p.L + delta) * p.M;
            LocalizationSetup coarse(GridSpec::line(1024, -16.0, 16.0), T, W);
            LocalizationSetup fine(GridSpec::line(2048, -16.0, 16.0), T, W);
            const double e1 = std::abs(trace_Q(coarse) - want);
            const double e2 = std::abs(trace_Q(fine) - want);
            worstRel = std::max(worstRel, e1 / want);
            worstRatio = std::max(worstRatio, e2 / e1);
            pass = pass && e1 <= 0.01 * want && e2 / e1 <= 0.6;
        }
        criterion(4, "trace identity, first-order refinement", pass,
                  "worst rel err " + std::to_string(worstRel) + ", worst ratio " +
                      std::to_string(worstRatio));
    }

    // ---- shared constructions for criteria 5, 6, 9, 10, 11 --------------------
    std::printf("building construction suites...\n");
    std::fflush(stdout);

    const GridSpec gI1 = GridSpec::line(4096, -64.0, 64.0);
    std::vector<SampledFunction> probesI1{bump_probe(gI1, {0.0, 0.0}, 2.0),
                                          bump_probe(gI1, {1.0, 0.0}, 2.5),
                                          bump_probe(gI1, {-0.7, 0.0}, 1.8)};
    CompletionOptions optI1;
    optI1.p = 0.5;
    optI1.d = 1;
    optI1.memberBudget = 64;
    auto caseId1 = complete_basis_caseI(probesI1, optI1, gI1);

    const GridSpec gII1 = GridSpec::line(16384, -16.0, 496.0);
    std::vector<SampledFunction> probesII1{bump_probe(gII1, {0.0, 0.0}, 3.0),
                                           bump_probe(gII1, {0.5, 0.0}, 2.0)};
    CompletionOptions optII1;
    optII1.p = 1.0;
    optII1.d = 1;
    optII1.memberBudget = 400;
    optII1.maxInnerSteps = 2;
    auto caseIId1 = complete_basis_caseII(probesII1, optII1, gII1);

    const GridSpec gI2 = GridSpec::square(256, -32.0, 32.0);
    std::vector<SampledFunction> probesI2{bump_probe(gI2, {0.0, 0.0}, 2.5),
                                          bump_probe(gI2, {0.5, -0.5}, 2.0)};
    CompletionOptions optI2;
    optI2.p = 1.0;
    optI2.d = 2;
    optI2.memberBudget = 120;
    auto caseId2 = complete_basis_caseI(probesI2, optI2, gI2);

    std::vector<SampledFunction> probesE2{bump_probe(gI2, {0.0, 0.0}, 0.9),
                                          bump_probe(gI2, {1.8, 1.8}, 0.8)};
    CompletionOptions optE2;
    optE2.d = 2;
    optE2.memberBudget = 120;
    optE2.maxInnerSteps = 1;
    auto evenD2 = build_even_family(probesE2, optE2, gI2);

    // ---- criteria 5 + 6: localization audit matrix -----------------------------
    {
        const auto t0 = clock_t_::now();
        struct Entry {
            std::string name;
            const OrthonormalSystem* system;
        };
        const GridSpec gH = GridSpec::line(2048, -16.0, 16.0);
        OrthonormalSystem hermites(hermite_members(11, gH), 1e-7);

        const GridSpec gD = GridSpec::line(8192, -8.0, 8.0);
        OrthonormalSystem dyadic = dyadic_example(dyadic_mother(gD), -2, 2);

        std::vector<SampledFunction> psiUnion;
        for (int s = 1; s <= 3; ++s) {
            OrthonormalSystem fam = psi_family({}, s, gI1);
            for (const auto& m : fam.members()) psiUnion.push_back(m);
        }
        OrthonormalSystem psiSystem(std::move(psiUnion), 1e-7);

        std::vector<Entry> entries{{"hermite<=10", &hermites},
                                   {"dyadic", &dyadic},
                                   {"psi s<=3", &psiSystem},
                                   {"caseI d1", &caseId1.first},
                                   {"caseII d1", &caseIId1.first},
                                   {"caseI d2", &caseId2.first},
                                   {"even d2", &evenD2.first}};

        bool pass5 = true, pass6 = true;
        double worstGap5 = 1e300, worstGap6 = 1e300;
        std::string failDetail;
        for (const Entry& e : entries) {
            const int dim = e.system->grid().dim();
            for (double r : {0.5, 1.0, 2.0, 4.0, 8.0}) {
                for (int shape = 0; shape < 2; ++shape) {
                    MeasurableSet T = shape == 0
                                          ? MeasurableSet::box({-r, -r}, {r, r})
                                          : MeasurableSet::ball({0.0, 0.0}, r);
                    const auto audit = localization_audit(*e.system, T, T);
                    const double gap5 = audit.bound + 1e-6 - audit.lhsSum;
                    const double gap6 = audit.traceDiscrete + 1e-6 - audit.rayleighSum;
                    worstGap5 = std::min(worstGap5, gap5);
                    worstGap6 = std::min(worstGap6, gap6);
                    if (gap5 < 0.0 || gap6 < 0.0)
                        failDetail += e.name + " r=" + std::to_string(r) + "; ";
                    pass5 = pass5 && gap5 >= 0.0;
                    pass6 = pass6 && gap6 >= 0.0;
                }
            }
        }
        const double dt = seconds_since(t0);
        criterion(5, "localization inequality over the audit matrix", pass5 && dt < 120.0,
                  "min slack " + std::to_string(worstGap5) + ", " + std::to_string(dt) + " s " +
                      failDetail);
        criterion(6, "rayleigh sums majorized by the trace", pass6,
                  "min slack " + std::to_string(worstGap6));
    }

    // ---- criterion 7: counting-bound arithmetic --------------------------------
    {
        const double bound = concentration_count_bound(1.0, 1.0, 1.0 / 6.0, 1);
        bool pass = bound == 8.0;

        const GridSpec g = GridSpec::line(2048, -16.0, 16.0);
        const auto fam = hermite_members(10, g);
        const double eps = 1.0 / 6.0;
        double r0 = 0.0, rho0 = 0.0;
        for (const SampledFunction& f : fam) {
            auto radiusFor = [&](const SampledFunction& u) {
                // smallest grid radius with at least 1 - eps^2 of the mass
                std::vector<std::pair<double, double>> cells;
                for (std::size_t i = 0; i < u.size(); ++i)
                    cells.push_back({std::abs(u.grid().coord(0, i)), std::norm(u[i])});
                std::sort(cells.begin(), cells.end());
                double acc = 0.0;
                const double vol = u.grid().cellVolume();
                for (const auto& [rad, mass] : cells) {
                    acc += mass * vol;
                    if (acc >= 1.0 - eps * eps) return rad;
                }
                return cells.back().first;
            };
            r0 = std::max(r0, radiusFor(f));
            rho0 = std::max(rho0, radiusFor(fourier_transform(f)));
        }
        const double audited = concentration_count_bound(r0, rho0, eps, 1);
        pass = pass && 10.0 <= audited;
        criterion(7, "concentration count bound", pass,
                  "bound(1,1,1/6,1) = " + std::to_string(bound) + ", hermite audit " +
                      std::to_string(audited) + " >= 10");
    }

    // ---- criterion 8: modulated-dilate family ----------------------------------
    {
        SampledFunction base = build_bump({}, gI1);
        const double tauBase = tau_p(base, 2.0);
        double worstGram = 0.0, worstRatio = 0.0;
        for (int s = 1; s <= 3; ++s) {
            OrthonormalSystem fam = psi_family({}, s, gI1);
            worstGram = std::max(worstGram, fam.gramAudit().maxOffDiagonal);
            const double ratio = tau_p(fam.member(0), 2.0) / tauBase;
            worstRatio = std::max(worstRatio, std::abs(ratio - std::exp2(s)) / std::exp2(s));
        }
        double worstCorr = 0.0;
        for (int twice = 1; twice <= 8; ++twice)
            worstCorr = std::max(worstCorr,
                                 std::abs(inner_product(base, modulate(base, {0.5 * twice, 0.0}))));
        const bool pass = worstGram <= 1e-6 && worstRatio <= 1e-6 && worstCorr <= 1e-6;
        criterion(8, "block family: gram, scaling, autocorrelations", pass,
                  "gram " + std::to_string(worstGram) + ", ratio err " + std::to_string(worstRatio) +
                      ", autocorr " + std::to_string(worstCorr));
    }

    // ---- criterion 9: mixing recursion in two dimensions ------------------------
    {
        const CompletionReport& rep = caseId2.second;
        double worstIdent = 0.0, worstGammaMargin = 1e300, worstSigmaMargin = 1e300;
        for (const BlockAudit& b : rep.blocks) {
            worstIdent = std::max(worstIdent, b.identityResidual);
            worstGammaMargin = std::min(worstGammaMargin, b.gammaMargin);
            worstSigmaMargin = std::min(worstSigmaMargin, b.sigmaMargin);
        }
        const bool pass = worstIdent <= 1e-12 && worstGammaMargin >= 0.0 &&
                          worstSigmaMargin >= 0.0 && rep.gramMaxOffDiagonal <= 1e-8 &&
                          rep.blocks.size() == 2 && rep.productSpread <= 2.0;
        criterion(9, "two-block mixing recursion in d=2", pass,
                  "identities " + std::to_string(worstIdent) + ", gram " +
                      std::to_string(rep.gramMaxOffDiagonal) + ", product spread " +
                      std::to_string(rep.productSpread));
    }

    // ---- criterion 10: completeness certificates --------------------------------
    {
        bool pass = true;
        double worst = 1e300;
        for (const CompletionReport* rep :
             {&caseId1.second, &caseIId1.second, &caseId2.second, &evenD2.second}) {
            for (double proj : rep->probeProjection) {
                worst = std::min(worst, proj);
                pass = pass && proj >= 1.0 / 16.0 - 1e-6;
            }
        }
        criterion(10, "projection certificates >= 1/16", pass,
                  "min projection " + std::to_string(worst));
    }

    // ---- criterion 11: adaptive-route consistency --------------------------------
    {
        const CompletionReport& rep = caseIId1.second;
        bool growth = true;
        for (const BlockAudit& b : rep.blocks)
            growth = growth && b.sobolevAfter <= rep.sobolevStart + rep.bEmp + 1e-9;
        const bool pass = rep.doublePathMax <= 1e-10 && rep.thetaMin > 0.0 &&
                          rep.thetaMax < 0.5 && growth;
        criterion(11, "adaptive route: residual identity and growth law", pass,
                  "double-path " + std::to_string(rep.doublePathMax) + ", theta in [" +
                      std::to_string(rep.thetaMin) + ", " + std::to_string(rep.thetaMax) +
                      "], B_emp " + std::to_string(rep.bEmp));
    }

    // ---- criterion 12: homogeneous-weight family ---------------------------------
    {
        const GridSpec g = GridSpec::plane(2048, -32.0, 224.0, 2048, -8.0, 8.0);
        SampledFunction mother = cube_mother(g);
        auto [sys, audit] = homogeneous_family({1.0, 1.0}, mother, 4, g);
        bool pass = audit.freqSpread <= 0.02;
        double worstTime = 0.0;
        for (double v : audit.timeWeighted) {
            worstTime = std::max(worstTime, v);
            pass = pass && v <= 4.0 + 1e-6;
        }
        criterion(12, "homogeneous weights: bounded and constant", pass,
                  "max weighted " + std::to_string(worstTime) + " <= 4, freq spread " +
                      std::to_string(audit.freqSpread));
    }

    // ---- criterion 13: annihilating function -------------------------------------
    {
        const auto r256 = annihilating_function(1.0, 1.0, GridSpec::line(256, -8.0, 8.0));
        const auto r512 = annihilating_function(1.0, 1.0, GridSpec::line(512, -8.0, 8.0));
        const auto r1024 = annihilating_function(1.0, 1.0, GridSpec::line(1024, -8.0, 8.0));
        // the continuum value is zero; the chain is compared with an eigensolver
        // noise floor of 1e-9 since the residuals bottom out at machine precision
        const bool pass = r1024.residual <= 1e-3 && r512.residual <= r256.residual + 1e-9 &&
                          r1024.residual <= r512.residual + 1e-9;
        criterion(13, "doubly-vanishing function at desk scale", pass,
                  "residuals " + std::to_string(r256.residual) + " -> " +
                      std::to_string(r512.residual) + " -> " + std::to_string(r1024.residual));
    }

    // ---- criterion 14: moment-sum growth scans ------------------------------------
    {
        const auto a1 = tau_growth_audit(2.0, 1, 40);
        const auto a2 = tau_growth_audit(2.0, 2, 12);
        bool increasing = true;
        for (std::size_t i = 1; i < a1.inversePartialSums.size() && i < 12; ++i)
            increasing = increasing && a1.inversePartialSums[i] > a1.inversePartialSums[i - 1];
        for (std::size_t i = 1; i < a2.inversePartialSums.size(); ++i)
            increasing = increasing && a2.inversePartialSums[i] > a2.inversePartialSums[i - 1];
        const bool pass = std::abs(a1.fittedSlope - 2.0) <= 0.15 &&
                          std::abs(a2.fittedSlope - 1.5) <= 0.15 && increasing;
        criterion(14, "moment-sum growth exponents", pass,
                  "slopes " + std::to_string(a1.fittedSlope) + " (target 2), " +
                      std::to_string(a2.fittedSlope) + " (target 1.5)");
    }

    // ---- criterion 15: unbounded products on the extremal family -------------------
    {
        const GridSpec g = GridSpec::line(2048, -16.0, 16.0);
        OrthonormalSystem fam(hermite_members(41, g), 1e-7);
        const auto scan = dyadic_bin_scan(fam, 2.0);
        const double want = 81.0 / (4.0 * kPi);
        bool pass = std::abs(scan.supProduct - want) / want <= 1e-6;
        // sup of products grows linearly with the member count
        double slopeMin = 1e300;
        double prev = 0.0;
        for (std::size_t count : {10u, 20u, 30u, 41u}) {
            double sup = 0.0;
            for (std::size_t i = 0; i < count; ++i) sup = std::max(sup, scan.products[i]);
            if (prev > 0.0) slopeMin = std::min(slopeMin, (sup - prev) / 10.0);
            pass = pass && sup > prev;
            prev = sup;
        }
        pass = pass && slopeMin >= 0.9 / (2.0 * kPi);
        criterion(15, "linearly growing product supremum", pass,
                  "sup " + std::to_string(scan.supProduct) + ", min slope " +
                      std::to_string(slopeMin) + " vs 1/(2 pi) = " + std::to_string(1.0 / (2.0 * kPi)));
    }

    std::printf("%d of 15 criteria failed\n", g_failures);
    return g_failures;
}
