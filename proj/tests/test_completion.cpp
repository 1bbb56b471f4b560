#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"
#include "uloc/completion.hpp"
#include "uloc/functionals.hpp"

using namespace uloc;
using namespace testutil;

namespace {

SampledFunction probe_bump(const GridSpec& g, double center, double width)
{
    return smooth_bump(g, {center, 0.0}, width);
}

} // namespace

TEST_CASE("mixing step: coefficient recursion against hand-computed values")
{
    const GridSpec g = GridSpec::line(4096, -64.0, 64.0);
    CompletionOptions opt;
    opt.p = 0.5;
    opt.d = 1;
    CompletionState state(g, {}, opt);
    SampledFunction f = probe_bump(g, 0.0, 2.0);
    const BlockAudit& audit = bourgain_step(state, f, 1, 0.25);

    // theta = 1/4, ||f|| = 1, J = 5: gamma_1^2 = 1 - 1/80
    const auto& gamma = audit.gammaSigma.first;
    const auto& sigma = audit.gammaSigma.second;
    CHECK(gamma.size() == 5);
    CHECK(std::abs(gamma[0] * gamma[0] - (1.0 - 1.0 / 80.0)) < 1e-12);
    // <beta_1, beta_2> = theta^2/J + sigma_1 gamma_1 = 0
    CHECK(std::abs(1.0 / 80.0 + sigma[0] * gamma[0]) < 1e-14);
    CHECK(audit.identityResidual < 1e-12);
    CHECK(audit.gammaMargin >= 0.0);
    CHECK(audit.sigmaMargin >= 0.0);

    // emitted members orthonormal, and each carries the same f coefficient
    const GramAudit gram = gram_audit(state.members);
    CHECK(gram.maxOffDiagonal < 1e-12);
    CHECK(gram.maxDiagonalDeviation < 1e-12);
    for (const SampledFunction& beta : state.members)
        CHECK(std::abs(inner_product(f, beta) - cplx(0.25 / std::sqrt(5.0), 0.0)) < 1e-12);
}

TEST_CASE("mixing step: zero residual degenerates to the plain block")
{
    const GridSpec g = GridSpec::line(4096, -64.0, 64.0);
    CompletionOptions opt;
    opt.p = 0.5;
    opt.d = 1;
    CompletionState state(g, {}, opt);
    SampledFunction zero = SampledFunction::zero(g, Domain::Time);
    const BlockAudit& audit = bourgain_step(state, zero, 1, 0.25);
    for (double gm : audit.gammaSigma.first) CHECK(gm == 1.0);
    for (double sg : audit.gammaSigma.second) CHECK(sg == 0.0);

    OrthonormalSystem plain = psi_family({}, 1, g);
    for (std::size_t l = 0; l < plain.size(); ++l)
        CHECK(max_abs_diff(state.members[l], plain.member(l)) < 1e-14);
}

TEST_CASE("mixing step: guards")
{
    const GridSpec g = GridSpec::line(4096, -64.0, 64.0);
    CompletionOptions opt;
    opt.p = 0.5;
    opt.d = 1;
    SampledFunction f = probe_bump(g, 0.0, 2.0);

    CompletionState state(g, {}, opt);
    CHECK_THROWS_AS((void)bourgain_step(state, f, 1, 0.7), Error); // theta out of range

    // support collision: a residual living on the shell itself
    SampledFunction onShell = probe_bump(g, 10.0, 1.0);
    CHECK_THROWS_AS((void)bourgain_step(state, onShell, 1, 0.25), SupportCollisionError);

    // occupied shell
    bourgain_step(state, f, 1, 0.25);
    SampledFunction f2 = probe_bump(g, 0.5, 2.0);
    SampledFunction resid = residual_against_members(state, f2);
    CHECK_THROWS_AS((void)bourgain_step(state, resid, 1, 0.25), SupportCollisionError);

    // member budget, block-atomic
    CompletionOptions small = opt;
    small.memberBudget = 3;
    CompletionState tiny(g, {}, small);
    CHECK_THROWS_AS((void)bourgain_step(tiny, f, 1, 0.25), BudgetError);
    CHECK(tiny.members.empty());
}

TEST_CASE("fixed-theta completion in one dimension")
{
    const GridSpec g = GridSpec::line(4096, -64.0, 64.0);
    std::vector<SampledFunction> probes{probe_bump(g, 0.0, 2.0), probe_bump(g, 1.0, 2.5),
                                        probe_bump(g, -0.7, 1.8)};
    CompletionOptions opt;
    opt.p = 0.5;
    opt.d = 1;
    opt.memberBudget = 64;
    auto [sys, rep] = complete_basis_caseI(probes, opt, g);

    CHECK(sys.size() == 31); // blocks at s = 1, 2, 3
    CHECK(rep.gramMaxOffDiagonal < 1e-8);
    CHECK(rep.certified);
    for (double proj : rep.probeProjection) CHECK(proj >= 1.0 / 16.0 - 1e-6);
    for (double cert : rep.certificates) CHECK(cert >= 1.0 / 16.0 - 1e-6);
    for (const BlockAudit& b : rep.blocks) {
        CHECK(b.identityResidual < 1e-12);
        CHECK(b.gammaMargin >= 0.0);
        CHECK(b.sigmaMargin >= 0.0);
    }
    CHECK(rep.productSpread <= 2.0);

    // a probe already in the span emits nothing
    const std::size_t before = sys.size();
    std::vector<SampledFunction> again{probes[0]};
    CompletionOptions opt2 = opt;
    auto [sys2, rep2] = complete_basis_caseI(probes, opt2, g);
    CHECK(sys2.size() == before);
}

TEST_CASE("scan of a constructed slice with its frequency shifts")
{
    const GridSpec g = GridSpec::line(4096, -64.0, 64.0);
    std::vector<SampledFunction> probes{probe_bump(g, 0.0, 2.0)};
    CompletionOptions opt;
    opt.p = 0.5;
    opt.d = 1;
    opt.memberBudget = 16;
    auto [sys, rep] = complete_basis_caseI(probes, opt, g);

    std::vector<std::pair<Point, Point>> shifts;
    for (const auto& sh : rep.memberShifts)
        shifts.push_back({Point{0.0, 0.0}, sh});
    const auto scan = dyadic_bin_scan(sys, opt.p, &shifts);
    // the scanned products are exactly the construction audit's products
    CHECK(std::abs(scan.supProduct - rep.supProduct) < 1e-9);
    std::size_t total = 0;
    for (const auto& bin : scan.bins) total += bin.count;
    CHECK(total == sys.size());
}

TEST_CASE("fixed-theta completion rejects p >= d and bad schedules")
{
    const GridSpec g = GridSpec::line(4096, -64.0, 64.0);
    std::vector<SampledFunction> probes{probe_bump(g, 0.0, 2.0)};
    CompletionOptions opt;
    opt.p = 1.0;
    opt.d = 1;
    CHECK_THROWS_AS((void)complete_basis_caseI(probes, opt, g), Error);

    CompletionOptions sched;
    sched.p = 0.5;
    sched.d = 1;
    sched.schedule = {9}; // shell (2048, 4096) far outside the box: inadmissible
    CHECK_THROWS_AS((void)complete_basis_caseI(probes, sched, g), Error);
}

TEST_CASE("adaptive completion: double-path identity and growth law")
{
    const GridSpec g = GridSpec::line(16384, -16.0, 496.0);
    std::vector<SampledFunction> probes{probe_bump(g, 0.0, 3.0), probe_bump(g, 0.5, 2.0)};
    CompletionOptions opt;
    opt.p = 1.0;
    opt.d = 1;
    opt.memberBudget = 400;
    opt.maxInnerSteps = 2;
    auto [sys, rep] = complete_basis_caseII(probes, opt, g);

    CHECK(rep.doublePathMax <= 1e-10);
    CHECK(rep.thetaMin > 0.0);
    CHECK(rep.thetaMax < 0.5);
    CHECK(rep.certified);
    CHECK(rep.earlyStops == 0);
    for (const BlockAudit& b : rep.blocks) {
        CHECK(b.lambda < 1.0);
        CHECK(b.kappaMax < b.kappaBound);
        CHECK(b.sobolevAfter <= rep.sobolevStart + rep.bEmp + 1e-9);
    }
    CHECK(rep.gramMaxOffDiagonal < 1e-8);

    // certificates recomputed from the final system agree with bookkeeping
    const auto projections = completeness_audit(sys, probes);
    for (std::size_t k = 0; k < probes.size(); ++k)
        CHECK(projections[k] >= rep.certificates[k] - 1e-9);
}

TEST_CASE("adaptive completion requires p = d")
{
    const GridSpec g = GridSpec::line(4096, -64.0, 64.0);
    std::vector<SampledFunction> probes{probe_bump(g, 0.0, 2.0)};
    CompletionOptions opt;
    opt.p = 0.5;
    opt.d = 1;
    CHECK_THROWS_AS((void)complete_basis_caseII(probes, opt, g), Error);
}

TEST_CASE("symmetrized family rejects one dimension")
{
    const GridSpec g = GridSpec::line(4096, -64.0, 64.0);
    std::vector<SampledFunction> probes{probe_bump(g, 0.0, 2.0)};
    CompletionOptions opt;
    opt.d = 1;
    CHECK_THROWS_AS((void)build_even_family(probes, opt, g), Error);
}

TEST_CASE("completeness audit: span membership and orthogonal probes")
{
    const GridSpec g = GridSpec::line(4096, -64.0, 64.0);
    OrthonormalSystem block = psi_family({}, 1, g);

    // a probe inside the span projects fully
    std::vector<cplx> mix(g.size(), cplx{0.0, 0.0});
    for (std::size_t l = 0; l < 3; ++l) {
        const double w = 0.5 + 0.2 * static_cast<double>(l);
        for (std::size_t i = 0; i < mix.size(); ++i) mix[i] += w * block.member(l)[i];
    }
    SampledFunction inside(g, Domain::Time, std::move(mix));
    inside.normalize();

    SampledFunction outside = probe_bump(g, 0.0, 2.0); // disjoint support

    const auto projections = completeness_audit(block, {inside, outside});
    CHECK(std::abs(projections[0] - 1.0) < 1e-10);
    CHECK(projections[1] < 1e-10);
}
