#include "uloc/completion.hpp"

#include <cmath>

#include "uloc/fourier.hpp"
#include "uloc/functionals.hpp"

namespace uloc {

namespace {

double weight_moment(const SampledFunction& f, double p)
{
    const double v = weighted_l2(f, WeightSpec{RadialPlusOneWeight{p}});
    return v * v; // integral (|x| + 1)^p |f|^2
}

bool admission_ok(const CompletionState& state, const SampledFunction& f, int s)
{
    const CompletionOptions& o = state.options;
    const double lhs = std::exp2(static_cast<double>(o.d) * s);
    if (o.p < static_cast<double>(o.d)) {
        const double ipTime = weight_moment(f, o.p);
        const double ipFreq = weight_moment(fourier_transform(f), o.p);
        return lhs > ipTime && lhs > std::exp2(o.p * s) * ipFreq;
    }
    return lhs > weight_moment(f, o.p);
}

int pick_scale(const CompletionState& state, const SampledFunction& f)
{
    for (int s = state.nextS; s <= 24; ++s) {
        bool fits = true;
        for (int m = 0; m < state.grid.dim(); ++m) {
            const double needLo = state.options.evenized ? -shell_hi(s) : shell_lo(s) - 1.0;
            if (state.grid.boxLo(m) > needLo || state.grid.boxHi(m) < shell_hi(s)) fits = false;
        }
        if (!fits)
            throw TruncationError("no admissible shell fits inside the grid box");
        if (admission_ok(state, f, s)) return s;
    }
    throw AdmissionRuleError("no admissible shell scale below the hard cap");
}

void check_support_disjoint(const CompletionState& state, const SampledFunction& f, int s)
{
    double peak = 0.0;
    for (const cplx& z : f.samples()) peak = std::max(peak, std::abs(z));
    if (peak == 0.0) return;
    const double thresh = peak * 1e-12;
    const double lo = shell_lo(s), hi = shell_hi(s);
    const GridSpec& g = state.grid;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (std::abs(f[i]) <= thresh) continue;
        const Point x = g.point(i);
        bool inShell = true;
        for (int m = 0; m < g.dim(); ++m) {
            const double ax = state.options.evenized ? std::abs(x[static_cast<std::size_t>(m)])
                                                     : x[static_cast<std::size_t>(m)];
            if (ax <= lo || ax >= hi) inShell = false;
        }
        if (inShell)
            throw SupportCollisionError("residual support intersects the shell at scale " +
                                        std::to_string(s));
    }
}

} // namespace

SampledFunction residual_against_members(const CompletionState& state, const SampledFunction& f)
{
    std::vector<cplx> acc(f.samples().begin(), f.samples().end());
    std::vector<cplx> coef(state.members.size());
    parallel_for(state.members.size(),
                 [&](std::size_t n) { coef[n] = inner_product(f, state.members[n]); });
    for (std::size_t n = 0; n < state.members.size(); ++n) {
        const SampledFunction& b = state.members[n];
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] -= coef[n] * b[i];
    }
    // returns the residual f - P f
    return SampledFunction(f.grid(), f.domain(), std::move(acc));
}

BlockAudit& bourgain_step(CompletionState& state, const SampledFunction& f, int s, double theta)
{
    if (!(theta > 0.0) || !(theta < 0.5))
        throw Error("mixing weight theta must lie in (0, 1/2)");
    if (s < state.nextS)
        throw SupportCollisionError("shell scale " + std::to_string(s) + " already occupied");
    if (!(f.grid() == state.grid))
        throw GridMismatchError("residual lives on a different grid");
    check_support_disjoint(state, f, s);
    if (!admission_ok(state, f, s))
        throw AdmissionRuleError("admission rule violated at shell scale " + std::to_string(s));

    const int d = state.grid.dim();
    const std::size_t J = block_size(s, d);
    if (state.members.size() + J > state.options.memberBudget)
        throw BudgetError("member budget would be exceeded by the next block");

    OrthonormalSystem block = psi_family(state.bump, s, state.grid);
    const auto lattice = block_lattice(s, d);

    const double fNormSq = f.normSq();
    const double invSqrtJ = 1.0 / std::sqrt(static_cast<double>(J));

    BlockAudit audit;
    audit.s = s;
    audit.theta = theta;
    audit.members = J;
    audit.residualNormSqIn = fNormSq;

    std::vector<double> gamma(J), sigma(J > 0 ? J - 1 : 0);
    double c = theta * theta * fNormSq / static_cast<double>(J);
    for (std::size_t l = 0; l < J; ++l) {
        gamma[l] = std::sqrt(1.0 - c);
        if (l + 1 < J) {
            sigma[l] = -c / gamma[l];
            c += sigma[l] * sigma[l];
        }
    }

    // identity and bound audits on the emitted coefficients
    double sigmaPrefix = 0.0;
    const double base = theta * theta * fNormSq / static_cast<double>(J);
    for (std::size_t l = 0; l < J; ++l) {
        const double identity = gamma[l] * gamma[l] + base + sigmaPrefix - 1.0;
        audit.identityResidual = std::max(audit.identityResidual, std::abs(identity));
        if (l + 1 < J) {
            const double cross = sigma[l] * gamma[l] + base + sigmaPrefix;
            audit.identityResidual = std::max(audit.identityResidual, std::abs(cross));
            sigmaPrefix += sigma[l] * sigma[l];
        }
    }
    double gammaMin = 1.0, sigmaMax = 0.0;
    for (std::size_t l = 0; l < J; ++l) gammaMin = std::min(gammaMin, std::abs(gamma[l]));
    for (double sg : sigma) sigmaMax = std::max(sigmaMax, std::abs(sg));
    audit.gammaMargin = gammaMin - (1.0 - 2.0 * theta * theta / static_cast<double>(J));
    audit.sigmaMargin = theta / static_cast<double>(J) - sigmaMax;

    // beta_l = (theta/sqrt(J)) f + sum_{n<l} sigma_n Psi_n + gamma_l Psi_l
    std::vector<cplx> running(state.grid.size());
    for (std::size_t i = 0; i < running.size(); ++i) running[i] = theta * invSqrtJ * f[i];

    const double invScale = std::exp2(static_cast<double>(-s));
    audit.productMin = 1e300;
    for (std::size_t l = 0; l < J; ++l) {
        const SampledFunction& psiL = block.member(l);
        std::vector<cplx> v(running.begin(), running.end());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += gamma[l] * psiL[i];
        SampledFunction beta(state.grid, Domain::Time, std::move(v));

        const Point shift{invScale * lattice[l][0], d == 2 ? invScale * lattice[l][1] : 0.0};
        if (state.options.auditProducts) {
            const double tTime = tau_p(beta, state.options.p);
            const double tFreq = tau_p_shifted(fourier_transform(beta), state.options.p, shift);
            const double prod = tTime * tFreq;
            audit.productMin = std::min(audit.productMin, prod);
            audit.productMax = std::max(audit.productMax, prod);
            if (state.options.evenized) {
                SampledFunction betaHat = fourier_transform(beta);
                const Point mu = mean_vector(beta);
                const Point muHat = mean_vector(betaHat);
                const double muAbs = d == 1 ? std::abs(mu[0]) : std::hypot(mu[0], mu[1]);
                const double muHatAbs = d == 1 ? std::abs(muHat[0]) : std::hypot(muHat[0], muHat[1]);
                audit.meanTimeMax = std::max(audit.meanTimeMax, muAbs);
                audit.meanFreqMax = std::max(audit.meanFreqMax, muHatAbs);
                audit.dispProductMax =
                    std::max(audit.dispProductMax, dispersion(beta) * dispersion(betaHat));
            }
        }
        state.members.push_back(std::move(beta));
        state.memberFreqShift.push_back(shift);

        if (l + 1 < J)
            for (std::size_t i = 0; i < running.size(); ++i) running[i] += sigma[l] * psiL[i];
    }
    if (audit.productMin > 1e299) audit.productMin = 0.0;

    // store gamma/sigma for closed-form residual updates by the drivers
    audit.lambda = 1.0 - theta * theta * fNormSq;
    audit.kappaBound = 2.0 * theta * invSqrtJ * fNormSq;
    double kappaMax = 0.0;
    for (std::size_t n = 0; n < J; ++n) {
        const double mult = gamma[n] + (n + 1 < J ? (static_cast<double>(J) - 1.0 - n) * sigma[n] : 0.0);
        kappaMax = std::max(kappaMax, std::abs(theta * invSqrtJ * fNormSq * mult));
    }
    audit.kappaMax = kappaMax;

    state.nextS = s + 1;
    state.blocks.push_back(audit);
    state.blocks.back().gammaSigma = {std::move(gamma), std::move(sigma)};
    return state.blocks.back();
}

namespace {

void finalize_report(const CompletionState& state, CompletionReport& rep)
{
    rep.blocks = state.blocks;
    rep.memberShifts = state.memberFreqShift;
    rep.gramMaxOffDiagonal = gram_audit(state.members).maxOffDiagonal;
    double supMin = 1e300;
    rep.thetaMin = 1.0;
    for (const BlockAudit& b : rep.blocks) {
        rep.supProduct = std::max(rep.supProduct, b.productMax);
        if (b.productMax > 0.0) supMin = std::min(supMin, b.productMax);
        rep.thetaMin = std::min(rep.thetaMin, b.theta);
        rep.thetaMax = std::max(rep.thetaMax, b.theta);
        rep.doublePathMax = std::max(rep.doublePathMax, b.doublePathError);
        rep.sobolevMax = std::max(rep.sobolevMax, std::max(b.sobolevBefore, b.sobolevAfter));
    }
    rep.productSpread = (supMin < 1e299 && supMin > 0.0) ? rep.supProduct / supMin : 0.0;
    rep.certified = !rep.probeProjection.empty();
    for (double v : rep.probeProjection)
        if (v < 1.0 / 16.0 - 1e-6) rep.certified = false;
}

} // namespace

std::pair<OrthonormalSystem, CompletionReport>
complete_basis_caseI(const std::vector<SampledFunction>& denseSeq, const CompletionOptions& options,
                     const GridSpec& grid, const BumpSpec& bump)
{
    if (!(options.p < static_cast<double>(options.d)))
        throw Error("fixed-theta completion requires p < d");
    CompletionState state(grid, bump, options);
    CompletionReport rep;

    std::size_t k = 0;
    for (const SampledFunction& fk : denseSeq) {
        SampledFunction g = residual_against_members(state, fk);
        const double gNormSq = g.normSq();
        const double priorProj = fk.normSq() - gNormSq;
        if (gNormSq < 1e-16) {
            // probe already inside the span; nothing to emit
            rep.certificates.push_back(priorProj);
            ++k;
            continue;
        }
        int s;
        if (k < options.schedule.size()) {
            s = options.schedule[k];
            if (!admission_ok(state, g, s))
                throw AdmissionRuleError("scheduled shell scale " + std::to_string(s) +
                                         " violates the admission rule");
        } else {
            s = pick_scale(state, g);
        }
        bourgain_step(state, g, s, options.theta);
        rep.certificates.push_back(priorProj + options.theta * options.theta * gNormSq * gNormSq);
        ++k;
    }

    // recompute projections of all probes against the final system
    for (const SampledFunction& fk : denseSeq) {
        const SampledFunction resid = residual_against_members(state, fk);
        rep.probeProjection.push_back(fk.normSq() - resid.normSq());
    }
    finalize_report(state, rep);
    OrthonormalSystem system(std::move(state.members), 1e-7);
    return {std::move(system), std::move(rep)};
}

std::pair<OrthonormalSystem, CompletionReport>
complete_basis_caseII(const std::vector<SampledFunction>& denseSeq, const CompletionOptions& options,
                      const GridSpec& grid, const BumpSpec& bump)
{
    if (options.p != static_cast<double>(options.d))
        throw Error("adaptive completion requires p = d");
    CompletionState state(grid, bump, options);
    CompletionReport rep;
    double bEmp = 0.0;
    bool first = true;

    for (const SampledFunction& fk : denseSeq) {
        SampledFunction g = residual_against_members(state, fk);
        double gNormSq = g.normSq();
        double sobolev = sobolev_energy(g, options.d);
        if (first) {
            rep.sobolevStart = sobolev;
            first = false;
        }
        const double sobolevStartProbe = sobolev;
        double certSum = 0.0;
        const double priorProj = fk.normSq() - gNormSq;

        for (int t = 1; t <= options.maxInnerSteps; ++t) {
            if (gNormSq < 0.25) break;                    // small-residual branch, >= 1/4 certificate
            if (static_cast<double>(t) > 4.0 + sobolevStartProbe + bEmp) break; // stopping rule
            const double theta = 1.0 / std::sqrt(4.0 + sobolev);

            int s = 0;
            const std::size_t firstMember = state.members.size();
            try {
                s = pick_scale(state, g);
                bourgain_step(state, g, s, theta);
            } catch (const TruncationError&) {
                ++rep.earlyStops; // no shell left inside the box; keep what we have
                break;
            } catch (const BudgetError&) {
                ++rep.earlyStops;
                break;
            }
            BlockAudit& audit = state.blocks.back();
            audit.sobolevBefore = sobolev;
            audit.weightMomentBefore = weight_moment(g, options.p);
            const std::size_t J = audit.members;

            // closed-form residual: lambda g + sum kappa_n Psi_n
            const double lambda = 1.0 - theta * theta * gNormSq;
            OrthonormalSystem blockPsi = psi_family(state.bump, s, grid);
            std::vector<cplx> closed(grid.size());
            for (std::size_t i = 0; i < closed.size(); ++i) closed[i] = lambda * g[i];
            const auto& gamma = audit.gammaSigma.first;
            const auto& sigma = audit.gammaSigma.second;
            const double invSqrtJ = 1.0 / std::sqrt(static_cast<double>(J));
            for (std::size_t n = 0; n < J; ++n) {
                const double mult =
                    gamma[n] + (n + 1 < J ? (static_cast<double>(J) - 1.0 - n) * sigma[n] : 0.0);
                const double kappa = -theta * invSqrtJ * gNormSq * mult;
                const SampledFunction& psiN = blockPsi.member(n);
                for (std::size_t i = 0; i < closed.size(); ++i) closed[i] += kappa * psiN[i];
            }

            // projection-path residual against the freshly emitted block
            std::vector<cplx> proj(g.samples().begin(), g.samples().end());
            for (std::size_t n = firstMember; n < state.members.size(); ++n) {
                const cplx coef = inner_product(g, state.members[n]);
                const SampledFunction& b = state.members[n];
                for (std::size_t i = 0; i < proj.size(); ++i) proj[i] -= coef * b[i];
            }

            double pathErr = 0.0;
            for (std::size_t i = 0; i < proj.size(); ++i)
                pathErr += std::norm(proj[i] - closed[i]);
            pathErr = std::sqrt(pathErr * grid.cellVolume());
            audit.doublePathError = pathErr;

            certSum += theta * theta * gNormSq * gNormSq;

            SampledFunction gNext(grid, Domain::Time, std::move(proj));
            const double sobolevNext = sobolev_energy(gNext, options.d);
            audit.lambda = lambda;
            audit.sobolevAfter = sobolevNext;
            const double increment = sobolevNext - lambda * lambda * sobolev;
            const double denom = theta * theta * gNormSq * gNormSq;
            if (denom > 1e-14) bEmp = std::max(bEmp, increment / denom);

            g = std::move(gNext);
            gNormSq = g.normSq();
            sobolev = sobolevNext;
        }
        rep.certificates.push_back(priorProj + certSum);
    }

    for (const SampledFunction& fk : denseSeq) {
        const SampledFunction resid = residual_against_members(state, fk);
        rep.probeProjection.push_back(fk.normSq() - resid.normSq());
    }
    rep.bEmp = bEmp;
    finalize_report(state, rep);
    OrthonormalSystem system(std::move(state.members), 1e-7);
    return {std::move(system), std::move(rep)};
}

std::pair<OrthonormalSystem, CompletionReport>
build_even_family(const std::vector<SampledFunction>& denseSeq, const CompletionOptions& options,
                  const GridSpec& grid, const BumpSpec& bump)
{
    if (options.d < 2)
        throw Error("the symmetrized family requires d >= 2");
    CompletionOptions opts = options;
    opts.evenized = true;
    opts.p = static_cast<double>(options.d); // adaptive route with second moments in d = 2
    return complete_basis_caseII(denseSeq, opts, grid, bump);
}

std::vector<double> completeness_audit(const OrthonormalSystem& system,
                                       const std::vector<SampledFunction>& probes)
{
    std::vector<double> out;
    for (const SampledFunction& probe : probes) {
        double acc = 0.0;
        for (const SampledFunction& b : system.members())
            acc += std::norm(inner_product(probe, b));
        out.push_back(acc);
    }
    return out;
}

} // namespace uloc
