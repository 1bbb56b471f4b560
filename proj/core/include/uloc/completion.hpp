// Recursive completion of the modulated-dilate blocks into an orthonormal
// family that picks up a prescribed share of every probe function.
//
// One step mixes a residual f with a fresh block {Psi_{1,s}, ..., Psi_{J,s}}
// on an unused dyadic shell:
//   beta_l = (theta / sqrt(J)) f + sum_{n<l} sigma_n Psi_{n,s} + gamma_l Psi_{l,s}
// with gamma/sigma solving
//   gamma_l^2 = 1 - theta^2 ||f||^2 / J - sum_{n<l} sigma_n^2,
//   sigma_l gamma_l = -(theta^2 ||f||^2 / J + sum_{n<l} sigma_n^2),
// so the emitted family is orthonormal and every member carries the same
// f-coefficient theta ||f||^2 / sqrt(J).
#pragma once

#include "uloc/bump.hpp"
#include "uloc/system.hpp"

namespace uloc {

struct CompletionOptions {
    double p = 1.0;                 // radial-moment exponent (p < d fixed-theta, p = d adaptive)
    int d = 1;
    double theta = 0.25;            // fixed mixing weight for the p < d route
    std::size_t memberBudget = 512; // emitted members, block-atomic
    int maxInnerSteps = 4;          // adaptive-route inner loop cap per probe
    std::vector<int> schedule;      // optional explicit shell scales per block
    bool evenized = false;          // use the symmetrized bump (d >= 2 bounded means)
    bool auditProducts = true;      // per-member radial-moment products (one FFT each)
};

struct BlockAudit {
    int s = 0;
    double theta = 0.0;
    std::size_t members = 0;
    double residualNormSqIn = 0.0;  // ||f||^2 fed into the block
    double identityResidual = 0.0;  // worst deviation in the gamma/sigma identities
    double gammaMargin = 0.0;       // min |gamma_l| - (1 - 2 theta^2 / J)
    double sigmaMargin = 0.0;       // theta / J - max |sigma_l|
    double productMin = 0.0;        // per-member tau_p(beta) tau_p(beta^, shift)
    double productMax = 0.0;
    // adaptive-route bookkeeping
    double lambda = 0.0;
    double kappaMax = 0.0;
    double kappaBound = 0.0;        // 2 theta ||g||^2 / sqrt(J)
    double doublePathError = 0.0;   // closed-form vs projection residual update
    double sobolevBefore = 0.0;     // I(g_t)
    double sobolevAfter = 0.0;      // I(g_{t+1})
    double weightMomentBefore = 0.0; // I_d(g_t), the admission quantity
    // symmetrized-family bounds
    double meanTimeMax = 0.0;
    double meanFreqMax = 0.0;
    double dispProductMax = 0.0;
    // emitted coefficient vectors (gamma has J entries, sigma J-1)
    std::pair<std::vector<double>, std::vector<double>> gammaSigma;
};

struct CompletionReport {
    std::vector<BlockAudit> blocks;
    std::vector<double> probeProjection; // ||P_B f_k||^2 at probe exit (recomputed)
    std::vector<double> certificates;    // bookkeeping value of the same quantity
    double gramMaxOffDiagonal = 0.0;
    double supProduct = 0.0;
    double productSpread = 0.0;          // max block sup / min block sup
    double thetaMin = 0.0, thetaMax = 0.0;
    double doublePathMax = 0.0;
    double bEmp = 0.0;                   // empirical additive constant in the I(g) growth law
    double sobolevStart = 0.0;           // I(g_1) of the first probe
    double sobolevMax = 0.0;
    int earlyStops = 0;                  // inner loops cut short by shell/budget exhaustion
    bool certified = false;              // all probe projections >= 1/16 - 1e-6
    std::vector<std::array<double, 2>> memberShifts; // frequency centers 2^{-s} j per member
};

struct CompletionState {
    GridSpec grid;
    BumpSpec bump;
    CompletionOptions options;
    std::vector<SampledFunction> members;
    std::vector<BlockAudit> blocks;
    std::vector<std::array<double, 2>> memberFreqShift; // 2^{-s} j per member
    int nextS = 1;

    CompletionState(GridSpec g, BumpSpec b, CompletionOptions o)
        : grid(std::move(g)), bump(std::move(b)), options(std::move(o))
    {
        bump.evenized = options.evenized;
    }
};

/// Emits one block at shell scale s. Verifies theta, the admission rule, shell
/// availability, and support disjointness; throws AdmissionRule / SupportCollision /
/// Budget accordingly. Returns the audit of the emitted block.
BlockAudit& bourgain_step(CompletionState& state, const SampledFunction& f, int s, double theta);

/// Residual f - P f of f against the emitted members.
SampledFunction residual_against_members(const CompletionState& state, const SampledFunction& f);

/// Fixed-theta completion (p < d): one block per probe.
std::pair<OrthonormalSystem, CompletionReport>
complete_basis_caseI(const std::vector<SampledFunction>& denseSeq, const CompletionOptions& options,
                     const GridSpec& grid, const BumpSpec& bump = {});

/// Adaptive completion (p = d): inner loop per probe with
/// theta_t = (4 + I(g_t))^{-1/2} and the closed-form residual update.
std::pair<OrthonormalSystem, CompletionReport>
complete_basis_caseII(const std::vector<SampledFunction>& denseSeq, const CompletionOptions& options,
                      const GridSpec& grid, const BumpSpec& bump = {});

/// Symmetrized-bump completion for d >= 2: bounded means and bounded
/// dispersion products. Throws for d = 1.
std::pair<OrthonormalSystem, CompletionReport>
build_even_family(const std::vector<SampledFunction>& denseSeq, const CompletionOptions& options,
                  const GridSpec& grid, const BumpSpec& bump = {});

/// Per-probe projection norms ||P_system probe||^2.
std::vector<double> completeness_audit(const OrthonormalSystem& system,
                                       const std::vector<SampledFunction>& probes);

} // namespace uloc
