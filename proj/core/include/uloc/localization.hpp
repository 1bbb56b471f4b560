// Time- and band-limiting projections, the localization operator
// Q = P_T P_W P_T, its trace identity, concentration audits, counting bounds,
// and the doubly-vanishing-function solver.
#pragma once

#include <Eigen/Dense>
#include <optional>

#include "uloc/fourier.hpp"
#include "uloc/functionals.hpp"
#include "uloc/system.hpp"

namespace uloc {

// --- measurable sets -----------------------------------------------------------

struct BoxShape {
    Point lo{0.0, 0.0};
    Point hi{0.0, 0.0};
};

struct BallShape {
    Point center{0.0, 0.0};
    double radius = 0.0;
};

struct MaskShape {
    std::vector<std::uint8_t> cells; // per flat grid index
};

class MeasurableSet {
public:
    static MeasurableSet box(const Point& lo, const Point& hi);
    static MeasurableSet ball(const Point& center, double radius);
    static MeasurableSet mask(std::vector<std::uint8_t> cells);
    static MeasurableSet empty();

    /// Cell membership by cell center: mask[i] = 1 iff the i-th sample point
    /// lies in the set.
    std::vector<std::uint8_t> buildMask(const GridSpec& grid) const;

    /// Analytic measure for box/ball; cell-count * cell-volume for masks
    /// (mask measure requires the grid).
    double exactMeasure(int dim, const GridSpec* grid = nullptr) const;

    /// Cell-count * cell-volume measure of the discretized set.
    double maskMeasure(const GridSpec& grid) const;

    bool isEmpty() const;

private:
    std::variant<BoxShape, BallShape, MaskShape> shape_;
    explicit MeasurableSet(std::variant<BoxShape, BallShape, MaskShape> s) : shape_(std::move(s)) {}
};

// --- projections ---------------------------------------------------------------

/// P_T f = f . indicator(T); idempotent, norm non-increasing.
SampledFunction project_time(const SampledFunction& f, const MeasurableSet& T);

/// P_W f = inverse transform of (indicator(W) . fhat); time domain in, time out.
SampledFunction project_freq(const SampledFunction& f, const MeasurableSet& W);

// --- localization operator ------------------------------------------------------

struct LocalizationSetup {
    GridSpec grid;
    MeasurableSet T;
    MeasurableSet W;
    std::optional<Eigen::MatrixXcd> Q; // materialized on demand

    LocalizationSetup(GridSpec g, MeasurableSet t, MeasurableSet w)
        : grid(std::move(g)), T(std::move(t)), W(std::move(w)) {}
};

/// Dense matrix of Q = P_T P_W P_T in the sample basis (grid size <= 4096).
void materialize_Q(LocalizationSetup& setup);

/// Discrete operator trace; equals maskMeasure(T) * maskMeasure(W) and
/// converges to |T||W| at first order in the spacing.
double trace_Q(const LocalizationSetup& setup);

/// Hilbert-Schmidt norm of P_W P_T; its square equals trace_Q.
double hs_norm_PWPT(const LocalizationSetup& setup);

/// Rayleigh quotient <Q f, f> = || indicator(W) . (P_T f)^hat ||^2, computed
/// through the transform pipeline without materializing Q.
double rayleigh_Q(const SampledFunction& f, const MeasurableSet& T, const MeasurableSet& W);

struct ConcentrationAudit {
    struct PerMember {
        double a = 0.0;        // sqrt(1 - time concentration)
        double b = 0.0;        // sqrt(1 - frequency concentration)
        double rayleigh = 0.0; // <Q phi, phi>
    };
    std::vector<PerMember> perMember;
    double lhsSum = 0.0;       // sum (1 - 1.5 a_n - 1.5 b_n)
    double lhsTimeHeavy = 0.0; // sum (1 - 2 a_n - b_n)
    double lhsFreqHeavy = 0.0; // sum (1 - a_n - 2 b_n)
    double rayleighSum = 0.0;
    double bound = 0.0;        // |T| |W| (analytic measures)
    double traceDiscrete = 0.0;
    bool pass = false;
};

/// Full localization audit of an orthonormal system against sets (T, W).
ConcentrationAudit localization_audit(const OrthonormalSystem& system, const MeasurableSet& T,
                                      const MeasurableSet& W);

// --- counting bounds -------------------------------------------------------------

/// pi^d r0^d rho0^d / ((1 - 3 eps) Gamma(d/2 + 1)^2), eps in (0, 1/3).
double concentration_count_bound(double r0, double rho0, double eps, int d);

/// (1 - 3 eps)^{ -1} K_phi(eps) K_psi(eps) via the greedy rearrangement.
double umbrella_bound(const SampledFunction& phi, const SampledFunction& psi, double eps);

/// Count bound for tau_p(phi_n) <= J, tau_p(phi_n^hat) <= K, via eps = 1/4
/// concentration radii r0 = 16^{1/p} J, rho0 = 16^{1/p} K.
double jk_count_bound(double J, double K, double p, int d);

// --- annihilating function -------------------------------------------------------

struct AnnihilatorResult {
    SampledFunction f;
    double residual = 0.0; // attained min of || fhat restricted to |xi| <= c ||
};

/// Unit-norm f vanishing on {|x| <= b} minimizing the continuum-band energy of
/// fhat over {|xi| <= c}; smallest-eigenvalue problem for the band kernel
/// compressed to the free cells.
AnnihilatorResult annihilating_function(double b, double c, const GridSpec& grid);

} // namespace uloc
