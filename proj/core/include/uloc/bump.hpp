// The smooth bump whose modulated dilates form orthonormal blocks on dyadic
// shells, plus the explicit 1-D families (dyadic dilates, wavelet-style
// covariance checks) and the degenerate-homogeneous-weight family.
//
// Construction: chi = indicator of the unit-side cube (5/2, 7/2)^d, omega the
// radial profile exp(-1/(1-|2x|^2)) on |x| < 1/2, phi = chi * omega (spectral
// convolution), psi = sqrt(phi), and Psi(x) = a psi(x/2) normalized in L2.
// Then supp(Psi) is inside (4, 8)^d and the autocorrelation
// <Psi, e^{2 pi i b.x} Psi> vanishes for all half-integer b != 0, which makes
//   Psi_{j,s}(x) = 2^{-ds/2} e^{2 pi i j . 2^{-s} x} Psi(2^{-s} x),  |j_l| <= 2^s,
// an orthonormal family supported on the shell (2^{s+2}, 2^{s+3})^d.
#pragma once

#include "uloc/system.hpp"

namespace uloc {

struct BumpSpec {
    double cubeLo = 2.5;
    double cubeHi = 3.5;
    double mollifierRadius = 0.5;
    double finalScale = 2.0; // Psi(x) = a psi(x / finalScale)
    bool evenized = false;   // use (Psi(x) + Psi(-x)) / sqrt(2)
    int refLevel = 0;        // reference-lattice level 2^{-refLevel}; 0 = auto
};

/// Shell (2^{s+2}, 2^{s+3})^d carrying the s-th block (s = 0 gives Psi itself).
inline double shell_lo(int s) { return std::exp2(s + 2); }
inline double shell_hi(int s) { return std::exp2(s + 3); }

/// Number of members in the s-th block, (2^{s+1} + 1)^d.
std::size_t block_size(int s, int d);

/// Lexicographic enumeration of j with |j_l| <= 2^s.
std::vector<std::array<int, 2>> block_lattice(int s, int d);

/// Psi sampled on the grid (unit norm). Throws Resolution when the grid cannot
/// align the convolution lattice.
SampledFunction build_bump(const BumpSpec& spec, const GridSpec& grid);

/// One member Psi_{j,s} (normalized on the grid).
SampledFunction psi_member(const BumpSpec& spec, const std::array<int, 2>& j, int s,
                           const GridSpec& grid);

/// The whole s-th block as an orthonormal system.
OrthonormalSystem psi_family(const BumpSpec& spec, int s, const GridSpec& grid);

/// Empirical check of the block derivative bound
/// ||d^q/dx_m^q sum_j alpha_j Psi_{j,s}||^2 <= A sum |alpha_j|^2.
struct DerivativeBoundAudit {
    double lhs = 0.0;
    double coeffNormSq = 0.0;
    double ratio = 0.0;
};
DerivativeBoundAudit derivative_bound_check(const BumpSpec& spec, const std::vector<cplx>& coeffs,
                                            int s, int q, int axis, const GridSpec& grid);

// --- explicit 1-D families -------------------------------------------------------

/// Even real C-infinity mother supported in [-2,-1] u [1,2], unit norm.
SampledFunction dyadic_mother(const GridSpec& grid);

/// phi_n(x) = 2^{n/2} phi(2^n x) for n in [nLo, nHi]; orthonormal by disjoint
/// supports, zero means, constant dispersion product.
OrthonormalSystem dyadic_example(const SampledFunction& mother, int nLo, int nHi);

struct CovarianceLawsAudit {
    double meanTime = 0.0, meanTimeExpected = 0.0;
    double meanFreq = 0.0, meanFreqExpected = 0.0;
    double dispTime = 0.0, dispTimeExpected = 0.0;
    double dispFreq = 0.0, dispFreqExpected = 0.0;
    double productRelSpread = 0.0; // |Delta Delta^ / (base product) - 1|
    bool pass = false;
};

/// Verifies the dilation-translation covariance laws for
/// psi_{m,n}(t) = 2^{m/2} psi(2^m t - n) against the mother's moments.
CovarianceLawsAudit covariance_laws_check(const SampledFunction& mother, int m, int n,
                                          double relTol = 1e-8);

// --- homogeneous-weight family ----------------------------------------------------

struct HomogeneousFamilyAudit {
    std::vector<double> timeWeighted;  // integral v |phi_j|^2 per member
    std::vector<double> freqWeighted;  // integral v |phihat_j|^2 per member
    double timeBound = 0.0;            // 2^{2 alpha_1}
    double freqSpread = 0.0;           // max relative deviation across j
    bool pass = false;
};

/// phi_j(x) = 2^{(j/2)(a1/a2 - 1)} phi(2^{-j} x_1 - 3, 2^{j a1/a2} x_2, ...):
/// disjointly supported on E_j, with uniformly bounded separable-weight norms.
std::pair<OrthonormalSystem, HomogeneousFamilyAudit>
homogeneous_family(const std::array<double, 2>& alpha, const SampledFunction& mother, int jMax,
                   const GridSpec& grid);

/// Smooth product bump supported in [-1,1]^d, unit norm, with analytic source.
SampledFunction cube_mother(const GridSpec& grid);

} // namespace uloc
