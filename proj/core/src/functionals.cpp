#include "uloc/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "uloc/fourier.hpp"

namespace uloc {

namespace {

void require_unit_norm(const SampledFunction& f, const char* op)
{
    const double n = f.norm();
    if (std::abs(n - 1.0) > 1e-8)
        throw UnnormalizedError(std::string(op) + ": input norm is " + std::to_string(n) +
                                ", expected 1");
}

double radius(const Point& x, int dim)
{
    return dim == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
}

} // namespace

double WeightSpec::operator()(const Point& x, int dim) const
{
    if (const auto* rp = std::get_if<RadialPowerWeight>(&kind)) {
        Point y{x[0] - rp->center[0], x[1] - rp->center[1]};
        const double r = radius(y, dim);
        return std::pow(r, rp->p);
    }
    if (const auto* sp = std::get_if<SeparablePowerWeight>(&kind)) {
        double v = std::pow(std::abs(x[0]), sp->alpha[0]);
        if (dim == 2) v *= std::pow(std::abs(x[1]), sp->alpha[1]);
        return v;
    }
    const auto& po = std::get<RadialPlusOneWeight>(kind);
    return std::pow(radius(x, dim) + 1.0, po.p);
}

Point mean_vector(const SampledFunction& f)
{
    require_unit_norm(f, "mean_vector");
    const GridSpec& g = f.grid();
    Point mu{0.0, 0.0};
    for (int m = 0; m < g.dim(); ++m) {
        const std::size_t mm = static_cast<std::size_t>(m);
        mu[mm] = g.cellVolume() * pairwise_sum(f.size(), [&](std::size_t i) {
                     return g.point(i)[mm] * std::norm(f[i]);
                 });
    }
    return mu;
}

double dispersion(const SampledFunction& f)
{
    require_unit_norm(f, "dispersion");
    const GridSpec& g = f.grid();
    const Point mu = mean_vector(f);
    const double var = g.cellVolume() * pairwise_sum(f.size(), [&](std::size_t i) {
                           const Point x = g.point(i);
                           double r2 = 0.0;
                           for (int m = 0; m < g.dim(); ++m) {
                               const std::size_t mm = static_cast<std::size_t>(m);
                               const double dxm = x[mm] - mu[mm];
                               r2 += dxm * dxm;
                           }
                           return r2 * std::norm(f[i]);
                       });
    return std::sqrt(std::max(var, 0.0));
}

namespace {

double radial_moment_p(const SampledFunction& f, double p, const Point& a)
{
    if (!(p > 0.0)) throw Error("radial moment requires p > 0");
    const GridSpec& g = f.grid();
    return g.cellVolume() * pairwise_sum(f.size(), [&](std::size_t i) {
               const Point x = g.point(i);
               Point y{x[0] - a[0], x[1] - a[1]};
               const double r = radius(y, g.dim());
               return (r == 0.0 ? 0.0 : std::pow(r, p)) * std::norm(f[i]);
           });
}

} // namespace

double tau_p(const SampledFunction& f, double p)
{
    require_unit_norm(f, "tau_p");
    return std::pow(radial_moment_p(f, p, Point{0.0, 0.0}), 1.0 / p);
}

double tau_p_shifted(const SampledFunction& f, double p, const Point& a)
{
    require_unit_norm(f, "tau_p_shifted");
    return std::pow(radial_moment_p(f, p, a), 1.0 / p);
}

double weighted_l2(const SampledFunction& f, const WeightSpec& w)
{
    const GridSpec& g = f.grid();
    const double s = g.cellVolume() * pairwise_sum(f.size(), [&](std::size_t i) {
                         return w(g.point(i), g.dim()) * std::norm(f[i]);
                     });
    return std::sqrt(std::max(s, 0.0));
}

double sobolev_energy(const SampledFunction& g, int d)
{
    if (g.domain() != Domain::Time)
        throw DomainTagError("sobolev_energy expects a time-domain function");
    const SampledFunction G = fourier_transform(g);
    const GridSpec& fg = G.grid();
    double total = 0.0;
    for (int m = 0; m < fg.dim(); ++m) {
        const std::size_t mm = static_cast<std::size_t>(m);
        total += fg.cellVolume() * pairwise_sum(G.size(), [&](std::size_t i) {
                     const double xim = fg.point(i)[mm];
                     return std::pow(std::abs(xim), 2.0 * d) * std::norm(G[i]);
                 });
    }
    return total;
}

double concentration_on_set(const SampledFunction& f, const std::vector<std::uint8_t>& mask)
{
    require_unit_norm(f, "concentration_on_set");
    if (mask.size() != f.size()) throw GridMismatchError("mask size does not match grid");
    return f.grid().cellVolume() * pairwise_sum(f.size(), [&](std::size_t i) {
               return mask[i] ? std::norm(f[i]) : 0.0;
           });
}

RearrangementResult k_epsilon(const SampledFunction& omega, double eps)
{
    require_unit_norm(omega, "k_epsilon");
    if (!(eps > 0.0) || !(eps < 1.0)) throw Error("k_epsilon requires eps in (0,1)");
    const double vol = omega.grid().cellVolume();
    const std::size_t n = omega.size();

    RearrangementResult out;
    out.mask.assign(n, 0);
    const double total = omega.normSq();
    const double budget = eps * eps;
    if (total <= budget) return out; // vacuous tail constraint

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double va = std::norm(omega[a]);
        const double vb = std::norm(omega[b]);
        if (va != vb) return va > vb;
        return a < b;
    });

    double tail = total;
    std::size_t picked = 0;
    for (std::size_t idx : order) {
        if (tail <= budget) break;
        out.mask[idx] = 1;
        tail -= vol * std::norm(omega[idx]);
        ++picked;
    }
    out.measure = static_cast<double>(picked) * vol;
    return out;
}

DyadicScanReport dyadic_bin_scan(const OrthonormalSystem& system, double p,
                                 const std::vector<std::pair<Point, Point>>* shifts)
{
    const std::size_t m = system.size();
    if (m == 0) throw Error("dyadic_bin_scan: empty system");
    if (shifts && shifts->size() != m) throw Error("dyadic_bin_scan: shift list size mismatch");

    DyadicScanReport rep;
    rep.description = "bins by tau_p(b_n, q_n) in (D 2^{-k}, D 2^{-k+1}]";
    std::vector<double> tTime(m), tFreq(m);
    parallel_for(m, [&](std::size_t i) {
        const Point q = shifts ? (*shifts)[i].first : Point{0.0, 0.0};
        const Point r = shifts ? (*shifts)[i].second : Point{0.0, 0.0};
        tTime[i] = tau_p_shifted(system.member(i), p, q);
        const SampledFunction hat = fourier_transform(system.member(i));
        tFreq[i] = tau_p_shifted(hat, p, r);
    });

    rep.products.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        rep.products[i] = tTime[i] * tFreq[i];
        rep.supProduct = std::max(rep.supProduct, rep.products[i]);
    }

    const double D = std::sqrt(rep.supProduct);
    rep.memberBin.resize(m);
    std::map<int, std::size_t> counts;
    for (std::size_t i = 0; i < m; ++i) {
        // tau in (D 2^{-k}, D 2^{-k+1}]  <=>  k = floor(log2(D / tau)) + 1, with
        // exact-boundary correction so the upper endpoint lands in its bin.
        const double ratio = D / tTime[i];
        int k = static_cast<int>(std::floor(std::log2(ratio))) + 1;
        while (tTime[i] > D * std::exp2(static_cast<double>(-k + 1))) --k;
        while (tTime[i] <= D * std::exp2(static_cast<double>(-k))) ++k;
        rep.memberBin[i] = k;
        counts[k] += 1;
    }
    for (const auto& [k, c] : counts)
        rep.bins.push_back(DyadicBin{k, c, D * std::exp2(static_cast<double>(-k + 1))});
    return rep;
}

} // namespace uloc
