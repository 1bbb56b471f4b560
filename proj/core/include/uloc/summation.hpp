// Deterministic reductions and a small parallel-for helper.
//
// All reductions in the library go through pairwise (tree) summation so that
// results do not depend on thread count or traversal order.
#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace uloc {

using cplx = std::complex<double>;

namespace detail {

template <typename T, typename F>
T pairwise_reduce(std::size_t lo, std::size_t hi, const F& term)
{
    constexpr std::size_t kBlock = 32;
    if (hi - lo <= kBlock) {
        T acc{};
        for (std::size_t i = lo; i < hi; ++i) acc += term(i);
        return acc;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_reduce<T>(lo, mid, term) + pairwise_reduce<T>(mid, hi, term);
}

} // namespace detail

/// Pairwise sum of term(i) for i in [0, n).
template <typename F>
double pairwise_sum(std::size_t n, const F& term)
{
    if (n == 0) return 0.0;
    return detail::pairwise_reduce<double>(0, n, term);
}

/// Pairwise sum of complex term(i) for i in [0, n).
template <typename F>
cplx pairwise_sum_cplx(std::size_t n, const F& term)
{
    if (n == 0) return cplx{};
    return detail::pairwise_reduce<cplx>(0, n, term);
}

inline double pairwise_sum(std::span<const double> v)
{
    return pairwise_sum(v.size(), [&](std::size_t i) { return v[i]; });
}

inline cplx pairwise_sum(std::span<const cplx> v)
{
    return pairwise_sum_cplx(v.size(), [&](std::size_t i) { return v[i]; });
}

/// Number of worker threads honoring the UL_THREADS cap.
unsigned worker_count();

/// Runs fn(i) for i in [0, n). Each index must be independent of the others;
/// outputs are written to disjoint slots, so the result is schedule-invariant.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace uloc
