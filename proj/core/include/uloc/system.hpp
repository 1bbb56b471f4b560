// Ordered families of sampled functions with a Gram-matrix audit.
#pragma once

#include <vector>

#include "uloc/grid.hpp"

namespace uloc {

struct GramAudit {
    double maxOffDiagonal = 0.0;
    double maxDiagonalDeviation = 0.0;

    double residual() const { return std::max(maxOffDiagonal, maxDiagonalDeviation); }
};

class OrthonormalSystem {
public:
    OrthonormalSystem(std::vector<SampledFunction> members, double gramTolerance = 1e-8,
                      bool enforce = true);

    const std::vector<SampledFunction>& members() const { return members_; }
    const SampledFunction& member(std::size_t i) const { return members_[i]; }
    std::size_t size() const { return members_.size(); }
    const GridSpec& grid() const { return members_.front().grid(); }
    double gramTolerance() const { return gramTolerance_; }
    const GramAudit& gramAudit() const { return audit_; }

    /// Recomputes the Gram audit (parallel over pairs, deterministic).
    GramAudit recomputeGram() const;

private:
    std::vector<SampledFunction> members_;
    double gramTolerance_;
    GramAudit audit_;
};

/// Gram audit for an arbitrary family (no tolerance enforcement).
GramAudit gram_audit(const std::vector<SampledFunction>& members);

} // namespace uloc
