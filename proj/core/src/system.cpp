#include "uloc/system.hpp"

#include <cmath>

namespace uloc {

GramAudit gram_audit(const std::vector<SampledFunction>& members)
{
    GramAudit audit;
    const std::size_t m = members.size();
    if (m == 0) return audit;
    std::vector<double> offdiag(m, 0.0);
    std::vector<double> diagdev(m, 0.0);
    parallel_for(m, [&](std::size_t i) {
        diagdev[i] = std::abs(inner_product(members[i], members[i]) - 1.0);
        double worst = 0.0;
        for (std::size_t j = i + 1; j < m; ++j)
            worst = std::max(worst, std::abs(inner_product(members[i], members[j])));
        offdiag[i] = worst;
    });
    for (std::size_t i = 0; i < m; ++i) {
        audit.maxOffDiagonal = std::max(audit.maxOffDiagonal, offdiag[i]);
        audit.maxDiagonalDeviation = std::max(audit.maxDiagonalDeviation, diagdev[i]);
    }
    return audit;
}

OrthonormalSystem::OrthonormalSystem(std::vector<SampledFunction> members, double gramTolerance,
                                     bool enforce)
    : members_(std::move(members)), gramTolerance_(gramTolerance)
{
    if (members_.empty()) throw Error("orthonormal system needs at least one member");
    for (const SampledFunction& f : members_) {
        if (!(f.grid() == members_.front().grid()) || f.domain() != members_.front().domain())
            throw GridMismatchError("system members must share one grid and domain");
    }
    audit_ = gram_audit(members_);
    if (enforce && audit_.residual() > gramTolerance_)
        throw NotOrthonormalError("system Gram deviates from identity by " +
                                  std::to_string(audit_.residual()));
}

GramAudit OrthonormalSystem::recomputeGram() const { return gram_audit(members_); }

} // namespace uloc
