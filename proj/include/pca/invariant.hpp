#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pca/noise.hpp"

namespace pca {

/// Probability measure on patterns over a window with probabilities that are
/// integer multiples of 1/k.
struct RationalWindowMeasure {
    SiteSet window;
    int alphabet_size = 2;
    std::vector<int> counts;  // pattern-indexed, sums to k
    int k = 1;

    double prob(std::uint64_t pattern) const {
        return static_cast<double>(counts[pattern]) / static_cast<double>(k);
    }
};

// All compositions of k into |S|^|C| parts, lexicographic, streamed to fn.
// Throws when the stars-and-bars count exceeds the budget.
void enumerate_measures(const SiteSet& C, int alphabet_size, int k,
                        const std::function<void(const RationalWindowMeasure&)>& fn,
                        std::uint64_t budget = 10000000);

// Exact one-step push of nu (on N(B)) restricted to B, as total variation
// against nu's own B-marginal.
double restricted_invariance_norm(const RationalWindowMeasure& nu,
                                  const PcaRule& phi, const SiteSet& B);

struct InvariantResult {
    double value = 0;
    int m_final = 0;
    int k = 0;
    std::uint64_t candidates_checked = 0;
};

// Approximation of the unique invariant measure's cylinder probability
// pi([w]) on window A to accuracy 1/n: for growing precision m, collect
// rational measures nu on S^{N(B)} with ||nu Phi - nu||_B < 1/m and stop
// once their [w]-values pairwise agree within 1/(2n).  B stays the smallest
// centered box containing A while only the precision grows, which keeps the
// enumeration at desk scale; soundness is unchanged since the true invariant
// marginal lies in every candidate set.
InvariantResult approximate_invariant(const PcaRule& phi, const SiteSet& A,
                                      const std::vector<int>& w, int n,
                                      std::uint64_t budget = 10000000,
                                      bool verbose = false);

}  // namespace pca
