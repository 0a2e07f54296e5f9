#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pca/noise.hpp"

namespace pca {

/// Counter-based uniform field: u(t, site, channel) is a pure function of
/// (seed, t, site, channel), so any space-time cell can be queried in any
/// order and replicas with derived seeds are independent streams.
struct RandomField {
    std::uint64_t seed = 0;

    explicit RandomField(std::uint64_t s = 0) : seed(s) {}

    // 53-bit uniform in [0,1)
    double uniform(std::int64_t t, std::span<const std::int64_t> site,
                   std::uint64_t channel = 0) const;
    double uniform(std::int64_t t, const Coord& site, std::uint64_t channel = 0) const {
        return uniform(t, std::span<const std::int64_t>(site), channel);
    }

    RandomField derive(std::uint64_t stream) const;
};

/// Deterministic update u(pattern, v) realizing phi(pattern) from a single
/// uniform v, laid out so that for each output symbol b a shared interval of
/// length min_patterns phi(.|b) comes first across all patterns.  With that
/// layout the same v that yields b from every completion also yields b when
/// the inputs are unknown, which makes the envelope system an upper coupling.
struct UpdateFunction {
    int alphabet_size = 2;
    std::size_t pattern_count = 0;
    // breaks[p] = sorted interval right-endpoints, syms[p] = output per interval
    std::vector<std::vector<double>> breaks;
    std::vector<std::vector<int>> syms;
    std::vector<double> core;  // core[b] = min over patterns of phi(.)(b)

    int eval(std::uint64_t pattern, double v) const;
};

UpdateFunction build_update_function(const PcaRule& phi);

// One synchronous sweep of the PCA via the update function at time t.
Configuration step(const PcaRule& phi, const UpdateFunction& u,
                   const Configuration& x, const RandomField& field,
                   std::int64_t t);

// Glider-style sweep with per-layer channels: apply the deterministic base
// rule, then flip bit i with rate beta_i/delta_i using channel i.  Sharing
// one field between two replicas couples them layerwise with the same
// thresholds.
Configuration step_birth_death(const LocalRule& base, const NoiseKernel& noise,
                               const Configuration& x, const RandomField& field,
                               std::int64_t t);

// Dense transition matrix over all |S|^(L1*..*Ld) torus configurations,
// row-major, rows indexed by extract_window over the full torus.
std::vector<double> exact_transition_matrix(const PcaRule& phi, const Geometry& geom);

// Power iteration on a dense row-stochastic matrix until the l1 residual of
// pi P - pi drops below tol; throws after max_iter sweeps.
std::vector<double> stationary_distribution(const std::vector<double>& P,
                                            std::size_t n, double tol = 1e-12,
                                            std::size_t max_iter = 1000000);

// Markov boundary kernel of a 1D permutive rule along a line of length K:
// P_w(x, z) = prod_k theta(y_k, z_k) where y = local images of x against the
// fixed boundary word w (one pass of the rule with w padding on the right).
std::vector<double> boundary_kernel_matrix(const LocalRule& f,
                                           const NoiseKernel& theta,
                                           std::span<const int> w, int K);

// Dobrushin coefficient: max over row pairs of total variation.
double dobrushin_coefficient(const std::vector<double>& P, std::size_t n);

}  // namespace pca
