#pragma once

#include <string>
#include <vector>

#include "pca/cftp.hpp"

namespace pca {

struct DecayCurve {
    std::vector<std::int64_t> times;
    std::vector<double> values;
    std::vector<double> stderrs;
    std::vector<double> envelope;  // analytic bound when one is known
    std::string label;
};

struct EntropyReport {
    std::vector<std::size_t> window_sizes;
    std::vector<double> block_entropies;   // nats
    std::vector<double> per_site;          // block entropy / window size
};

// Pairwise max of empirical window TV between the runs started from each
// initial configuration, per time step; replicas share derived field streams.
DecayCurve tv_decay(const PcaRule& phi, const SiteSet& window,
                    const std::vector<Configuration>& inits,
                    std::int64_t horizon, std::size_t replicas,
                    const RandomField& field);

// Fraction of seeds whose envelope run from all-? at depth t leaves some ?
// in the window (1 - p_t).
DecayCurve coupling_decay(const PcaRule& phi, const SiteSet& window,
                          std::int64_t horizon, std::size_t seeds,
                          const RandomField& field);

// Coupled forward runs of a glider system under shared birth-death noise;
// mean discrepancy at `site` (count of differing layers) per t, with the
// analytic envelope (1-eps)^t (2rt+1)^d N attached.
DecayCurve discrepancy_decay(const LocalRule& base, const NoiseKernel& noise,
                             const Configuration& x0, const Configuration& y0,
                             const Coord& site, std::int64_t horizon,
                             std::size_t replicas, const RandomField& field);

// Plug-in block entropies (nats) on centered 1D windows of the given sizes.
EntropyReport block_entropy(const std::vector<Configuration>& samples,
                            const std::vector<std::size_t>& window_sizes);

// Exact push of a distribution on S^{N(J)} through a 1D rule; checks
// H((FX)_J) >= H(X_J) - 6 r log|S| for each trial distribution.
// The input window is J + N; trial probabilities are pattern-indexed over it.
std::vector<bool> entropy_defect_check(const LocalRule& f, const SiteSet& J,
                                       const std::vector<std::vector<double>>& trials);

// Entropy of a pattern distribution, nats.
double entropy_nats(const std::vector<double>& probs);

// Marginal of a window measure on a subset of its sites.
WindowMeasure restrict_window(const WindowMeasure& mu, const SiteSet& sub);

// Law of (FX)_J when X has law mu on the window J + N (exact enumeration).
WindowMeasure push_forward_window(const LocalRule& f, const WindowMeasure& mu,
                                  const SiteSet& J);

// min over gridded single-site distributions p with H(p) <= log|S| - eps of
// H(theta-push p) - H(p); the grid minimum approximates the gain delta(eps).
double entropy_gain_bound(const NoiseKernel& theta, double eps,
                          double resolution = 1e-3);

// rho(eps) = [eps / (2 hmax - eps)] * delta(eps/2), from the grid bound.
double entropy_contraction_rate(const NoiseKernel& theta, double eps,
                                double resolution = 1e-3);

// |pi([u] cap sigma^{-k}[v]) - pi([u]) pi([v])| per shift, estimated from
// stationary samples; stderr via binomial bounds.
DecayCurve correlation_decay(const std::vector<Configuration>& samples,
                             const SiteSet& u_window, const std::vector<int>& u,
                             const SiteSet& v_window, const std::vector<int>& v,
                             const std::vector<std::int64_t>& shifts);

// Directed site percolation from the origin: each space-time site open with
// probability p, offspring of j are {j - n}; survival frequency to the horizon.
double percolation_survival(double p, const Neighborhood& nbhd,
                            std::int64_t horizon, std::size_t trials,
                            const RandomField& field);

}  // namespace pca
