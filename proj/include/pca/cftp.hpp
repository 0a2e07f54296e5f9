#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pca/engine.hpp"

namespace pca {

/// Stochastic rule on S u {?} (? = index |S|): the probability of a known
/// output b is the min of phi(.)(b) over all completions of the unknown
/// inputs; the rest of the mass goes to ?.
struct EnvelopeRule {
    Alphabet alphabet;          // extended, size |S|+1
    Neighborhood nbhd;
    std::vector<double> rows;   // pattern-major over (|S|+1)^m, rows of |S|+1

    int unknown() const { return alphabet.size - 1; }
    const double* row(std::uint64_t pattern) const {
        return rows.data() + pattern * alphabet.size;
    }
};

EnvelopeRule envelope_rule(const PcaRule& phi);

// p_?(Phi) = 1 - sum_b min over patterns phi(.)(b): the chance the envelope
// system stays undetermined with fully unknown inputs.
double p_question(const PcaRule& phi);

struct Certificate {
    double p_q = 1.0;       // p_?(Phi)
    std::size_t m = 0;      // |N|
    double bound = 0.0;     // lower bound on the critical density used
    std::string bound_kind; // "branching", "oriented_1d", "three_1d"
    bool ergodic = false;   // p_q < bound
};

// Picks the best known lower bound on the critical density of directed
// site percolation for the given neighborhood shape.
Certificate certify(const PcaRule& phi);

struct NilpotentCertificate {
    int power = 0;          // F^power is constant
    double threshold = 0.0; // 1 / (L M)
    bool ergodic = false;   // epsilon < threshold
};

// Ergodicity of an epsilon-perturbation of a nilpotent CA: with F^n constant
// and m_i = |N^i|, any noise level below 1/(L M), L = m_{n-1} m_n,
// M = m_0 + ... + m_{n-1}, gives ergodicity.
std::optional<NilpotentCertificate> certify_nilpotent(const LocalRule& f,
                                                      double epsilon,
                                                      int max_power = 8);

// Envelope values on the window after running the envelope system from
// all-? at backward depth T over the dependence cone; |S| marks unknown.
std::vector<int> envelope_run(const PcaRule& phi, const UpdateFunction& u,
                              const SiteSet& window, std::int64_t T,
                              const RandomField& field);

struct CftpResult {
    std::uint64_t pattern = 0;  // window pattern, lexicographic index
    std::int64_t horizon = 0;   // backward depth at which coalescence held
};

// Coupling-from-the-past on the window: run the envelope system from all-?
// at time -T for T = 1, 2, 4, ... with one shared random field; returns the
// exact stationary pattern once every window site is determined.
CftpResult cftp_sample(const PcaRule& phi, const SiteSet& window,
                       const RandomField& field, std::int64_t max_horizon = 1 << 20);

// Perfect sample of the stationary marginal at `site` for a spreading rule
// with memoryless noise: explore the backward tree of non-error nodes, with
// lazy cutoff once a spreading-symbol leaf is found.  An exploration that
// exceeds the budget is an (a.s. infinite) cluster and evaluates to the
// spreading symbol.
int spreading_tree_sample(const LocalRule& f, double epsilon,
                          const std::vector<double>& q, const Coord& site,
                          const RandomField& field,
                          std::size_t budget = 1 << 20);

// Perfect sample of the stationary symbol at `site` for the wall/glider
// system (layers W, R, L) under birth-death noise, by backward resolution:
// wall bits via composition of single-bit noise maps until constant,
// particle bits by tracing the incoming trajectory (reflecting at walls)
// until a resolved noise draw.
int glider_walls_sample(const NoiseKernel& noise, std::int64_t site,
                        const RandomField& field,
                        std::int64_t max_horizon = 1 << 20);

}  // namespace pca
