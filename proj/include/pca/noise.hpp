#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pca/rules.hpp"

namespace pca {

/// Single-site noise kernel theta(a, b) = P(output b | input a).
struct NoiseKernel {
    enum class Kind { zero_range, memoryless, additive, permutation, birth_death };

    Kind kind = Kind::memoryless;
    int alphabet_size = 2;

    // memoryless: theta(a,.) = (1-eps) delta_a + eps q
    double epsilon = 0.0;
    std::vector<double> q;

    // additive: theta(a,b) = q(b-a), needs a group alphabet
    // (reuses q above)

    // permutation: theta(a,b) = (1-eps) delta_{sigma(a)}(b) + eps q
    std::vector<int> sigma;

    // birth_death: product over bit layers, rates per layer
    std::vector<double> beta;   // 0 -> 1 rate per layer
    std::vector<double> delta;  // 1 -> 0 rate per layer

    // zero_range / explicit matrix fallback: row-stochastic, row-major
    std::vector<double> matrix_rows;

    static NoiseKernel memoryless_uniform(int n, double eps);
    static NoiseKernel memoryless(int n, double eps, std::vector<double> q);
    static NoiseKernel additive(const Alphabet& a, std::vector<double> q);
    static NoiseKernel permutation(int n, std::vector<int> sigma, double eps,
                                   std::vector<double> q);
    static NoiseKernel birth_death(std::vector<double> beta, std::vector<double> delta);
    static NoiseKernel explicit_matrix(int n, std::vector<double> rows);

    // Dense |S| x |S| row-stochastic matrix, row-major.
    std::vector<double> matrix() const;
    double theta(int a, int b) const;

    void validate(double row_tol = 1e-12) const;
};

/// Stochastic local rule phi : S^m -> distributions over S.  rows are in
/// lexicographic pattern order; each row has |S| probabilities.
struct PcaRule {
    Alphabet alphabet;
    Neighborhood nbhd;
    std::vector<double> rows;  // pattern-major, |S|^m rows of length |S|

    std::optional<LocalRule> base_rule;    // set when built as noise o CA
    std::optional<NoiseKernel> noise;

    std::size_t pattern_count() const { return rows.size() / alphabet.size; }
    const double* row(std::uint64_t pattern) const {
        return rows.data() + pattern * alphabet.size;
    }
    void validate(double row_tol = 1e-12) const;
};

// phi(pattern)(b) = theta(f(pattern), b): zero-range perturbation of f.
PcaRule compose_pca(const LocalRule& f, const NoiseKernel& theta);

// Smallest eps such that phi is an eps-perturbation of f:
// max over inputs of 1 - phi(input)(f(input)).
double is_epsilon_perturbation(const PcaRule& phi, const LocalRule& f);

struct PositivityReport {
    bool positive_rates = false;  // every phi entry > 0
    bool alpha_positive = false;  // phi(.)(alpha) > 0 for every input
};

PositivityReport positivity_checks(const PcaRule& phi, int alpha = -1);

// True when the matrix is doubly stochastic (preserves uniform).
bool is_permutation_noise(const NoiseKernel& theta, double tol = 1e-10);

// min over a of min over b theta(a,b) > 0 etc.; returns the smallest entry.
double min_kernel_entry(const NoiseKernel& theta);

}  // namespace pca
