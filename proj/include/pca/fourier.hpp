#pragma once

#include <map>
#include <vector>

#include "pca/noise.hpp"

namespace pca {

/// Finite linear combination of basis functions indexed by finite site sets,
/// binary alphabet:
///   fourier: chi_A(x) = prod_{k in A} (-1)^{x_k}
///   moebius: chi_A(x) = prod_{k in A} x_k
struct CharacterObservable {
    enum class Basis { fourier, moebius };
    Basis basis = Basis::fourier;
    int dim = 1;
    std::map<std::vector<Coord>, double> coeffs;  // key: sorted site list
};

// One basis function evaluated on a configuration.
double char_eval(CharacterObservable::Basis basis, const std::vector<Coord>& A,
                 const Configuration& x);

// Full observable evaluated on a configuration.
double observable_eval(const CharacterObservable& h, const Configuration& x);

// Expansion of the cylinder indicator 1_[u] (symbols u on the window) in the
// chosen basis.
CharacterObservable observable_to_basis(CharacterObservable::Basis basis,
                                        const SiteSet& window,
                                        const std::vector<int>& symbols);

// Index pull-back through an additive rule: chi_A o F = +/- chi_{F*A} in the
// fourier basis; F*A keeps the sites of {a + n} hit an odd number of times.
// Throws when the rule is not affine over Z_2.
std::vector<Coord> f_star(const LocalRule& f, const std::vector<Coord>& A);

// chi_A o F expanded in the chosen basis (moebius handles any binary rule).
CharacterObservable pull_back(const LocalRule& f,
                              CharacterObservable::Basis basis,
                              const std::vector<Coord>& A);

// One transfer step on a single index: chi_A -> E[chi_A(F(Theta x))],
// i.e. pull the index back through F, then average each site over the
// single-site noise.  Noise rows must be ((1-p, p), (q, 1-q)).
CharacterObservable pca_on_character(const PcaRule& phi,
                                     CharacterObservable::Basis basis,
                                     const std::vector<Coord>& A);

// Linear extension of pca_on_character to observables.
CharacterObservable pca_on_observable(const PcaRule& phi,
                                      const CharacterObservable& h);

// Sum of absolute coefficients over nonempty index sets.
double seminorm(const CharacterObservable& h);

// Per-site damping rate of the noise in the chosen basis:
//   fourier: |q-p| + |1-p-q|,   moebius: p + |1-p-q|.
double contraction_coefficient(const PcaRule& phi,
                               CharacterObservable::Basis basis);

// Closed-form seminorm of the noise-averaged single index of size n:
//   fourier: (|q-p|+|1-p-q|)^n - |q-p|^n
//   moebius: (p+|1-p-q|)^n - p^n
double single_index_seminorm(double p01, double p10, int n,
                             CharacterObservable::Basis basis);

}  // namespace pca
