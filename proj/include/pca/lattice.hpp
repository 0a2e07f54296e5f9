#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pca {

using Coord = std::vector<std::int64_t>;

/// Finite symbol set, with an optional Abelian group structure used by
/// additive noise and additive/affine rules.
struct Alphabet {
    int size = 2;
    // group_table[a*size+b] = a+b; empty when no group structure is attached
    std::vector<int> group_table;
    std::vector<std::string> symbol_names;

    static Alphabet binary();
    static Alphabet plain(int n);
    static Alphabet cyclic(int n);  // Z_n with addition mod n

    bool has_group() const { return !group_table.empty(); }
    int add(int a, int b) const { return group_table[a * size + b]; }
    int neg(int a) const;             // group inverse
    int sub(int a, int b) const { return add(a, neg(b)); }

    // Throws if the table is not a finite Abelian group.
    void validate_group() const;
    bool operator==(const Alphabet&) const = default;
};

/// Ordered, duplicate-free, lexicographically sorted set of lattice sites.
struct SiteSet {
    int dim = 1;
    std::vector<Coord> sites;

    static SiteSet of(int dim, std::vector<Coord> sites);  // sorts, checks dups
    static SiteSet line(std::vector<std::int64_t> xs);     // 1D helper

    std::size_t size() const { return sites.size(); }
    bool operator==(const SiteSet&) const = default;
};

struct Geometry {
    bool torus = true;
    std::vector<std::int64_t> sides;  // side lengths (torus) or box extents
    // Symbol assumed outside a bounded region; -1 means reads outside throw.
    int boundary_symbol = -1;

    int dim() const { return static_cast<int>(sides.size()); }
    std::size_t cell_count() const;
    bool operator==(const Geometry&) const = default;
};

struct Configuration {
    Alphabet alphabet;
    Geometry geom;
    std::vector<std::uint8_t> cells;  // row-major

    static Configuration constant(const Alphabet& a, Geometry g, int symbol);

    std::size_t flat_index(const Coord& site) const;  // torus wrap applied
    int at(const Coord& site) const;                  // boundary-aware read
    bool in_region(const Coord& site) const;
    bool operator==(const Configuration&) const = default;
};

/// Probability vector over S^A, lexicographic pattern order with the first
/// (smallest) site most significant.
struct WindowMeasure {
    SiteSet window;
    int alphabet_size = 2;
    std::vector<double> probs;

    std::size_t pattern_count() const { return probs.size(); }
    void validate(double tol = 1e-12) const;  // nonneg, sums to 1
};

std::uint64_t pattern_index(std::span<const int> symbols, int alphabet_size);
std::vector<int> pattern_symbols(std::uint64_t index, std::size_t window_size,
                                 int alphabet_size);

std::uint64_t extract_window(const Configuration& config, const SiteSet& window);

WindowMeasure empirical_window_measure(const std::vector<Configuration>& samples,
                                       const SiteSet& window);

double total_variation_window(const WindowMeasure& mu, const WindowMeasure& nu);

WindowMeasure uniform_window_measure(const SiteSet& window, const Alphabet& alphabet);

}  // namespace pca
