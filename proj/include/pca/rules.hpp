#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pca/lattice.hpp"

namespace pca {

/// Ordered duplicate-free list of offsets; the offset order fixes the
/// argument order of local rule tables.
struct Neighborhood {
    int dim = 1;
    std::vector<Coord> offsets;

    static Neighborhood of(int dim, std::vector<Coord> offsets);
    static Neighborhood line(std::vector<std::int64_t> xs);

    std::size_t size() const { return offsets.size(); }
    bool operator==(const Neighborhood&) const = default;
};

/// Deterministic local rule f : S^m -> S, table in lexicographic pattern
/// order (first offset most significant).
struct LocalRule {
    Alphabet alphabet;
    Neighborhood nbhd;
    std::vector<std::uint8_t> table;

    int eval(std::span<const int> args) const {
        return table[pattern_index(args, alphabet.size)];
    }
    void validate() const;
};

Configuration apply_ca(const LocalRule& f, const Configuration& x);

// Iterated rule F^p as a single local rule over the dilated neighborhood.
LocalRule compose_power(const LocalRule& f, int p);

// Permutivity in the given argument slot: args -> f(args) bijective in slot.
bool is_permutive(const LocalRule& f, std::size_t slot);

// Classification by the leftmost / rightmost slot of a contiguous 1D rule.
enum class Permutivity { none, left, right, bi };
Permutivity permutivity(const LocalRule& f);

// Symbol s with f(s,...,s)=s and f(args)=s whenever any argument is s,
// if one exists.
std::optional<int> spreading_symbol(const LocalRule& f);

// Exact surjectivity test for 1D rules (subset-automaton reachability).
bool is_surjective_1d(const LocalRule& f);

// If some iterate F^p (p<=max_power) is a constant map, returns {p, symbol}.
std::optional<std::pair<int, int>> is_nilpotent_within(const LocalRule& f,
                                                       int max_power);

// Named example rules; params are rule-specific (see build_zoo source).
LocalRule build_zoo(const std::string& name,
                    const std::map<std::string, double>& params = {});

/// Two-layer glider systems over S = {0,1}^layers, bit-packed: layer i is
/// bit i of the symbol. Movement: a particle on layer i moves by +v_i each
/// step; collisions are resolved by the rule (annihilation or reflection)
/// before movement completes.
struct GliderSpec {
    std::vector<int> velocities;       // one per layer
    bool walls = false;                // layer 0 is a static wall layer
    std::vector<std::pair<int, int>> annihilate;  // layer pairs that cancel
};

LocalRule build_glider_rule(const GliderSpec& spec);

}  // namespace pca
