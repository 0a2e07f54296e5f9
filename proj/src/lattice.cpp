#include "pca/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace pca {

Alphabet Alphabet::binary() { return cyclic(2); }

Alphabet Alphabet::plain(int n) {
    if (n < 1) throw std::invalid_argument("alphabet size must be positive");
    Alphabet a;
    a.size = n;
    for (int i = 0; i < n; ++i) a.symbol_names.push_back(std::to_string(i));
    return a;
}

Alphabet Alphabet::cyclic(int n) {
    Alphabet a = plain(n);
    a.group_table.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a.group_table[i * n + j] = (i + j) % n;
    return a;
}

int Alphabet::neg(int a) const {
    for (int b = 0; b < size; ++b)
        if (add(a, b) == 0 && add(b, a) == 0) return b;
    throw std::logic_error("no inverse; group table invalid");
}

void Alphabet::validate_group() const {
    if (!has_group()) throw std::invalid_argument("no group table attached");
    if (group_table.size() != static_cast<std::size_t>(size) * size)
        throw std::invalid_argument("group table has wrong shape");
    for (int v : group_table)
        if (v < 0 || v >= size) throw std::invalid_argument("group table entry out of range");
    // identity 0, commutativity, associativity, inverses — by enumeration
    for (int a = 0; a < size; ++a) {
        if (add(0, a) != a || add(a, 0) != a)
            throw std::invalid_argument("0 is not the identity");
        for (int b = 0; b < size; ++b) {
            if (add(a, b) != add(b, a)) throw std::invalid_argument("not commutative");
            for (int c = 0; c < size; ++c)
                if (add(add(a, b), c) != add(a, add(b, c)))
                    throw std::invalid_argument("not associative");
        }
        neg(a);  // throws when no inverse exists
    }
}

SiteSet SiteSet::of(int dim, std::vector<Coord> sites) {
    for (const Coord& s : sites)
        if (static_cast<int>(s.size()) != dim)
            throw std::invalid_argument("site dimension mismatch");
    std::sort(sites.begin(), sites.end());
    if (std::adjacent_find(sites.begin(), sites.end()) != sites.end())
        throw std::invalid_argument("duplicate site in window");
    SiteSet w;
    w.dim = dim;
    w.sites = std::move(sites);
    return w;
}

SiteSet SiteSet::line(std::vector<std::int64_t> xs) {
    std::vector<Coord> sites;
    for (auto x : xs) sites.push_back({x});
    return of(1, std::move(sites));
}

std::size_t Geometry::cell_count() const {
    std::size_t n = 1;
    for (auto s : sides) {
        if (s <= 0) throw std::invalid_argument("nonpositive side length");
        n *= static_cast<std::size_t>(s);
    }
    return n;
}

Configuration Configuration::constant(const Alphabet& a, Geometry g, int symbol) {
    if (symbol < 0 || symbol >= a.size)
        throw std::invalid_argument("symbol out of range");
    Configuration c;
    c.alphabet = a;
    c.geom = std::move(g);
    c.cells.assign(c.geom.cell_count(), static_cast<std::uint8_t>(symbol));
    return c;
}

std::size_t Configuration::flat_index(const Coord& site) const {
    if (static_cast<int>(site.size()) != geom.dim())
        throw std::invalid_argument("coordinate dimension mismatch");
    std::size_t idx = 0;
    for (int i = 0; i < geom.dim(); ++i) {
        std::int64_t L = geom.sides[i];
        std::int64_t x = site[i];
        if (geom.torus) {
            x %= L;
            if (x < 0) x += L;
        } else if (x < 0 || x >= L) {
            throw std::out_of_range("site outside bounded region");
        }
        idx = idx * static_cast<std::size_t>(L) + static_cast<std::size_t>(x);
    }
    return idx;
}

bool Configuration::in_region(const Coord& site) const {
    if (geom.torus) return true;
    for (int i = 0; i < geom.dim(); ++i)
        if (site[i] < 0 || site[i] >= geom.sides[i]) return false;
    return true;
}

int Configuration::at(const Coord& site) const {
    if (!in_region(site)) {
        if (geom.boundary_symbol < 0)
            throw std::out_of_range("read outside region with no boundary symbol");
        return geom.boundary_symbol;
    }
    return cells[flat_index(site)];
}

void WindowMeasure::validate(double tol) const {
    std::uint64_t expect = 1;
    for (std::size_t i = 0; i < window.size(); ++i) expect *= alphabet_size;
    if (probs.size() != expect)
        throw std::invalid_argument("probability vector has wrong length");
    double sum = 0;
    for (double p : probs) {
        if (p < -tol) throw std::invalid_argument("negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > tol)
        throw std::invalid_argument("probabilities do not sum to 1");
}

std::uint64_t pattern_index(std::span<const int> symbols, int alphabet_size) {
    std::uint64_t idx = 0;
    for (int s : symbols) {
        if (s < 0 || s >= alphabet_size)
            throw std::invalid_argument("symbol out of range");
        idx = idx * alphabet_size + static_cast<std::uint64_t>(s);
    }
    return idx;
}

std::vector<int> pattern_symbols(std::uint64_t index, std::size_t window_size,
                                 int alphabet_size) {
    std::vector<int> out(window_size, 0);
    for (std::size_t i = window_size; i-- > 0;) {
        out[i] = static_cast<int>(index % alphabet_size);
        index /= alphabet_size;
    }
    if (index != 0) throw std::invalid_argument("pattern index out of range");
    return out;
}

std::uint64_t extract_window(const Configuration& config, const SiteSet& window) {
    std::uint64_t idx = 0;
    for (const Coord& s : window.sites)
        idx = idx * config.alphabet.size + static_cast<std::uint64_t>(config.at(s));
    return idx;
}

WindowMeasure empirical_window_measure(const std::vector<Configuration>& samples,
                                       const SiteSet& window) {
    if (samples.empty()) throw std::invalid_argument("no samples");
    WindowMeasure mu;
    mu.window = window;
    mu.alphabet_size = samples.front().alphabet.size;
    std::uint64_t npat = 1;
    for (std::size_t i = 0; i < window.size(); ++i) npat *= mu.alphabet_size;
    mu.probs.assign(npat, 0.0);
    for (const Configuration& c : samples) mu.probs[extract_window(c, window)] += 1.0;
    for (double& p : mu.probs) p /= static_cast<double>(samples.size());
    return mu;
}

double total_variation_window(const WindowMeasure& mu, const WindowMeasure& nu) {
    if (mu.window != nu.window || mu.alphabet_size != nu.alphabet_size)
        throw std::invalid_argument("window mismatch in total variation");
    double s = 0;
    for (std::size_t i = 0; i < mu.probs.size(); ++i)
        s += std::abs(mu.probs[i] - nu.probs[i]);
    return 0.5 * s;
}

WindowMeasure uniform_window_measure(const SiteSet& window, const Alphabet& alphabet) {
    WindowMeasure mu;
    mu.window = window;
    mu.alphabet_size = alphabet.size;
    std::uint64_t npat = 1;
    for (std::size_t i = 0; i < window.size(); ++i) npat *= alphabet.size;
    mu.probs.assign(npat, 1.0 / static_cast<double>(npat));
    return mu;
}

}  // namespace pca
