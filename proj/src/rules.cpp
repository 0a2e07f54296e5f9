#include "pca/rules.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace pca {

Neighborhood Neighborhood::of(int dim, std::vector<Coord> offsets) {
    for (const Coord& o : offsets)
        if (static_cast<int>(o.size()) != dim)
            throw std::invalid_argument("offset dimension mismatch");
    std::vector<Coord> sorted = offsets;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("duplicate neighborhood offset");
    Neighborhood n;
    n.dim = dim;
    n.offsets = std::move(offsets);
    return n;
}

Neighborhood Neighborhood::line(std::vector<std::int64_t> xs) {
    std::vector<Coord> offsets;
    for (auto x : xs) offsets.push_back({x});
    return of(1, std::move(offsets));
}

void LocalRule::validate() const {
    std::uint64_t npat = 1;
    for (std::size_t i = 0; i < nbhd.size(); ++i) npat *= alphabet.size;
    if (table.size() != npat) throw std::invalid_argument("rule table wrong length");
    for (auto b : table)
        if (b >= alphabet.size) throw std::invalid_argument("rule output out of range");
}

Configuration apply_ca(const LocalRule& f, const Configuration& x) {
    if (x.alphabet.size != f.alphabet.size)
        throw std::invalid_argument("alphabet mismatch");
    Configuration y = x;
    const int d = x.geom.dim();
    const std::size_t m = f.nbhd.size();
    std::vector<int> args(m);
    Coord site(d, 0), nb(d, 0);
    std::size_t idx = 0;
    // odometer over sites, row-major to match flat_index
    while (true) {
        for (std::size_t j = 0; j < m; ++j) {
            for (int i = 0; i < d; ++i) nb[i] = site[i] + f.nbhd.offsets[j][i];
            args[j] = x.at(nb);
        }
        y.cells[idx] = static_cast<std::uint8_t>(f.eval(args));
        ++idx;
        int i = d - 1;
        for (; i >= 0; --i) {
            if (++site[i] < x.geom.sides[i]) break;
            site[i] = 0;
        }
        if (i < 0) break;
    }
    return y;
}

namespace {

Coord coord_add(const Coord& a, const Coord& b) {
    Coord c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

}  // namespace

LocalRule compose_power(const LocalRule& f, int p) {
    if (p < 1) throw std::invalid_argument("power must be >= 1");
    if (p == 1) return f;
    LocalRule g = compose_power(f, p - 1);
    // N(f^p) = N(f) + N(g); evaluate f on g-values at each f-offset
    std::set<Coord> off_set;
    for (const Coord& a : f.nbhd.offsets)
        for (const Coord& b : g.nbhd.offsets) off_set.insert(coord_add(a, b));
    std::vector<Coord> offsets(off_set.begin(), off_set.end());
    const std::size_t M = offsets.size();
    double npat_d = std::pow(static_cast<double>(f.alphabet.size),
                             static_cast<double>(M));
    if (npat_d > 1e8) throw std::runtime_error("composed rule table too large");
    std::uint64_t npat = 1;
    for (std::size_t i = 0; i < M; ++i) npat *= f.alphabet.size;

    // precompute, for each f-offset and g-offset, the slot in `offsets`
    std::vector<std::vector<std::size_t>> slot(f.nbhd.size());
    for (std::size_t j = 0; j < f.nbhd.size(); ++j)
        for (const Coord& b : g.nbhd.offsets) {
            Coord c = coord_add(f.nbhd.offsets[j], b);
            auto it = std::lower_bound(offsets.begin(), offsets.end(), c);
            slot[j].push_back(static_cast<std::size_t>(it - offsets.begin()));
        }

    LocalRule out;
    out.alphabet = f.alphabet;
    out.nbhd = Neighborhood::of(f.nbhd.dim, offsets);
    out.table.resize(npat);
    std::vector<int> pat, gargs(g.nbhd.size()), fargs(f.nbhd.size());
    for (std::uint64_t idx = 0; idx < npat; ++idx) {
        pat = pattern_symbols(idx, M, f.alphabet.size);
        for (std::size_t j = 0; j < f.nbhd.size(); ++j) {
            for (std::size_t k = 0; k < g.nbhd.size(); ++k)
                gargs[k] = pat[slot[j][k]];
            fargs[j] = g.eval(gargs);
        }
        out.table[idx] = static_cast<std::uint8_t>(f.eval(fargs));
    }
    return out;
}

bool is_permutive(const LocalRule& f, std::size_t slot) {
    if (slot >= f.nbhd.size()) throw std::invalid_argument("slot out of range");
    const int S = f.alphabet.size;
    const std::size_t m = f.nbhd.size();
    std::uint64_t nrest = 1;
    for (std::size_t i = 0; i + 1 < m; ++i) nrest *= S;
    std::vector<int> args(m);
    for (std::uint64_t r = 0; r < nrest; ++r) {
        std::vector<int> rest = pattern_symbols(r, m - 1, S);
        std::size_t k = 0;
        for (std::size_t i = 0; i < m; ++i)
            if (i != slot) args[i] = rest[k++];
        std::vector<bool> hit(S, false);
        for (int a = 0; a < S; ++a) {
            args[slot] = a;
            int b = f.eval(args);
            if (hit[b]) return false;
            hit[b] = true;
        }
    }
    return true;
}

Permutivity permutivity(const LocalRule& f) {
    if (f.nbhd.dim != 1)
        throw std::invalid_argument("permutivity classification is 1D only");
    std::vector<std::int64_t> off;
    for (const Coord& o : f.nbhd.offsets) off.push_back(o[0]);
    std::vector<std::int64_t> sorted = off;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i] != sorted[i - 1] + 1)
            throw std::invalid_argument("neighborhood must be contiguous");
    std::size_t lslot = static_cast<std::size_t>(
        std::find(off.begin(), off.end(), sorted.front()) - off.begin());
    std::size_t rslot = static_cast<std::size_t>(
        std::find(off.begin(), off.end(), sorted.back()) - off.begin());
    bool l = is_permutive(f, lslot), r = is_permutive(f, rslot);
    if (l && r) return Permutivity::bi;
    if (l) return Permutivity::left;
    if (r) return Permutivity::right;
    return Permutivity::none;
}

std::optional<int> spreading_symbol(const LocalRule& f) {
    const int S = f.alphabet.size;
    const std::size_t m = f.nbhd.size();
    std::uint64_t npat = 1;
    for (std::size_t i = 0; i < m; ++i) npat *= S;
    for (int s = 0; s < S; ++s) {
        bool ok = true;
        for (std::uint64_t idx = 0; idx < npat && ok; ++idx) {
            std::vector<int> pat = pattern_symbols(idx, m, S);
            bool has_s = std::find(pat.begin(), pat.end(), s) != pat.end();
            if (has_s && f.table[idx] != s) ok = false;
        }
        if (ok) return s;
    }
    return std::nullopt;
}

bool is_surjective_1d(const LocalRule& f) {
    if (f.nbhd.dim != 1) throw std::invalid_argument("surjectivity test is 1D only");
    const int S = f.alphabet.size;
    const std::size_t m = f.nbhd.size();
    if (m == 1) {
        std::vector<bool> hit(S, false);
        for (auto b : f.table) hit[b] = true;
        return std::find(hit.begin(), hit.end(), false) == hit.end();
    }
    // de Bruijn states are words in S^{m-1}; subset construction from the
    // full state set; surjective iff the empty subset is unreachable
    std::uint64_t nstates = 1;
    for (std::size_t i = 0; i + 1 < m; ++i) nstates *= S;
    if (nstates > 20) throw std::runtime_error("surjectivity state space too large");
    using Subset = std::uint64_t;  // bitmask over de Bruijn states
    const Subset full = (nstates == 64) ? ~Subset(0) : ((Subset(1) << nstates) - 1);
    // trans[w][b] = set of successor states of w under output symbol b
    std::vector<std::vector<Subset>> trans(nstates, std::vector<Subset>(S, 0));
    std::vector<int> word(m);
    for (std::uint64_t w = 0; w < nstates; ++w) {
        std::vector<int> pre = pattern_symbols(w, m - 1, S);
        for (std::size_t i = 0; i + 1 < m; ++i) word[i] = pre[i];
        for (int a = 0; a < S; ++a) {
            word[m - 1] = a;
            int b = f.eval(word);
            std::uint64_t w2 = (w % (nstates / S)) * S + static_cast<std::uint64_t>(a);
            trans[w][b] |= Subset(1) << w2;
        }
    }
    std::set<Subset> seen{full};
    std::vector<Subset> frontier{full};
    while (!frontier.empty()) {
        std::vector<Subset> next;
        for (Subset T : frontier)
            for (int b = 0; b < S; ++b) {
                Subset T2 = 0;
                for (std::uint64_t w = 0; w < nstates; ++w)
                    if (T & (Subset(1) << w)) T2 |= trans[w][b];
                if (T2 == 0) return false;
                if (seen.insert(T2).second) next.push_back(T2);
            }
        frontier = std::move(next);
    }
    return true;
}

std::optional<std::pair<int, int>> is_nilpotent_within(const LocalRule& f,
                                                       int max_power) {
    for (int p = 1; p <= max_power; ++p) {
        LocalRule g = compose_power(f, p);
        if (std::all_of(g.table.begin(), g.table.end(),
                        [&](std::uint8_t b) { return b == g.table[0]; }))
            return std::make_pair(p, static_cast<int>(g.table[0]));
    }
    return std::nullopt;
}

LocalRule build_glider_rule(const GliderSpec& spec) {
    const int layers = static_cast<int>(spec.velocities.size());
    if (layers < 1 || layers > 6) throw std::invalid_argument("bad layer count");
    if (spec.walls &&
        !(layers == 3 && spec.velocities[0] == 0 && spec.velocities[1] == 1 &&
          spec.velocities[2] == -1))
        throw std::invalid_argument("wall systems need layers W(0), R(+1), L(-1)");
    std::set<std::int64_t> off{0};
    for (int v : spec.velocities) off.insert(-static_cast<std::int64_t>(v));
    std::vector<std::int64_t> xs(off.begin(), off.end());
    LocalRule f;
    f.alphabet = Alphabet::plain(1 << layers);
    f.nbhd = Neighborhood::line(xs);
    const std::size_t m = f.nbhd.size();
    std::uint64_t npat = 1;
    for (std::size_t i = 0; i < m; ++i) npat *= f.alphabet.size;
    f.table.resize(npat);
    // slot of offset -v_i in the neighborhood, per layer
    std::vector<std::size_t> src(layers);
    for (int i = 0; i < layers; ++i)
        src[i] = static_cast<std::size_t>(
            std::lower_bound(xs.begin(), xs.end(), -spec.velocities[i]) - xs.begin());
    std::size_t self = static_cast<std::size_t>(
        std::lower_bound(xs.begin(), xs.end(), 0) - xs.begin());
    for (std::uint64_t idx = 0; idx < npat; ++idx) {
        std::vector<int> pat = pattern_symbols(idx, m, f.alphabet.size);
        int out = 0;
        for (int i = 0; i < layers; ++i)
            out |= ((pat[src[i]] >> i) & 1) << i;  // particles move by +v_i
        if (spec.walls) {
            int wall = (pat[self] >> 0) & 1;  // wall layer is static
            out = (out & ~1) | wall;
            if (wall) {
                int r = (out >> 1) & 1, l = (out >> 2) & 1;
                out = (out & 1) | (l << 1) | (r << 2);  // reflect at walls
            }
        }
        for (auto [a, b] : spec.annihilate)
            if (((out >> a) & 1) && ((out >> b) & 1))
                out &= ~((1 << a) | (1 << b));  // annihilate on arrival
        f.table[idx] = static_cast<std::uint8_t>(out);
    }
    return f;
}

LocalRule build_zoo(const std::string& name,
                    const std::map<std::string, double>& params) {
    auto get = [&](const std::string& k, double dflt) {
        auto it = params.find(k);
        return it == params.end() ? dflt : it->second;
    };
    auto from_table = [](Alphabet a, Neighborhood n,
                         std::vector<std::uint8_t> t) {
        LocalRule f{std::move(a), std::move(n), std::move(t)};
        f.validate();
        return f;
    };
    if (name == "xor") {
        return from_table(Alphabet::binary(), Neighborhood::line({0, 1}),
                          {0, 1, 1, 0});
    }
    if (name == "additive_affine") {
        int n = static_cast<int>(get("n", 2));
        int m = static_cast<int>(get("m", 2));
        int c = static_cast<int>(get("c", 0));
        Alphabet a = Alphabet::cyclic(n);
        std::vector<std::int64_t> xs(m);
        for (int i = 0; i < m; ++i) xs[i] = i;
        std::vector<int> coeff(m);
        for (int i = 0; i < m; ++i)
            coeff[i] = static_cast<int>(get("k" + std::to_string(i), 1)) % n;
        std::uint64_t npat = 1;
        for (int i = 0; i < m; ++i) npat *= n;
        std::vector<std::uint8_t> t(npat);
        for (std::uint64_t idx = 0; idx < npat; ++idx) {
            std::vector<int> pat = pattern_symbols(idx, m, n);
            int v = c % n;
            for (int i = 0; i < m; ++i) v = (v + coeff[i] * pat[i]) % n;
            t[idx] = static_cast<std::uint8_t>(v);
        }
        return from_table(a, Neighborhood::line(xs), std::move(t));
    }
    if (name == "spreading_binary") {
        // AND over {0,1}: symbol 0 spreads
        return from_table(Alphabet::binary(), Neighborhood::line({0, 1}),
                          {0, 0, 0, 1});
    }
    if (name == "spreading_product") {
        Alphabet a = Alphabet::cyclic(3);
        std::vector<std::uint8_t> t(27);
        for (std::uint64_t idx = 0; idx < 27; ++idx) {
            std::vector<int> p = pattern_symbols(idx, 3, 3);
            t[idx] = static_cast<std::uint8_t>((p[0] * p[1] * p[2]) % 3);
        }
        return from_table(a, Neighborhood::line({-1, 0, 1}), std::move(t));
    }
    if (name == "nilpotent_demo") {
        // f(a,b) = max(a,b)-1 clamped at 0; F^2 is constant 0
        Alphabet a = Alphabet::plain(3);
        std::vector<std::uint8_t> t(9);
        for (std::uint64_t idx = 0; idx < 9; ++idx) {
            std::vector<int> p = pattern_symbols(idx, 2, 3);
            t[idx] = static_cast<std::uint8_t>(std::max(std::max(p[0], p[1]) - 1, 0));
        }
        return from_table(a, Neighborhood::line({0, 1}), std::move(t));
    }
    if (name == "majority1d") {
        std::vector<std::uint8_t> t(8);
        for (std::uint64_t idx = 0; idx < 8; ++idx) {
            std::vector<int> p = pattern_symbols(idx, 3, 2);
            t[idx] = static_cast<std::uint8_t>((p[0] + p[1] + p[2]) >= 2 ? 1 : 0);
        }
        return from_table(Alphabet::binary(), Neighborhood::line({-1, 0, 1}),
                          std::move(t));
    }
    if (name == "nec_majority") {
        Neighborhood n = Neighborhood::of(2, {{0, 0}, {0, 1}, {1, 0}});
        std::vector<std::uint8_t> t(8);
        for (std::uint64_t idx = 0; idx < 8; ++idx) {
            std::vector<int> p = pattern_symbols(idx, 3, 2);
            t[idx] = static_cast<std::uint8_t>((p[0] + p[1] + p[2]) >= 2 ? 1 : 0);
        }
        return from_table(Alphabet::binary(), std::move(n), std::move(t));
    }
    if (name == "permutive_demo") {
        // f(x,y,z) = x + y*z mod 3; permutive in the leftmost slot
        Alphabet a = Alphabet::cyclic(3);
        std::vector<std::uint8_t> t(27);
        for (std::uint64_t idx = 0; idx < 27; ++idx) {
            std::vector<int> p = pattern_symbols(idx, 3, 3);
            t[idx] = static_cast<std::uint8_t>((p[0] + p[1] * p[2]) % 3);
        }
        return from_table(a, Neighborhood::line({-1, 0, 1}), std::move(t));
    }
    if (name == "gliders_annihilation") {
        GliderSpec s;
        s.velocities = {1, -1};
        s.annihilate = {{0, 1}};
        return build_glider_rule(s);
    }
    if (name == "gliders_walls") {
        GliderSpec s;
        s.velocities = {0, 1, -1};
        s.walls = true;
        return build_glider_rule(s);
    }
    throw std::invalid_argument("unknown zoo rule: " + name);
}

}  // namespace pca
