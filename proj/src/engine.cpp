#include "pca/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pca {

namespace {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

double RandomField::uniform(std::int64_t t, std::span<const std::int64_t> site,
                            std::uint64_t channel) const {
    std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc908ULL);
    h = mix64(h ^ static_cast<std::uint64_t>(t));
    for (std::int64_t x : site) h = mix64(h ^ static_cast<std::uint64_t>(x));
    h = mix64(h ^ channel);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

RandomField RandomField::derive(std::uint64_t stream) const {
    return RandomField(mix64(seed ^ mix64(stream ^ 0x3c6ef372fe94f82bULL)));
}

int UpdateFunction::eval(std::uint64_t pattern, double v) const {
    const auto& b = breaks[pattern];
    std::size_t i = static_cast<std::size_t>(
        std::upper_bound(b.begin(), b.end(), v) - b.begin());
    if (i >= b.size()) i = b.size() - 1;  // v inside the last interval
    return syms[pattern][i];
}

UpdateFunction build_update_function(const PcaRule& phi) {
    phi.validate();
    const int S = phi.alphabet.size;
    const std::size_t npat = phi.pattern_count();
    UpdateFunction u;
    u.alphabet_size = S;
    u.pattern_count = npat;
    u.core.assign(S, 1.0);
    for (std::size_t p = 0; p < npat; ++p)
        for (int b = 0; b < S; ++b)
            u.core[b] = std::min(u.core[b], phi.row(p)[b]);
    u.breaks.resize(npat);
    u.syms.resize(npat);
    for (std::size_t p = 0; p < npat; ++p) {
        double acc = 0;
        // shared core intervals first (same position for every pattern),
        // then the pattern-specific remainders
        for (int b = 0; b < S; ++b) {
            if (u.core[b] <= 0) continue;
            acc += u.core[b];
            u.breaks[p].push_back(acc);
            u.syms[p].push_back(b);
        }
        for (int b = 0; b < S; ++b) {
            double rem = phi.row(p)[b] - u.core[b];
            if (rem <= 0) continue;
            acc += rem;
            u.breaks[p].push_back(acc);
            u.syms[p].push_back(b);
        }
        u.breaks[p].back() = 1.0;  // absorb rounding in the last interval
    }
    return u;
}

Configuration step(const PcaRule& phi, const UpdateFunction& u,
                   const Configuration& x, const RandomField& field,
                   std::int64_t t) {
    Configuration y = x;
    const int d = x.geom.dim();
    const std::size_t m = phi.nbhd.size();
    Coord site(d, 0), nb(d, 0);
    std::size_t idx = 0;
    while (true) {
        std::uint64_t pattern = 0;
        for (std::size_t j = 0; j < m; ++j) {
            for (int i = 0; i < d; ++i) nb[i] = site[i] + phi.nbhd.offsets[j][i];
            pattern = pattern * phi.alphabet.size +
                      static_cast<std::uint64_t>(x.at(nb));
        }
        double v = field.uniform(t, site, 0);
        y.cells[idx] = static_cast<std::uint8_t>(u.eval(pattern, v));
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

Configuration step_birth_death(const LocalRule& base, const NoiseKernel& noise,
                               const Configuration& x, const RandomField& field,
                               std::int64_t t) {
    if (noise.kind != NoiseKernel::Kind::birth_death)
        throw std::invalid_argument("birth_death kernel required");
    const int layers = static_cast<int>(noise.beta.size());
    if (base.alphabet.size != (1 << layers))
        throw std::invalid_argument("alphabet / layer mismatch");
    Configuration y = apply_ca(base, x);
    const int d = x.geom.dim();
    Coord site(d, 0);
    std::size_t idx = 0;
    while (true) {
        int sym = y.cells[idx];
        int out = 0;
        for (int i = 0; i < layers; ++i) {
            int bit = (sym >> i) & 1;
            double v = field.uniform(t, site, static_cast<std::uint64_t>(i));
            // new bit 1 iff v < (bit ? 1-delta : beta); two replicas sharing
            // the field disagree on a layer with prob min(b+d, 2-(b+d))
            out |= (v < (bit ? 1.0 - noise.delta[i] : noise.beta[i]) ? 1 : 0) << i;
        }
        y.cells[idx] = static_cast<std::uint8_t>(out);
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

std::vector<double> exact_transition_matrix(const PcaRule& phi,
                                            const Geometry& geom) {
    if (!geom.torus) throw std::invalid_argument("exact matrix needs a torus");
    const int S = phi.alphabet.size;
    std::size_t ncells = geom.cell_count();
    double n_d = std::pow(static_cast<double>(S), static_cast<double>(ncells));
    if (n_d > 8192.0) throw std::invalid_argument("state space too large for dense matrix");
    std::size_t n = static_cast<std::size_t>(n_d + 0.5);

    Configuration x;
    x.alphabet = phi.alphabet;
    x.geom = geom;
    x.cells.assign(ncells, 0);

    const int d = geom.dim();
    const std::size_t m = phi.nbhd.size();
    std::vector<double> P(n * n);
    std::vector<double> acc, nxt;
    Coord site(d, 0), nb(d, 0);
    for (std::size_t i = 0; i < n; ++i) {
        {
            std::size_t r = i;
            for (std::size_t c = ncells; c-- > 0;) {
                x.cells[c] = static_cast<std::uint8_t>(r % S);
                r /= S;
            }
        }
        // product measure over per-site output rows, site order = cell order
        acc.assign(1, 1.0);
        std::fill(site.begin(), site.end(), 0);
        std::size_t idx = 0;
        while (true) {
            std::uint64_t pattern = 0;
            for (std::size_t j = 0; j < m; ++j) {
                for (int k = 0; k < d; ++k) nb[k] = site[k] + phi.nbhd.offsets[j][k];
                pattern = pattern * S + static_cast<std::uint64_t>(x.at(nb));
            }
            const double* row = phi.row(pattern);
            nxt.assign(acc.size() * S, 0.0);
            for (std::size_t a = 0; a < acc.size(); ++a)
                for (int b = 0; b < S; ++b) nxt[a * S + b] = acc[a] * row[b];
            acc.swap(nxt);
            ++idx;
            (void)idx;
            int k = d - 1;
            for (; k >= 0; --k) {
                if (++site[k] < geom.sides[k]) break;
                site[k] = 0;
            }
            if (k < 0) break;
        }
        std::copy(acc.begin(), acc.end(), P.begin() + i * n);
    }
    return P;
}

std::vector<double> stationary_distribution(const std::vector<double>& P,
                                            std::size_t n, double tol,
                                            std::size_t max_iter) {
    if (P.size() != n * n) throw std::invalid_argument("matrix shape mismatch");
    std::vector<double> pi(n, 1.0 / static_cast<double>(n)), nxt(n);
    for (std::size_t it = 0; it < max_iter; ++it) {
        std::fill(nxt.begin(), nxt.end(), 0.0);
        for (std::size_t a = 0; a < n; ++a) {
            double pa = pi[a];
            if (pa == 0) continue;
            const double* row = P.data() + a * n;
            for (std::size_t b = 0; b < n; ++b) nxt[b] += pa * row[b];
        }
        double res = 0;
        for (std::size_t b = 0; b < n; ++b) res += std::abs(nxt[b] - pi[b]);
        pi.swap(nxt);
        if (res < tol) return pi;
    }
    throw std::runtime_error("power iteration did not converge");
}

std::vector<double> boundary_kernel_matrix(const LocalRule& f,
                                           const NoiseKernel& theta,
                                           std::span<const int> w, int K) {
    if (f.nbhd.dim != 1) throw std::invalid_argument("boundary kernel is 1D only");
    const int S = f.alphabet.size;
    const std::size_t m = f.nbhd.size();
    if (w.size() != m - 1) throw std::invalid_argument("boundary word must have |N|-1 symbols");
    std::vector<std::int64_t> off;
    for (const Coord& o : f.nbhd.offsets) off.push_back(o[0]);
    std::int64_t lo = *std::min_element(off.begin(), off.end());
    double n_d = std::pow(static_cast<double>(S), static_cast<double>(K));
    if (n_d > 4096.0) throw std::invalid_argument("boundary kernel too large");
    std::size_t n = static_cast<std::size_t>(n_d + 0.5);
    std::vector<double> th = theta.matrix();
    std::vector<double> P(n * n);
    std::vector<int> word(K + m - 1), args(m), y(K);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> x = pattern_symbols(i, K, S);
        for (int k = 0; k < K; ++k) word[k] = x[k];
        for (std::size_t k = 0; k < m - 1; ++k) word[K + k] = w[k];
        for (int k = 0; k < K; ++k) {
            for (std::size_t j = 0; j < m; ++j) args[j] = word[k + (off[j] - lo)];
            y[k] = f.eval(args);
        }
        for (std::size_t jdx = 0; jdx < n; ++jdx) {
            std::vector<int> z = pattern_symbols(jdx, K, S);
            double p = 1.0;
            for (int k = 0; k < K; ++k) p *= th[static_cast<std::size_t>(y[k]) * S + z[k]];
            P[i * n + jdx] = p;
        }
    }
    return P;
}

double dobrushin_coefficient(const std::vector<double>& P, std::size_t n) {
    if (P.size() != n * n) throw std::invalid_argument("matrix shape mismatch");
    double best = 0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            double s = 0;
            for (std::size_t c = 0; c < n; ++c)
                s += std::abs(P[a * n + c] - P[b * n + c]);
            best = std::max(best, 0.5 * s);
        }
    return best;
}

}  // namespace pca
