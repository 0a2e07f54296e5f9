#include "pca/invariant.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace pca {

namespace {

Coord coord_add(const Coord& a, const Coord& b) {
    Coord c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

double stars_and_bars(int k, std::uint64_t parts) {
    // C(k + parts - 1, parts - 1), in doubles (budget comparison only)
    double v = 1.0;
    for (std::uint64_t i = 1; i < parts; ++i)
        v *= static_cast<double>(k + i) / static_cast<double>(i);
    return v;
}

template <typename Fn>
void compositions(int k, std::size_t parts, std::vector<int>& c, std::size_t slot,
                  Fn&& fn) {
    if (slot == parts - 1) {
        c[slot] = k;
        fn();
        return;
    }
    for (int v = k; v >= 0; --v) {  // lexicographic over probability vectors
        c[slot] = v;
        compositions(k - v, parts, c, slot + 1, fn);
    }
}

SiteSet window_of(const SiteSet& B, const Neighborhood& nbhd) {
    std::set<Coord> sites;
    for (const Coord& b : B.sites)
        for (const Coord& o : nbhd.offsets) sites.insert(coord_add(b, o));
    return SiteSet::of(B.dim, std::vector<Coord>(sites.begin(), sites.end()));
}

std::size_t site_pos(const SiteSet& w, const Coord& s) {
    auto it = std::lower_bound(w.sites.begin(), w.sites.end(), s);
    if (it == w.sites.end() || *it != s)
        throw std::invalid_argument("site missing from window");
    return static_cast<std::size_t>(it - w.sites.begin());
}

}  // namespace

void enumerate_measures(const SiteSet& C, int alphabet_size, int k,
                        const std::function<void(const RationalWindowMeasure&)>& fn,
                        std::uint64_t budget) {
    std::uint64_t parts = 1;
    for (std::size_t i = 0; i < C.size(); ++i) parts *= alphabet_size;
    if (stars_and_bars(k, parts) > static_cast<double>(budget))
        throw std::runtime_error("measure enumeration exceeds the budget");
    RationalWindowMeasure nu;
    nu.window = C;
    nu.alphabet_size = alphabet_size;
    nu.k = k;
    nu.counts.assign(parts, 0);
    compositions(k, parts, nu.counts, 0, [&] { fn(nu); });
}

double restricted_invariance_norm(const RationalWindowMeasure& nu,
                                  const PcaRule& phi, const SiteSet& B) {
    const int S = phi.alphabet.size;
    SiteSet NB = window_of(B, phi.nbhd);
    if (!(nu.window == NB) || nu.alphabet_size != S)
        throw std::invalid_argument("nu must live on N(B)");
    const std::size_t m = phi.nbhd.size();
    // slot positions inside N(B) for each b + offset, and B-marginal positions
    std::vector<std::vector<std::size_t>> pos(B.size());
    std::vector<std::size_t> bpos;
    for (std::size_t j = 0; j < B.size(); ++j) {
        for (const Coord& o : phi.nbhd.offsets)
            pos[j].push_back(site_pos(NB, coord_add(B.sites[j], o)));
        bpos.push_back(site_pos(NB, B.sites[j]));
    }
    std::uint64_t nout = 1;
    for (std::size_t j = 0; j < B.size(); ++j) nout *= S;
    std::vector<double> push(nout, 0.0), marg(nout, 0.0), acc, nxt;
    for (std::uint64_t u = 0; u < nu.counts.size(); ++u) {
        if (nu.counts[u] == 0) continue;
        double pu = nu.prob(u);
        std::vector<int> pat = pattern_symbols(u, NB.size(), S);
        acc.assign(1, pu);
        for (std::size_t j = 0; j < B.size(); ++j) {
            std::uint64_t pidx = 0;
            for (std::size_t i = 0; i < m; ++i)
                pidx = pidx * S + static_cast<std::uint64_t>(pat[pos[j][i]]);
            const double* row = phi.row(pidx);
            nxt.assign(acc.size() * S, 0.0);
            for (std::size_t a = 0; a < acc.size(); ++a)
                for (int b = 0; b < S; ++b) nxt[a * S + b] = acc[a] * row[b];
            acc.swap(nxt);
        }
        for (std::uint64_t w = 0; w < nout; ++w) push[w] += acc[w];
        std::uint64_t bidx = 0;
        for (std::size_t j = 0; j < B.size(); ++j)
            bidx = bidx * S + static_cast<std::uint64_t>(pat[bpos[j]]);
        marg[bidx] += pu;
    }
    double s = 0;
    for (std::uint64_t w = 0; w < nout; ++w) s += std::abs(push[w] - marg[w]);
    return 0.5 * s;
}

InvariantResult approximate_invariant(const PcaRule& phi, const SiteSet& A,
                                      const std::vector<int>& w, int n,
                                      std::uint64_t budget, bool verbose) {
    phi.validate();
    if (n < 1) throw std::invalid_argument("accuracy must be 1/n with n >= 1");
    if (w.size() != A.size()) throw std::invalid_argument("pattern length mismatch");
    const int S = phi.alphabet.size;
    const int d = A.dim;
    // smallest centered box containing A; the precision m grows instead of
    // the box, which keeps the candidate sets enumerable
    std::int64_t r = 0;
    for (const Coord& s : A.sites)
        for (auto v : s) r = std::max(r, std::abs(v));
    std::vector<Coord> box_sites;
    {
        Coord cur(d, -r);
        while (true) {
            box_sites.push_back(cur);
            int i = d - 1;
            for (; i >= 0; --i) {
                if (++cur[i] <= r) break;
                cur[i] = -r;
            }
            if (i < 0) break;
        }
    }
    SiteSet B = SiteSet::of(d, std::move(box_sites));
    SiteSet NB = window_of(B, phi.nbhd);
    std::uint64_t P = 1;
    for (std::size_t i = 0; i < NB.size(); ++i) P *= S;

    // per full pattern: rule-row index for each b in B, and the A / B indices
    const std::size_t m_nb = phi.nbhd.size();
    std::vector<std::vector<std::size_t>> pos(B.size());
    for (std::size_t j = 0; j < B.size(); ++j)
        for (const Coord& o : phi.nbhd.offsets)
            pos[j].push_back(site_pos(NB, coord_add(B.sites[j], o)));
    std::vector<std::size_t> apos;
    for (const Coord& s : A.sites) apos.push_back(site_pos(NB, s));
    std::vector<std::size_t> bpos;
    for (const Coord& s : B.sites) bpos.push_back(site_pos(NB, s));
    std::uint64_t nb_out = 1;
    for (std::size_t j = 0; j < B.size(); ++j) nb_out *= S;
    std::uint64_t wA = 0;
    for (int s : w) wA = wA * S + static_cast<std::uint64_t>(s);

    std::vector<std::vector<std::uint64_t>> rowidx(P, std::vector<std::uint64_t>(B.size()));
    std::vector<std::uint64_t> bidx(P), match_w(P);
    for (std::uint64_t u = 0; u < P; ++u) {
        std::vector<int> pat = pattern_symbols(u, NB.size(), S);
        for (std::size_t j = 0; j < B.size(); ++j) {
            std::uint64_t pidx = 0;
            for (std::size_t i = 0; i < m_nb; ++i)
                pidx = pidx * S + static_cast<std::uint64_t>(pat[pos[j][i]]);
            rowidx[u][j] = pidx;
        }
        std::uint64_t bi = 0;
        for (std::size_t p : bpos) bi = bi * S + static_cast<std::uint64_t>(pat[p]);
        bidx[u] = bi;
        std::uint64_t ai = 0;
        for (std::size_t p : apos) ai = ai * S + static_cast<std::uint64_t>(pat[p]);
        match_w[u] = (ai == wA) ? 1 : 0;
    }

    InvariantResult res;
    for (int m = n;; ++m) {
        const int k = 3 * m * static_cast<int>(P);
        const double thresh = 1.0 / m - 1e-9;
        std::uint64_t candidates = 0;
        double lo = 1.0, hi = 0.0, first = -1.0;
        std::vector<double> push(nb_out), marg(nb_out), acc, nxt;
        enumerate_measures(NB, S, k, [&](const RationalWindowMeasure& nu) {
            std::fill(push.begin(), push.end(), 0.0);
            std::fill(marg.begin(), marg.end(), 0.0);
            double val = 0;
            for (std::uint64_t u = 0; u < P; ++u) {
                if (nu.counts[u] == 0) continue;
                double pu = nu.prob(u);
                acc.assign(1, pu);
                for (std::size_t j = 0; j < B.size(); ++j) {
                    const double* row = phi.row(rowidx[u][j]);
                    nxt.assign(acc.size() * S, 0.0);
                    for (std::size_t a = 0; a < acc.size(); ++a)
                        for (int b = 0; b < S; ++b) nxt[a * S + b] = acc[a] * row[b];
                    acc.swap(nxt);
                }
                for (std::uint64_t o = 0; o < nb_out; ++o) push[o] += acc[o];
                marg[bidx[u]] += pu;
                if (match_w[u]) val += pu;
            }
            double norm = 0;
            for (std::uint64_t o = 0; o < nb_out; ++o)
                norm += std::abs(push[o] - marg[o]);
            norm *= 0.5;
            if (norm < thresh) {
                ++candidates;
                if (first < 0) first = val;
                lo = std::min(lo, val);
                hi = std::max(hi, val);
            }
        }, budget);
        res.candidates_checked += candidates;
        if (verbose)
            std::fprintf(stderr, "invariant: m=%d k=%d |R|=%llu spread=%.6f\n", m,
                         k, static_cast<unsigned long long>(candidates),
                         candidates ? hi - lo : -1.0);
        if (candidates > 0 && hi - lo < 1.0 / (2.0 * n)) {
            res.value = first;
            res.m_final = m;
            res.k = k;
            return res;
        }
    }
}

}  // namespace pca
