#include "pca/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace pca {

namespace {

Coord coord_add(const Coord& a, const Coord& b) {
    Coord c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

Coord coord_sub(const Coord& a, const Coord& b) {
    Coord c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
    return c;
}

}  // namespace

DecayCurve tv_decay(const PcaRule& phi, const SiteSet& window,
                    const std::vector<Configuration>& inits,
                    std::int64_t horizon, std::size_t replicas,
                    const RandomField& field) {
    if (inits.size() < 2) throw std::invalid_argument("need at least two initials");
    if (replicas == 0) throw std::invalid_argument("need replicas");
    UpdateFunction u = build_update_function(phi);
    const int S = phi.alphabet.size;
    std::uint64_t npat = 1;
    for (std::size_t i = 0; i < window.size(); ++i) npat *= S;
    // counts[init][t][pattern]
    std::vector<std::vector<std::vector<double>>> counts(
        inits.size(), std::vector<std::vector<double>>(
                          horizon + 1, std::vector<double>(npat, 0.0)));
    for (std::size_t r = 0; r < replicas; ++r) {
        RandomField fr = field.derive(r);
        for (std::size_t i = 0; i < inits.size(); ++i) {
            Configuration x = inits[i];
            counts[i][0][extract_window(x, window)] += 1.0;
            for (std::int64_t t = 1; t <= horizon; ++t) {
                x = step(phi, u, x, fr, t - 1);
                counts[i][t][extract_window(x, window)] += 1.0;
            }
        }
    }
    DecayCurve c;
    c.label = "tv_decay";
    for (std::int64_t t = 0; t <= horizon; ++t) {
        double best = 0;
        for (std::size_t i = 0; i < inits.size(); ++i)
            for (std::size_t j = i + 1; j < inits.size(); ++j) {
                double s = 0;
                for (std::uint64_t k = 0; k < npat; ++k)
                    s += std::abs(counts[i][t][k] - counts[j][t][k]);
                best = std::max(best, 0.5 * s / static_cast<double>(replicas));
            }
        c.times.push_back(t);
        c.values.push_back(best);
        c.stderrs.push_back(std::sqrt(static_cast<double>(npat)) /
                            (2.0 * std::sqrt(static_cast<double>(replicas))));
    }
    return c;
}

DecayCurve coupling_decay(const PcaRule& phi, const SiteSet& window,
                          std::int64_t horizon, std::size_t seeds,
                          const RandomField& field) {
    UpdateFunction u = build_update_function(phi);
    const int S = phi.alphabet.size;
    DecayCurve c;
    c.label = "coupling_decay";
    std::vector<std::size_t> undecided(horizon + 1, 0);
    for (std::size_t s = 0; s < seeds; ++s) {
        RandomField fs = field.derive(s);
        for (std::int64_t t = 0; t <= horizon; ++t) {
            std::vector<int> vals = envelope_run(phi, u, window, t, fs);
            bool unknown = std::any_of(vals.begin(), vals.end(),
                                       [&](int v) { return v == S; });
            if (unknown) ++undecided[t];
        }
    }
    for (std::int64_t t = 0; t <= horizon; ++t) {
        double p = static_cast<double>(undecided[t]) / static_cast<double>(seeds);
        c.times.push_back(t);
        c.values.push_back(p);
        c.stderrs.push_back(std::sqrt(std::max(p * (1 - p), 1e-12) /
                                      static_cast<double>(seeds)));
    }
    return c;
}

DecayCurve discrepancy_decay(const LocalRule& base, const NoiseKernel& noise,
                             const Configuration& x0, const Configuration& y0,
                             const Coord& site, std::int64_t horizon,
                             std::size_t replicas, const RandomField& field) {
    if (noise.kind != NoiseKernel::Kind::birth_death)
        throw std::invalid_argument("birth_death noise required");
    const int layers = static_cast<int>(noise.beta.size());
    double eps = 1.0;
    for (int i = 0; i < layers; ++i) {
        double s = noise.beta[i] + noise.delta[i];
        eps = std::min(eps, std::min(s, 2.0 - s));
    }
    std::int64_t radius = 0;
    for (const Coord& o : base.nbhd.offsets)
        for (auto v : o) radius = std::max(radius, std::abs(v));
    const int d = base.nbhd.dim;

    std::vector<double> sum(horizon + 1, 0.0), sumsq(horizon + 1, 0.0);
    std::size_t idx0 = x0.flat_index(site);
    for (std::size_t r = 0; r < replicas; ++r) {
        RandomField fr = field.derive(r);
        Configuration x = x0, y = y0;
        for (std::int64_t t = 0; t <= horizon; ++t) {
            if (t > 0) {
                x = step_birth_death(base, noise, x, fr, t - 1);
                y = step_birth_death(base, noise, y, fr, t - 1);
            }
            int dcount = __builtin_popcount(
                static_cast<unsigned>(x.cells[idx0] ^ y.cells[idx0]));
            sum[t] += dcount;
            sumsq[t] += static_cast<double>(dcount) * dcount;
        }
    }
    DecayCurve c;
    c.label = "discrepancy_decay";
    for (std::int64_t t = 0; t <= horizon; ++t) {
        double mean = sum[t] / static_cast<double>(replicas);
        double var = std::max(sumsq[t] / static_cast<double>(replicas) - mean * mean, 0.0);
        c.times.push_back(t);
        c.values.push_back(mean);
        c.stderrs.push_back(std::sqrt(var / static_cast<double>(replicas)));
        c.envelope.push_back(std::pow(1.0 - eps, static_cast<double>(t)) *
                             std::pow(2.0 * static_cast<double>(radius) * t + 1.0,
                                      static_cast<double>(d)) *
                             layers);
    }
    return c;
}

double entropy_nats(const std::vector<double>& probs) {
    double h = 0;
    for (double p : probs)
        if (p > 0) h -= p * std::log(p);
    return h;
}

EntropyReport block_entropy(const std::vector<Configuration>& samples,
                            const std::vector<std::size_t>& window_sizes) {
    if (samples.empty()) throw std::invalid_argument("no samples");
    if (samples.front().geom.dim() != 1)
        throw std::invalid_argument("block entropy is 1D only");
    EntropyReport rep;
    for (std::size_t w : window_sizes) {
        std::vector<std::int64_t> xs(w);
        for (std::size_t i = 0; i < w; ++i) xs[i] = static_cast<std::int64_t>(i);
        WindowMeasure mu = empirical_window_measure(samples, SiteSet::line(xs));
        double h = entropy_nats(mu.probs);
        rep.window_sizes.push_back(w);
        rep.block_entropies.push_back(h);
        rep.per_site.push_back(h / static_cast<double>(w));
    }
    return rep;
}

WindowMeasure restrict_window(const WindowMeasure& mu, const SiteSet& sub) {
    std::vector<std::size_t> pos;
    for (const Coord& s : sub.sites) {
        auto it = std::lower_bound(mu.window.sites.begin(), mu.window.sites.end(), s);
        if (it == mu.window.sites.end() || *it != s)
            throw std::invalid_argument("subwindow not contained in window");
        pos.push_back(static_cast<std::size_t>(it - mu.window.sites.begin()));
    }
    const int S = mu.alphabet_size;
    std::uint64_t nsub = 1;
    for (std::size_t i = 0; i < sub.size(); ++i) nsub *= S;
    WindowMeasure out;
    out.window = sub;
    out.alphabet_size = S;
    out.probs.assign(nsub, 0.0);
    for (std::uint64_t idx = 0; idx < mu.probs.size(); ++idx) {
        std::vector<int> pat = pattern_symbols(idx, mu.window.size(), S);
        std::uint64_t sidx = 0;
        for (std::size_t p : pos) sidx = sidx * S + static_cast<std::uint64_t>(pat[p]);
        out.probs[sidx] += mu.probs[idx];
    }
    return out;
}

WindowMeasure push_forward_window(const LocalRule& f, const WindowMeasure& mu,
                                  const SiteSet& J) {
    const int S = f.alphabet.size;
    if (mu.alphabet_size != S) throw std::invalid_argument("alphabet mismatch");
    // locate every j + offset inside mu.window
    std::vector<std::vector<std::size_t>> pos(J.size());
    for (std::size_t j = 0; j < J.size(); ++j)
        for (const Coord& o : f.nbhd.offsets) {
            Coord s = coord_add(J.sites[j], o);
            auto it = std::lower_bound(mu.window.sites.begin(),
                                       mu.window.sites.end(), s);
            if (it == mu.window.sites.end() || *it != s)
                throw std::invalid_argument("window does not cover J + N");
            pos[j].push_back(static_cast<std::size_t>(it - mu.window.sites.begin()));
        }
    std::uint64_t nout = 1;
    for (std::size_t i = 0; i < J.size(); ++i) nout *= S;
    WindowMeasure out;
    out.window = J;
    out.alphabet_size = S;
    out.probs.assign(nout, 0.0);
    std::vector<int> args(f.nbhd.size());
    for (std::uint64_t idx = 0; idx < mu.probs.size(); ++idx) {
        if (mu.probs[idx] == 0) continue;
        std::vector<int> pat = pattern_symbols(idx, mu.window.size(), S);
        std::uint64_t oidx = 0;
        for (std::size_t j = 0; j < J.size(); ++j) {
            for (std::size_t k = 0; k < pos[j].size(); ++k) args[k] = pat[pos[j][k]];
            oidx = oidx * S + static_cast<std::uint64_t>(f.eval(args));
        }
        out.probs[oidx] += mu.probs[idx];
    }
    return out;
}

std::vector<bool> entropy_defect_check(const LocalRule& f, const SiteSet& J,
                                       const std::vector<std::vector<double>>& trials) {
    if (f.nbhd.dim != 1) throw std::invalid_argument("defect check is 1D only");
    std::set<Coord> dom;
    for (const Coord& j : J.sites) {
        dom.insert(j);
        for (const Coord& o : f.nbhd.offsets) dom.insert(coord_add(j, o));
    }
    SiteSet D = SiteSet::of(1, std::vector<Coord>(dom.begin(), dom.end()));
    std::int64_t r = 0;
    for (const Coord& o : f.nbhd.offsets) r = std::max(r, std::abs(o[0]));
    const double c = 6.0 * static_cast<double>(r) * std::log(f.alphabet.size);
    std::vector<bool> out;
    for (const auto& probs : trials) {
        WindowMeasure mu{D, f.alphabet.size, probs};
        mu.validate(1e-9);
        double h_in = entropy_nats(restrict_window(mu, J).probs);
        double h_out = entropy_nats(push_forward_window(f, mu, J).probs);
        out.push_back(h_out >= h_in - c - 1e-12);
    }
    return out;
}

namespace {

// enumerate compositions of k into n parts, invoking fn on each
template <typename Fn>
void compositions(int k, int n, std::vector<int>& parts, int slot, Fn&& fn) {
    if (slot == n - 1) {
        parts[slot] = k;
        fn(parts);
        return;
    }
    for (int v = 0; v <= k; ++v) {
        parts[slot] = v;
        compositions(k - v, n, parts, slot + 1, fn);
    }
}

}  // namespace

double entropy_gain_bound(const NoiseKernel& theta, double eps, double resolution) {
    const int S = theta.alphabet_size;
    if (S > 4) throw std::invalid_argument("grid search infeasible for |S| > 4");
    const double hmax = std::log(static_cast<double>(S));
    if (eps > hmax + 1e-12) throw std::invalid_argument("eps exceeds log|S|");
    const int k = std::max(1, static_cast<int>(std::lround(1.0 / resolution)));
    std::vector<double> m = theta.matrix();
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> parts(S);
    std::vector<double> p(S), q(S);
    compositions(k, S, parts, 0, [&](const std::vector<int>& c) {
        for (int a = 0; a < S; ++a) p[a] = static_cast<double>(c[a]) / k;
        double h = entropy_nats(p);
        if (h > hmax - eps + 1e-12) return;
        std::fill(q.begin(), q.end(), 0.0);
        for (int a = 0; a < S; ++a)
            for (int b = 0; b < S; ++b) q[b] += p[a] * m[a * S + b];
        best = std::min(best, entropy_nats(q) - h);
    });
    return best;
}

double entropy_contraction_rate(const NoiseKernel& theta, double eps,
                                double resolution) {
    const double hmax = std::log(static_cast<double>(theta.alphabet_size));
    return eps / (2.0 * hmax - eps) *
           entropy_gain_bound(theta, eps / 2.0, resolution);
}

DecayCurve correlation_decay(const std::vector<Configuration>& samples,
                             const SiteSet& u_window, const std::vector<int>& u,
                             const SiteSet& v_window, const std::vector<int>& v,
                             const std::vector<std::int64_t>& shifts) {
    if (samples.empty()) throw std::invalid_argument("no samples");
    const int S = samples.front().alphabet.size;
    std::uint64_t u_idx = 0, v_idx = 0;
    for (int s : u) u_idx = u_idx * S + static_cast<std::uint64_t>(s);
    for (int s : v) v_idx = v_idx * S + static_cast<std::uint64_t>(s);
    DecayCurve c;
    c.label = "correlation_decay";
    const double n = static_cast<double>(samples.size());
    double pu = 0, pv = 0;
    for (const Configuration& x : samples) {
        pu += extract_window(x, u_window) == u_idx ? 1.0 : 0.0;
        pv += extract_window(x, v_window) == v_idx ? 1.0 : 0.0;
    }
    pu /= n;
    pv /= n;
    for (std::int64_t k : shifts) {
        SiteSet shifted = v_window;
        for (Coord& s : shifted.sites) s[0] += k;
        double both = 0;
        for (const Configuration& x : samples)
            both += (extract_window(x, u_window) == u_idx &&
                     extract_window(x, shifted) == v_idx)
                        ? 1.0
                        : 0.0;
        both /= n;
        c.times.push_back(k);
        c.values.push_back(std::abs(both - pu * pv));
        c.stderrs.push_back(1.0 / std::sqrt(n));
    }
    return c;
}

double percolation_survival(double p, const Neighborhood& nbhd,
                            std::int64_t horizon, std::size_t trials,
                            const RandomField& field) {
    if (p < 0 || p > 1) throw std::invalid_argument("p out of [0,1]");
    std::size_t alive = 0;
    const Coord origin(nbhd.dim, 0);
    for (std::size_t tr = 0; tr < trials; ++tr) {
        RandomField fr = field.derive(tr);
        std::set<Coord> reached;
        if (fr.uniform(0, origin, 0) < p) reached.insert(origin);
        std::int64_t t = 0;
        while (!reached.empty() && t < horizon) {
            ++t;
            std::set<Coord> next;
            for (const Coord& j : reached)
                for (const Coord& o : nbhd.offsets) {
                    Coord k = coord_sub(j, o);
                    if (next.count(k)) continue;
                    if (fr.uniform(t, k, 0) < p) next.insert(std::move(k));
                }
            reached = std::move(next);
        }
        if (!reached.empty()) ++alive;
    }
    return static_cast<double>(alive) / static_cast<double>(trials);
}

}  // namespace pca
