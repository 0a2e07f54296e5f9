#include "pca/cftp.hpp"

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

}  // namespace

EnvelopeRule envelope_rule(const PcaRule& phi) {
    phi.validate();
    const int S = phi.alphabet.size;
    const int E = S + 1;
    const std::size_t m = phi.nbhd.size();
    EnvelopeRule env;
    env.alphabet = Alphabet::plain(E);
    env.nbhd = phi.nbhd;
    std::uint64_t npat = 1;
    for (std::size_t i = 0; i < m; ++i) npat *= E;
    env.rows.assign(npat * E, 0.0);
    std::vector<int> epat, comp(m);
    for (std::uint64_t idx = 0; idx < npat; ++idx) {
        epat = pattern_symbols(idx, m, E);
        std::vector<std::size_t> unknown;
        for (std::size_t i = 0; i < m; ++i)
            if (epat[i] == S) unknown.push_back(i);
        std::vector<double> mn(S, 1.0);
        std::uint64_t ncomp = 1;
        for (std::size_t i = 0; i < unknown.size(); ++i) ncomp *= S;
        comp.assign(epat.begin(), epat.end());
        for (std::uint64_t c = 0; c < ncomp; ++c) {
            std::uint64_t r = c;
            for (std::size_t i = unknown.size(); i-- > 0;) {
                comp[unknown[i]] = static_cast<int>(r % S);
                r /= S;
            }
            const double* row = phi.row(pattern_index(comp, S));
            for (int b = 0; b < S; ++b) mn[b] = std::min(mn[b], row[b]);
        }
        double total = 0;
        for (int b = 0; b < S; ++b) {
            env.rows[idx * E + b] = mn[b];
            total += mn[b];
        }
        env.rows[idx * E + S] = 1.0 - total;
    }
    return env;
}

double p_question(const PcaRule& phi) {
    phi.validate();
    const int S = phi.alphabet.size;
    std::vector<double> mn(S, 1.0);
    for (std::size_t p = 0; p < phi.pattern_count(); ++p)
        for (int b = 0; b < S; ++b) mn[b] = std::min(mn[b], phi.row(p)[b]);
    double total = 0;
    for (double v : mn) total += v;
    return 1.0 - total;
}

Certificate certify(const PcaRule& phi) {
    Certificate c;
    c.p_q = p_question(phi);
    c.m = phi.nbhd.size();
    c.bound = 1.0 / static_cast<double>(c.m);
    c.bound_kind = "branching";
    if (phi.nbhd.dim == 1) {
        std::set<std::int64_t> off;
        for (const Coord& o : phi.nbhd.offsets) off.insert(o[0]);
        if (off == std::set<std::int64_t>{0, 1} ||
            off == std::set<std::int64_t>{-1, 0}) {
            c.bound = 2.0 / 3.0;
            c.bound_kind = "oriented_1d";
        } else if (off == std::set<std::int64_t>{-1, 0, 1}) {
            c.bound = 0.5;
            c.bound_kind = "three_1d";
        }
    }
    c.ergodic = c.p_q < c.bound;
    return c;
}

std::optional<NilpotentCertificate> certify_nilpotent(const LocalRule& f,
                                                      double epsilon,
                                                      int max_power) {
    auto nil = is_nilpotent_within(f, max_power);
    if (!nil) return std::nullopt;
    const int n = nil->first;
    // m_i = |N^i| by Minkowski powers
    std::vector<std::size_t> msz(n + 1);
    msz[0] = 1;
    std::set<Coord> cur{Coord(f.nbhd.dim, 0)};
    for (int i = 1; i <= n; ++i) {
        std::set<Coord> nxt;
        for (const Coord& a : cur)
            for (const Coord& o : f.nbhd.offsets) nxt.insert(coord_add(a, o));
        cur = std::move(nxt);
        msz[i] = cur.size();
    }
    double L = static_cast<double>(msz[n - 1]) * static_cast<double>(msz[n]);
    double M = 0;
    for (int i = 0; i < n; ++i) M += static_cast<double>(msz[i]);
    NilpotentCertificate cert;
    cert.power = n;
    cert.threshold = 1.0 / (L * M);
    cert.ergodic = epsilon < cert.threshold;
    return cert;
}

namespace {

// Determined value at a site given envelope inputs: evaluate the update
// function over every completion of the unknown slots; agreement means the
// output does not depend on the hidden symbols.
int envelope_eval(const UpdateFunction& u, int S, std::vector<int>& pat,
                  double v) {
    const std::size_t m = pat.size();
    std::vector<std::size_t> unknown;
    for (std::size_t i = 0; i < m; ++i)
        if (pat[i] == S) unknown.push_back(i);
    std::uint64_t ncomp = 1;
    for (std::size_t i = 0; i < unknown.size(); ++i) ncomp *= S;
    int out = -1;
    for (std::uint64_t c = 0; c < ncomp; ++c) {
        std::uint64_t r = c;
        for (std::size_t i = unknown.size(); i-- > 0;) {
            pat[unknown[i]] = static_cast<int>(r % S);
            r /= S;
        }
        std::uint64_t idx = 0;
        for (std::size_t i = 0; i < m; ++i)
            idx = idx * S + static_cast<std::uint64_t>(pat[i]);
        int b = u.eval(idx, v);
        if (out < 0) out = b;
        else if (b != out) return S;  // undetermined
    }
    return out;
}

}  // namespace

std::vector<int> envelope_run(const PcaRule& phi, const UpdateFunction& u,
                              const SiteSet& window, std::int64_t T,
                              const RandomField& field) {
    if (window.dim != phi.nbhd.dim)
        throw std::invalid_argument("window / rule dimension mismatch");
    const int S = phi.alphabet.size;
    // dependence cone: sites needed at backward depth s
    std::vector<std::vector<Coord>> levels;
    levels.emplace_back(window.sites);
    while (static_cast<std::int64_t>(levels.size()) <= T) {
        std::set<Coord> nxt;
        for (const Coord& x : levels.back())
            for (const Coord& o : phi.nbhd.offsets) nxt.insert(coord_add(x, o));
        levels.emplace_back(nxt.begin(), nxt.end());
    }
    std::map<Coord, int> cur;
    for (const Coord& x : levels[T]) cur[x] = S;  // all unknown at -T
    for (std::int64_t s = T; s >= 1; --s) {
        std::map<Coord, int> prev;
        std::vector<int> pat(phi.nbhd.size());
        for (const Coord& x : levels[s - 1]) {
            for (std::size_t j = 0; j < phi.nbhd.size(); ++j)
                pat[j] = cur.at(coord_add(x, phi.nbhd.offsets[j]));
            double v = field.uniform(-s, x, 0);
            prev[x] = envelope_eval(u, S, pat, v);
        }
        cur = std::move(prev);
    }
    std::vector<int> out;
    for (const Coord& x : window.sites) out.push_back(cur.at(x));
    return out;
}

CftpResult cftp_sample(const PcaRule& phi, const SiteSet& window,
                       const RandomField& field, std::int64_t max_horizon) {
    const int S = phi.alphabet.size;
    UpdateFunction u = build_update_function(phi);
    for (std::int64_t T = 1; T <= max_horizon; T *= 2) {
        std::vector<int> vals = envelope_run(phi, u, window, T, field);
        if (std::any_of(vals.begin(), vals.end(), [&](int v) { return v == S; }))
            continue;
        std::uint64_t pattern = 0;
        for (int b : vals) pattern = pattern * S + static_cast<std::uint64_t>(b);
        return CftpResult{pattern, T};
    }
    throw std::runtime_error("cftp did not coalesce within the horizon bound");
}

int spreading_tree_sample(const LocalRule& f, double epsilon,
                          const std::vector<double>& q, const Coord& site,
                          const RandomField& field, std::size_t budget) {
    auto alpha_opt = spreading_symbol(f);
    if (!alpha_opt) throw std::invalid_argument("rule has no spreading symbol");
    const int alpha = *alpha_opt;
    const int S = f.alphabet.size;
    if (static_cast<int>(q.size()) != S) throw std::invalid_argument("bad q length");
    if (epsilon <= 0 || epsilon > 1) throw std::invalid_argument("epsilon out of (0,1]");
    const std::size_t m = f.nbhd.size();

    struct Frame {
        Coord site;
        std::int64_t t;
        std::size_t child = 0;
        std::vector<int> vals;
    };
    std::map<std::pair<Coord, std::int64_t>, int> memo;
    std::vector<Frame> stack;
    stack.push_back({site, 0, 0, {}});
    std::size_t expanded = 0;
    int delivered = -1;  // value handed up from a finished child

    auto finish = [&](int value) {
        Frame& fr = stack.back();
        memo[{fr.site, fr.t}] = value;
        stack.pop_back();
        delivered = value;
    };

    while (!stack.empty()) {
        Frame& fr = stack.back();
        if (fr.child == 0 && fr.vals.empty() && delivered < 0) {
            if (++expanded > budget) return alpha;  // a.s. an infinite cluster
            double uu = field.uniform(fr.t - 1, fr.site, 0);
            if (uu < epsilon) {
                // conditioned on an error, uu/eps is uniform; invert q
                double v = uu / epsilon, acc = 0;
                int b = S - 1;
                for (int s = 0; s < S; ++s) {
                    acc += q[s];
                    if (v < acc) { b = s; break; }
                }
                finish(b);
                continue;
            }
        }
        if (delivered >= 0) {
            int dv = delivered;
            delivered = -1;
            if (dv == alpha) { finish(alpha); continue; }  // spreading short-cut
            fr.vals.push_back(dv);
            ++fr.child;
        }
        if (fr.child == m) {
            finish(f.eval(fr.vals));
            continue;
        }
        Coord child = coord_add(fr.site, f.nbhd.offsets[fr.child]);
        auto it = memo.find({child, fr.t - 1});
        if (it != memo.end()) {
            delivered = it->second;
            continue;
        }
        stack.push_back({child, fr.t - 1, 0, {}});
    }
    return memo.at({site, 0});
}

namespace {

// backward-resolved wall bit at (site j, time t) for layer-0 birth-death
// noise: compose per-step maps on {0,1} until the composition is constant
int resolve_wall(const NoiseKernel& noise, const RandomField& field,
                 std::int64_t j, std::int64_t t, std::int64_t max_horizon) {
    const double b = noise.beta[0], d = noise.delta[0];
    Coord site{j};
    // h maps the wall value at the current backward depth to the value at t
    int h0 = 0, h1 = 1;
    for (std::int64_t s = t; s > t - max_horizon; --s) {
        double v = field.uniform(s - 1, site, 0);
        // one-step map g: new = 1 iff v < (old ? 1-d : b); then h <- h o g
        int g0 = v < b ? 1 : 0;
        int g1 = v < 1.0 - d ? 1 : 0;
        int n0 = g0 ? h1 : h0;
        int n1 = g1 ? h1 : h0;
        h0 = n0;
        h1 = n1;
        if (h0 == h1) return h0;
    }
    throw std::runtime_error("wall chain did not resolve");
}

}  // namespace

int glider_walls_sample(const NoiseKernel& noise, std::int64_t site,
                        const RandomField& field, std::int64_t max_horizon) {
    if (noise.kind != NoiseKernel::Kind::birth_death || noise.beta.size() != 3)
        throw std::invalid_argument("three-layer birth_death kernel required");
    for (std::size_t i = 0; i < 3; ++i)
        if (noise.beta[i] <= 0 || noise.beta[i] >= 1 || noise.delta[i] <= 0 ||
            noise.delta[i] >= 1)
            throw std::invalid_argument("rates must lie in (0,1)");

    int wall0 = resolve_wall(noise, field, site, 0, max_horizon);

    // trace a particle bit backward; layer 1 = R (moves +1), 2 = L (moves -1)
    auto trace = [&](int layer0) {
        std::int64_t j = site, t = 0;
        int layer = layer0, parity = 0;
        for (std::int64_t steps = 0; steps < max_horizon; ++steps) {
            const double b = noise.beta[layer], d = noise.delta[layer];
            double v = field.uniform(t - 1, Coord{j},
                                     static_cast<std::uint64_t>(layer));
            if (v < std::min(b, 1.0 - d)) return 1 ^ parity;  // forced present
            if (v >= std::max(b, 1.0 - d)) return 0 ^ parity; // forced absent
            if (v >= 1.0 - d && v < b) parity ^= 1;           // flip region
            int wall = resolve_wall(noise, field, j, t - 1, max_horizon);
            // pre-noise bit comes from the incoming particle, reflected at walls
            if (layer == 1) {  // R at (j,t) <- wall ? L(j+1,t-1) : R(j-1,t-1)
                if (wall) { layer = 2; j += 1; } else { j -= 1; }
            } else {           // L at (j,t) <- wall ? R(j-1,t-1) : L(j+1,t-1)
                if (wall) { layer = 1; j -= 1; } else { j += 1; }
            }
            t -= 1;
        }
        throw std::runtime_error("particle trace did not resolve");
    };

    int r = trace(1), l = trace(2);
    return wall0 | (r << 1) | (l << 2);
}

}  // namespace pca
