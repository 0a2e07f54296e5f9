#include "pca/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace pca {

namespace {

std::vector<Coord> sorted_key(std::vector<Coord> sites) {
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    return sites;
}

Coord coord_add(const Coord& a, const Coord& b) {
    Coord c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

void require_binary(int n) {
    if (n != 2) throw std::invalid_argument("character calculus needs a binary alphabet");
}

// p = theta(0,1), q = theta(1,0) of a 2x2 kernel
std::pair<double, double> flip_rates(const NoiseKernel& theta) {
    require_binary(theta.alphabet_size);
    std::vector<double> m = theta.matrix();
    return {m[1], m[2]};
}

void add_coeff(CharacterObservable& h, std::vector<Coord> key, double c) {
    auto [it, fresh] = h.coeffs.emplace(std::move(key), c);
    if (!fresh) {
        it->second += c;
        if (std::abs(it->second) < 1e-15) h.coeffs.erase(it);
    }
}

}  // namespace

double char_eval(CharacterObservable::Basis basis, const std::vector<Coord>& A,
                 const Configuration& x) {
    require_binary(x.alphabet.size);
    double v = 1.0;
    for (const Coord& k : A) {
        int b = x.at(k);
        v *= (basis == CharacterObservable::Basis::fourier) ? (b ? -1.0 : 1.0)
                                                            : static_cast<double>(b);
    }
    return v;
}

double observable_eval(const CharacterObservable& h, const Configuration& x) {
    double v = 0;
    for (const auto& [A, c] : h.coeffs) v += c * char_eval(h.basis, A, x);
    return v;
}

CharacterObservable observable_to_basis(CharacterObservable::Basis basis,
                                        const SiteSet& window,
                                        const std::vector<int>& symbols) {
    if (symbols.size() != window.size())
        throw std::invalid_argument("symbol count mismatch");
    for (int s : symbols) require_binary(s == 0 || s == 1 ? 2 : 0);
    CharacterObservable h;
    h.basis = basis;
    h.dim = window.dim;
    const std::size_t n = window.size();
    if (basis == CharacterObservable::Basis::fourier) {
        // 1_[u] = 2^{-|A|} sum_{B <= A} chi_B(u) chi_B
        double scale = std::pow(0.5, static_cast<double>(n));
        for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
            std::vector<Coord> B;
            int sign = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1ULL << i)) {
                    B.push_back(window.sites[i]);
                    sign ^= symbols[i];
                }
            add_coeff(h, sorted_key(std::move(B)),
                      scale * (sign ? -1.0 : 1.0));
        }
    } else {
        // 1_[u] = prod_{u_k=1} x_k prod_{u_k=0} (1 - x_k)
        std::vector<std::size_t> zeros;
        std::vector<Coord> ones;
        for (std::size_t i = 0; i < n; ++i)
            symbols[i] ? ones.push_back(window.sites[i]) : zeros.push_back(i);
        for (std::uint64_t mask = 0; mask < (1ULL << zeros.size()); ++mask) {
            std::vector<Coord> key = ones;
            int bits = 0;
            for (std::size_t i = 0; i < zeros.size(); ++i)
                if (mask & (1ULL << i)) {
                    key.push_back(window.sites[zeros[i]]);
                    ++bits;
                }
            add_coeff(h, sorted_key(std::move(key)), bits % 2 ? -1.0 : 1.0);
        }
    }
    return h;
}

namespace {

// affine-over-Z2 decomposition of a binary rule: f = c + sum k_i x_i mod 2
struct AffineForm {
    int c = 0;
    std::vector<int> k;
};

AffineForm affine_form(const LocalRule& f) {
    require_binary(f.alphabet.size);
    const std::size_t m = f.nbhd.size();
    AffineForm a;
    std::vector<int> args(m, 0);
    a.c = f.eval(args);
    a.k.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::fill(args.begin(), args.end(), 0);
        args[i] = 1;
        a.k[i] = f.eval(args) ^ a.c;
    }
    for (std::uint64_t idx = 0; idx < (1ULL << m); ++idx) {
        int v = a.c;
        for (std::size_t i = 0; i < m; ++i)
            if (idx & (1ULL << (m - 1 - i))) v ^= a.k[i];
        if (v != f.table[idx]) throw std::invalid_argument("rule is not affine over Z_2");
    }
    return a;
}

}  // namespace

std::vector<Coord> f_star(const LocalRule& f, const std::vector<Coord>& A) {
    AffineForm af = affine_form(f);
    std::map<Coord, int> count;
    for (const Coord& a : A)
        for (std::size_t i = 0; i < f.nbhd.size(); ++i)
            if (af.k[i]) count[coord_add(a, f.nbhd.offsets[i])] ^= 1;
    std::vector<Coord> out;
    for (const auto& [site, odd] : count)
        if (odd) out.push_back(site);
    return out;
}

CharacterObservable pull_back(const LocalRule& f,
                              CharacterObservable::Basis basis,
                              const std::vector<Coord>& A) {
    CharacterObservable h;
    h.basis = basis;
    h.dim = f.nbhd.dim;
    if (basis == CharacterObservable::Basis::fourier) {
        AffineForm af = affine_form(f);
        double sign = (af.c && (A.size() % 2)) ? -1.0 : 1.0;
        add_coeff(h, f_star(f, A), sign);
        return h;
    }
    // moebius: f as a multilinear polynomial over its slots, then the
    // product over a in A with idempotent site variables
    require_binary(f.alphabet.size);
    const std::size_t m = f.nbhd.size();
    std::vector<double> poly(1ULL << m);  // poly[T] via Moebius inversion
    for (std::uint64_t T = 0; T < (1ULL << m); ++T) {
        double c = 0;
        for (std::uint64_t U = T;; U = (U - 1) & T) {
            std::uint64_t idx = 0;
            for (std::size_t i = 0; i < m; ++i)
                idx = idx * 2 + ((U >> i) & 1);
            int bits = __builtin_popcountll(T ^ U);
            c += (bits % 2 ? -1.0 : 1.0) * f.table[idx];
            if (U == 0) break;
        }
        poly[T] = c;
    }
    add_coeff(h, {}, 1.0);
    for (const Coord& a : A) {
        CharacterObservable nxt;
        nxt.basis = basis;
        nxt.dim = h.dim;
        for (const auto& [key, coef] : h.coeffs)
            for (std::uint64_t T = 0; T < (1ULL << m); ++T) {
                if (poly[T] == 0) continue;
                std::vector<Coord> nk = key;
                for (std::size_t i = 0; i < m; ++i)
                    if (T & (1ULL << i)) nk.push_back(coord_add(a, f.nbhd.offsets[i]));
                add_coeff(nxt, sorted_key(std::move(nk)), coef * poly[T]);
            }
        h = std::move(nxt);
    }
    return h;
}

namespace {

CharacterObservable noise_average(const CharacterObservable& g, double p, double q) {
    // per site in each index: chi_k -> Ac + Bc chi_k
    double Ac, Bc;
    if (g.basis == CharacterObservable::Basis::fourier) {
        Ac = q - p;
        Bc = 1.0 - p - q;
    } else {
        Ac = p;
        Bc = 1.0 - p - q;
    }
    CharacterObservable out;
    out.basis = g.basis;
    out.dim = g.dim;
    for (const auto& [B, coef] : g.coeffs) {
        const std::size_t n = B.size();
        if (n > 30) throw std::invalid_argument("index set too large to expand");
        for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
            std::vector<Coord> key;
            int kept = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1ULL << i)) {
                    key.push_back(B[i]);
                    ++kept;
                }
            double c = coef * std::pow(Bc, kept) *
                       std::pow(Ac, static_cast<double>(n - kept));
            if (c != 0) add_coeff(out, std::move(key), c);
        }
    }
    return out;
}

}  // namespace

CharacterObservable pca_on_character(const PcaRule& phi,
                                     CharacterObservable::Basis basis,
                                     const std::vector<Coord>& A) {
    if (!phi.base_rule || !phi.noise)
        throw std::invalid_argument("rule must decompose as noise o CA");
    auto [p, q] = flip_rates(*phi.noise);
    CharacterObservable g = pull_back(*phi.base_rule, basis, A);
    return noise_average(g, p, q);
}

CharacterObservable pca_on_observable(const PcaRule& phi,
                                      const CharacterObservable& h) {
    CharacterObservable out;
    out.basis = h.basis;
    out.dim = h.dim;
    for (const auto& [A, coef] : h.coeffs) {
        CharacterObservable g = pca_on_character(phi, h.basis, A);
        for (const auto& [B, c] : g.coeffs) add_coeff(out, B, coef * c);
    }
    return out;
}

double seminorm(const CharacterObservable& h) {
    double s = 0;
    for (const auto& [A, c] : h.coeffs)
        if (!A.empty()) s += std::abs(c);
    return s;
}

double contraction_coefficient(const PcaRule& phi,
                               CharacterObservable::Basis basis) {
    if (!phi.noise) throw std::invalid_argument("rule must carry a noise kernel");
    auto [p, q] = flip_rates(*phi.noise);
    return basis == CharacterObservable::Basis::fourier
               ? std::abs(q - p) + std::abs(1.0 - p - q)
               : p + std::abs(1.0 - p - q);
}

double single_index_seminorm(double p01, double p10, int n,
                             CharacterObservable::Basis basis) {
    double base = basis == CharacterObservable::Basis::fourier ? std::abs(p10 - p01)
                                                               : p01;
    double rho = base + std::abs(1.0 - p01 - p10);
    return std::pow(rho, n) - std::pow(base, n);
}

}  // namespace pca
