#include "pca/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pca {

namespace {

void check_dist(const std::vector<double>& q, int n) {
    if (static_cast<int>(q.size()) != n)
        throw std::invalid_argument("distribution has wrong length");
    double s = 0;
    for (double p : q) {
        if (p < 0) throw std::invalid_argument("negative probability");
        s += p;
    }
    if (std::abs(s - 1.0) > 1e-12)
        throw std::invalid_argument("distribution does not sum to 1");
}

}  // namespace

NoiseKernel NoiseKernel::memoryless_uniform(int n, double eps) {
    return memoryless(n, eps, std::vector<double>(n, 1.0 / n));
}

NoiseKernel NoiseKernel::memoryless(int n, double eps, std::vector<double> q) {
    if (eps < 0 || eps > 1) throw std::invalid_argument("epsilon out of [0,1]");
    check_dist(q, n);
    NoiseKernel k;
    k.kind = Kind::memoryless;
    k.alphabet_size = n;
    k.epsilon = eps;
    k.q = std::move(q);
    return k;
}

NoiseKernel NoiseKernel::additive(const Alphabet& a, std::vector<double> q) {
    a.validate_group();
    check_dist(q, a.size);
    NoiseKernel k;
    k.kind = Kind::additive;
    k.alphabet_size = a.size;
    k.q = std::move(q);
    // theta(a,b) = q(b-a): store the group table via a dense matrix so the
    // kernel does not keep an Alphabet reference
    k.matrix_rows.resize(static_cast<std::size_t>(a.size) * a.size);
    for (int x = 0; x < a.size; ++x)
        for (int y = 0; y < a.size; ++y)
            k.matrix_rows[x * a.size + y] = k.q[a.sub(y, x)];
    return k;
}

NoiseKernel NoiseKernel::permutation(int n, std::vector<int> sigma, double eps,
                                     std::vector<double> q) {
    if (eps < 0 || eps > 1) throw std::invalid_argument("epsilon out of [0,1]");
    check_dist(q, n);
    if (static_cast<int>(sigma.size()) != n)
        throw std::invalid_argument("permutation has wrong length");
    std::vector<bool> hit(n, false);
    for (int s : sigma) {
        if (s < 0 || s >= n || hit[s]) throw std::invalid_argument("not a permutation");
        hit[s] = true;
    }
    NoiseKernel k;
    k.kind = Kind::permutation;
    k.alphabet_size = n;
    k.epsilon = eps;
    k.sigma = std::move(sigma);
    k.q = std::move(q);
    return k;
}

NoiseKernel NoiseKernel::birth_death(std::vector<double> beta,
                                     std::vector<double> delta) {
    if (beta.size() != delta.size() || beta.empty())
        throw std::invalid_argument("rate vectors must match and be nonempty");
    for (std::size_t i = 0; i < beta.size(); ++i)
        if (beta[i] < 0 || beta[i] > 1 || delta[i] < 0 || delta[i] > 1)
            throw std::invalid_argument("rate out of [0,1]");
    NoiseKernel k;
    k.kind = Kind::birth_death;
    k.alphabet_size = 1 << beta.size();
    k.beta = std::move(beta);
    k.delta = std::move(delta);
    return k;
}

NoiseKernel NoiseKernel::explicit_matrix(int n, std::vector<double> rows) {
    NoiseKernel k;
    k.kind = Kind::zero_range;
    k.alphabet_size = n;
    k.matrix_rows = std::move(rows);
    k.validate();
    return k;
}

double NoiseKernel::theta(int a, int b) const {
    switch (kind) {
        case Kind::memoryless:
            return (a == b ? 1.0 - epsilon : 0.0) + epsilon * q[b];
        case Kind::permutation:
            return (sigma[a] == b ? 1.0 - epsilon : 0.0) + epsilon * q[b];
        case Kind::birth_death: {
            double p = 1.0;
            for (std::size_t i = 0; i < beta.size(); ++i) {
                int ai = (a >> i) & 1, bi = (b >> i) & 1;
                double stay = ai ? 1.0 - delta[i] : 1.0 - beta[i];
                double flip = ai ? delta[i] : beta[i];
                p *= (ai == bi) ? stay : flip;
            }
            return p;
        }
        case Kind::additive:
        case Kind::zero_range:
            return matrix_rows[static_cast<std::size_t>(a) * alphabet_size + b];
    }
    throw std::logic_error("unreachable");
}

std::vector<double> NoiseKernel::matrix() const {
    std::vector<double> m(static_cast<std::size_t>(alphabet_size) * alphabet_size);
    for (int a = 0; a < alphabet_size; ++a)
        for (int b = 0; b < alphabet_size; ++b)
            m[static_cast<std::size_t>(a) * alphabet_size + b] = theta(a, b);
    return m;
}

void NoiseKernel::validate(double row_tol) const {
    std::vector<double> m = matrix();
    if (m.size() != static_cast<std::size_t>(alphabet_size) * alphabet_size)
        throw std::invalid_argument("kernel matrix wrong shape");
    for (int a = 0; a < alphabet_size; ++a) {
        double s = 0;
        for (int b = 0; b < alphabet_size; ++b) {
            double p = m[static_cast<std::size_t>(a) * alphabet_size + b];
            if (p < -row_tol) throw std::invalid_argument("negative kernel entry");
            s += p;
        }
        if (std::abs(s - 1.0) > row_tol)
            throw std::invalid_argument("kernel row does not sum to 1");
    }
}

void PcaRule::validate(double row_tol) const {
    const int S = alphabet.size;
    std::uint64_t npat = 1;
    for (std::size_t i = 0; i < nbhd.size(); ++i) npat *= S;
    if (rows.size() != npat * static_cast<std::uint64_t>(S))
        throw std::invalid_argument("stochastic rule table wrong shape");
    for (std::uint64_t p = 0; p < npat; ++p) {
        double s = 0;
        for (int b = 0; b < S; ++b) {
            double v = row(p)[b];
            if (v < -row_tol) throw std::invalid_argument("negative rule probability");
            s += v;
        }
        if (std::abs(s - 1.0) > row_tol)
            throw std::invalid_argument("rule row does not sum to 1");
    }
}

PcaRule compose_pca(const LocalRule& f, const NoiseKernel& theta) {
    f.validate();
    theta.validate();
    if (theta.alphabet_size != f.alphabet.size)
        throw std::invalid_argument("alphabet size mismatch");
    PcaRule phi;
    phi.alphabet = f.alphabet;
    phi.nbhd = f.nbhd;
    phi.base_rule = f;
    phi.noise = theta;
    const int S = f.alphabet.size;
    std::vector<double> m = theta.matrix();
    phi.rows.resize(f.table.size() * static_cast<std::size_t>(S));
    for (std::size_t p = 0; p < f.table.size(); ++p)
        for (int b = 0; b < S; ++b)
            phi.rows[p * S + b] = m[static_cast<std::size_t>(f.table[p]) * S + b];
    return phi;
}

double is_epsilon_perturbation(const PcaRule& phi, const LocalRule& f) {
    if (phi.alphabet.size != f.alphabet.size || !(phi.nbhd == f.nbhd))
        throw std::invalid_argument("rule shape mismatch");
    double eps = 0;
    for (std::size_t p = 0; p < phi.pattern_count(); ++p)
        eps = std::max(eps, 1.0 - phi.row(p)[f.table[p]]);
    return eps;
}

PositivityReport positivity_checks(const PcaRule& phi, int alpha) {
    PositivityReport rep;
    rep.positive_rates = true;
    rep.alpha_positive = alpha >= 0;
    const int S = phi.alphabet.size;
    for (std::size_t p = 0; p < phi.pattern_count(); ++p) {
        for (int b = 0; b < S; ++b)
            if (phi.row(p)[b] <= 0) rep.positive_rates = false;
        if (alpha >= 0 && phi.row(p)[alpha] <= 0) rep.alpha_positive = false;
    }
    return rep;
}

bool is_permutation_noise(const NoiseKernel& theta, double tol) {
    std::vector<double> m = theta.matrix();
    const int n = theta.alphabet_size;
    for (int b = 0; b < n; ++b) {
        double s = 0;
        for (int a = 0; a < n; ++a) s += m[static_cast<std::size_t>(a) * n + b];
        if (std::abs(s - 1.0) > tol) return false;
    }
    return true;
}

double min_kernel_entry(const NoiseKernel& theta) {
    std::vector<double> m = theta.matrix();
    return *std::min_element(m.begin(), m.end());
}

}  // namespace pca
