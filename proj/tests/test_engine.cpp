#include "doctest.h"

#include <bit>
#include <cmath>

#include "pca/engine.hpp"

using namespace pca;

namespace {

Configuration line_config(const Alphabet& a, std::vector<std::uint8_t> cells) {
    Configuration x;
    x.alphabet = a;
    x.geom.torus = true;
    x.geom.sides = {static_cast<std::int64_t>(cells.size())};
    x.cells = std::move(cells);
    return x;
}

PcaRule xor_flip(double eps) {
    return compose_pca(build_zoo("xor"),
                       NoiseKernel::additive(Alphabet::binary(), {1 - eps, eps}));
}

}  // namespace

TEST_CASE("random field is pure and uniform-ish") {
    RandomField f(42);
    Coord k{3, -1};
    CHECK(f.uniform(7, k, 2) == f.uniform(7, k, 2));
    CHECK(f.uniform(7, k, 2) != f.uniform(8, k, 2));
    CHECK(f.uniform(7, k, 2) != f.uniform(7, k, 3));
    CHECK(f.derive(1).seed != f.derive(2).seed);
    double s = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) s += f.uniform(i, k, 0);
    CHECK(std::abs(s / n - 0.5) < 3.0 / std::sqrt(12.0 * n));
}

TEST_CASE("update function intervals reproduce the rows exactly") {
    PcaRule phi = xor_flip(0.2);
    UpdateFunction u = build_update_function(phi);
    for (std::uint64_t p = 0; p < 4; ++p) {
        // interval lengths per output symbol must equal phi(p)(.)
        std::vector<double> len(2, 0.0);
        double prev = 0;
        for (std::size_t i = 0; i < u.breaks[p].size(); ++i) {
            len[u.syms[p][i]] += u.breaks[p][i] - prev;
            prev = u.breaks[p][i];
        }
        CHECK(len[0] == doctest::Approx(phi.row(p)[0]).epsilon(1e-14));
        CHECK(len[1] == doctest::Approx(phi.row(p)[1]).epsilon(1e-14));
    }
}

TEST_CASE("xor+flip cores are pattern independent") {
    double eps = 0.2;
    UpdateFunction u = build_update_function(xor_flip(eps));
    CHECK(u.core[0] == doctest::Approx(eps));
    CHECK(u.core[1] == doctest::Approx(eps));
    // u below eps gives 0 and in [eps, 2 eps) gives 1 for every pattern
    for (std::uint64_t p = 0; p < 4; ++p) {
        CHECK(u.eval(p, 0.5 * eps) == 0);
        CHECK(u.eval(p, 1.5 * eps) == 1);
    }
}

TEST_CASE("memoryless update reproduces q below epsilon") {
    // u < eps region realizes the replacement distribution by inverse cdf
    LocalRule id{Alphabet::binary(), Neighborhood::line({0}), {0, 1}};
    double eps = 0.4;
    PcaRule phi = compose_pca(id, NoiseKernel::memoryless(2, eps, {0.25, 0.75}));
    UpdateFunction u = build_update_function(phi);
    // cores: min rows = (eps*0.25, eps*0.75); those regions are input-blind
    CHECK(u.core[0] == doctest::Approx(eps * 0.25));
    CHECK(u.core[1] == doctest::Approx(eps * 0.75));
    for (std::uint64_t p = 0; p < 2; ++p) {
        CHECK(u.eval(p, 0.05) == 0);
        CHECK(u.eval(p, eps * 0.25 + 0.05) == 1);
    }
}

TEST_CASE("noiseless step equals apply_ca and is reproducible") {
    LocalRule f = build_zoo("xor");
    PcaRule det = compose_pca(f, NoiseKernel::memoryless_uniform(2, 0.0));
    UpdateFunction u = build_update_function(det);
    RandomField field(9);
    Configuration x = line_config(f.alphabet, {0, 1, 1, 0, 1});
    CHECK(step(det, u, x, field, 0) == apply_ca(f, x));
    PcaRule noisy = xor_flip(0.3);
    UpdateFunction un = build_update_function(noisy);
    CHECK(step(noisy, un, x, field, 5) == step(noisy, un, x, field, 5));
}

TEST_CASE("empirical flip frequency matches epsilon") {
    double eps = 0.3;
    PcaRule phi = xor_flip(eps);
    UpdateFunction u = build_update_function(phi);
    LocalRule f = build_zoo("xor");
    RandomField field(123);
    Configuration x = line_config(f.alphabet, {0, 1, 0, 1});
    std::size_t flips = 0, total = 0;
    for (int t = 0; t < 10000; ++t) {
        Configuration det = apply_ca(f, x);
        Configuration y = step(phi, u, x, field, t);
        for (std::size_t i = 0; i < 4; ++i) {
            flips += det.cells[i] != y.cells[i];
            ++total;
        }
        x = y;
    }
    double freq = static_cast<double>(flips) / static_cast<double>(total);
    CHECK(std::abs(freq - eps) <
          3.0 * std::sqrt(eps * (1 - eps) / static_cast<double>(total)));
}

TEST_CASE("exact transition matrices") {
    // identity + flip on one site
    LocalRule id{Alphabet::binary(), Neighborhood::line({0}), {0, 1}};
    double eps = 0.2;
    PcaRule phi = compose_pca(id, NoiseKernel::additive(Alphabet::binary(), {1 - eps, eps}));
    Geometry g{true, {1}, -1};
    std::vector<double> P = exact_transition_matrix(phi, g);
    CHECK(P[0] == doctest::Approx(1 - eps));
    CHECK(P[1] == doctest::Approx(eps));
    CHECK(P[2] == doctest::Approx(eps));
    CHECK(P[3] == doctest::Approx(1 - eps));

    // deterministic rule gives 0/1 rows with a single support point
    PcaRule det = compose_pca(build_zoo("xor"), NoiseKernel::memoryless_uniform(2, 0.0));
    Geometry g3{true, {3}, -1};
    std::vector<double> D = exact_transition_matrix(det, g3);
    for (std::size_t r = 0; r < 8; ++r) {
        double s = 0;
        int support = 0;
        for (std::size_t c = 0; c < 8; ++c) {
            s += D[r * 8 + c];
            support += D[r * 8 + c] > 0;
        }
        CHECK(s == doctest::Approx(1.0));
        CHECK(support == 1);
    }
}

TEST_CASE("xor+flip torus chain: exact parity defect of the uniform vector") {
    // On a torus of size L the xor image is exactly the even-parity set, so
    // the column sums are 1 + (-1)^parity(y) (1-2e)^L and the l1 distance of
    // uniform*P from uniform equals (1-2e)^L (it vanishes only as L grows).
    for (double eps : {0.1, 0.3}) {
        for (std::int64_t L : {4, 6}) {
            PcaRule phi = xor_flip(eps);
            Geometry g{true, {L}, -1};
            std::vector<double> P = exact_transition_matrix(phi, g);
            const std::size_t n = std::size_t{1} << L;
            double defect = std::pow(1 - 2 * eps, static_cast<double>(L));
            double l1 = 0;
            for (std::size_t b = 0; b < n; ++b) {
                double s = 0;
                for (std::size_t a = 0; a < n; ++a) s += P[a * n + b];
                int sign = std::popcount(b) % 2 ? -1 : 1;
                CHECK(s == doctest::Approx(1.0 + sign * defect).epsilon(1e-12));
                l1 += std::abs(s - 1.0) / static_cast<double>(n);
            }
            CHECK(l1 == doctest::Approx(defect).epsilon(1e-10));
        }
    }
    // the true stationary law is shift-invariant and overweights even parity
    PcaRule phi = xor_flip(0.3);
    Geometry g{true, {4}, -1};
    std::vector<double> P = exact_transition_matrix(phi, g);
    std::vector<double> pi = stationary_distribution(P, 16);
    double even = 0;
    for (std::size_t y = 0; y < 16; ++y) {
        std::size_t rot = ((y << 1) | (y >> 3)) & 15;
        CHECK(pi[y] == doctest::Approx(pi[rot]).epsilon(1e-10));
        if (std::popcount(y) % 2 == 0) even += pi[y];
    }
    CHECK(even > 0.5);
    CHECK(pi[0] == doctest::Approx(0.06485186176).epsilon(1e-9));
}

TEST_CASE("stationary distribution of small chains") {
    std::vector<double> flip{0.7, 0.3, 0.3, 0.7};
    std::vector<double> pi = stationary_distribution(flip, 2);
    CHECK(pi[0] == doctest::Approx(0.5).epsilon(1e-10));
    std::vector<double> skew{0.9, 0.1, 0.3, 0.7};
    pi = stationary_distribution(skew, 2);
    CHECK(pi[0] == doctest::Approx(0.75).epsilon(1e-10));
    CHECK(pi[1] == doctest::Approx(0.25).epsilon(1e-10));
    // periodic chain whose uniform-start iterates oscillate
    std::vector<double> per{0, 1, 0, 0, 0, 1, 0, 1, 0};
    CHECK_THROWS(stationary_distribution(per, 3, 1e-12, 1000));
}

TEST_CASE("one-step empirical distribution matches the matrix row") {
    PcaRule phi = xor_flip(0.3);
    UpdateFunction u = build_update_function(phi);
    Geometry g{true, {3}, -1};
    std::vector<double> P = exact_transition_matrix(phi, g);
    Configuration x = line_config(phi.alphabet, {1, 0, 1});
    SiteSet full = SiteSet::line({0, 1, 2});
    std::uint64_t row = extract_window(x, full);
    RandomField field(77);
    std::vector<double> hist(8, 0.0);
    const int N = 100000;
    for (int r = 0; r < N; ++r) {
        Configuration y = step(phi, u, x, field.derive(r), 0);
        hist[extract_window(y, full)] += 1.0 / N;
    }
    double tv = 0;
    for (int i = 0; i < 8; ++i) tv += std::abs(hist[i] - P[row * 8 + i]);
    CHECK(0.5 * tv < 3.0 * std::sqrt(8.0 / (4.0 * N)));
}

TEST_CASE("boundary kernels of a left-permutive rule") {
    LocalRule f = build_zoo("permutive_demo");
    const int K = 3;
    const std::size_t n = 27;
    // noiseless: tau is a bijection, so P_w is a permutation matrix
    NoiseKernel id = NoiseKernel::memoryless_uniform(3, 0.0);
    std::vector<int> w{0, 2};
    std::vector<double> P0 = boundary_kernel_matrix(f, id, w, K);
    std::vector<int> colcount(n, 0);
    for (std::size_t r = 0; r < n; ++r) {
        int support = 0;
        for (std::size_t c = 0; c < n; ++c)
            if (P0[r * n + c] > 0) {
                ++support;
                ++colcount[c];
            }
        CHECK(support == 1);
    }
    for (std::size_t c = 0; c < n; ++c) CHECK(colcount[c] == 1);

    // uniform is invariant for every boundary word, and the kernel contracts
    NoiseKernel noisy = NoiseKernel::memoryless_uniform(3, 0.2);
    for (int w0 = 0; w0 < 3; ++w0)
        for (int w1 = 0; w1 < 3; ++w1) {
            std::vector<int> bw{w0, w1};
            std::vector<double> P = boundary_kernel_matrix(f, noisy, bw, K);
            for (std::size_t c = 0; c < n; ++c) {
                double s = 0;
                for (std::size_t r = 0; r < n; ++r) s += P[r * n + c] / n;
                CHECK(s == doctest::Approx(1.0 / n).epsilon(1e-12));
            }
            double rho = dobrushin_coefficient(P, n);
            CHECK(rho < 1.0);
            CHECK(rho > 0.0);
        }
}
