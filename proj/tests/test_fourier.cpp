#include "doctest.h"

#include <cmath>
#include <random>
#include <set>

#include "pca/fourier.hpp"

using namespace pca;
using Basis = CharacterObservable::Basis;

namespace {

Configuration torus_config(std::int64_t L) {
    Configuration x;
    x.alphabet = Alphabet::binary();
    x.geom = Geometry{true, {L}, -1};
    x.cells.assign(static_cast<std::size_t>(L), 0);
    return x;
}

// E[chi_A(F(Theta x))] by exhaustive enumeration of the noise outcomes on the
// dependence set of A; noise rows ((1-p,p),(q,1-q)).
double oracle(const LocalRule& f, double p, double q, Basis basis,
              const std::vector<Coord>& A, const Configuration& x) {
    std::set<Coord> dep;
    for (const Coord& a : A)
        for (const Coord& o : f.nbhd.offsets) dep.insert({a[0] + o[0]});
    std::vector<Coord> D(dep.begin(), dep.end());
    const double theta[2][2] = {{1 - p, p}, {q, 1 - q}};
    double total = 0;
    Configuration z = x;
    std::vector<int> pat(f.nbhd.size());
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << D.size()); ++mask) {
        double w = 1;
        for (std::size_t i = 0; i < D.size(); ++i) {
            int zi = static_cast<int>((mask >> i) & 1);
            w *= theta[x.at(D[i])][zi];
            z.cells[z.flat_index(D[i])] = static_cast<std::uint8_t>(zi);
        }
        double chi = 1;
        for (const Coord& a : A) {
            for (std::size_t j = 0; j < f.nbhd.size(); ++j)
                pat[j] = z.at({a[0] + f.nbhd.offsets[j][0]});
            int y = f.eval(pat);
            chi *= basis == Basis::fourier ? (y ? -1.0 : 1.0) : y;
        }
        total += w * chi;
    }
    return total;
}

void check_against_oracle(const LocalRule& f, double p, double q, Basis basis,
                          const std::vector<Coord>& A) {
    PcaRule phi = compose_pca(
        f, NoiseKernel::explicit_matrix(2, {1 - p, p, q, 1 - q}));
    CharacterObservable h = pca_on_character(phi, basis, A);
    // evaluate on every assignment of the dependence set (other cells 0)
    std::set<Coord> dep;
    for (const Coord& a : A)
        for (const Coord& o : f.nbhd.offsets) dep.insert({a[0] + o[0]});
    std::vector<Coord> D(dep.begin(), dep.end());
    Configuration x = torus_config(16);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << D.size()); ++mask) {
        for (std::size_t i = 0; i < D.size(); ++i)
            x.cells[x.flat_index(D[i])] =
                static_cast<std::uint8_t>((mask >> i) & 1);
        CHECK(observable_eval(h, x) ==
              doctest::Approx(oracle(f, p, q, basis, A, x)).epsilon(1e-12));
    }
}

}  // namespace

TEST_CASE("character orthonormality under the uniform measure") {
    Configuration x = torus_config(4);
    std::vector<std::vector<Coord>> subsets;
    for (std::uint64_t m = 0; m < 16; ++m) {
        std::vector<Coord> s;
        for (std::int64_t k = 0; k < 4; ++k)
            if ((m >> k) & 1) s.push_back({k});
        subsets.push_back(s);
    }
    for (const auto& A : subsets)
        for (const auto& B : subsets) {
            double ip = 0;
            for (std::uint64_t cfg = 0; cfg < 16; ++cfg) {
                for (std::size_t k = 0; k < 4; ++k)
                    x.cells[k] = static_cast<std::uint8_t>((cfg >> k) & 1);
                ip += char_eval(Basis::fourier, A, x) *
                      char_eval(Basis::fourier, B, x) / 16.0;
            }
            CHECK(ip == doctest::Approx(A == B ? 1.0 : 0.0));
        }
}

TEST_CASE("cylinder indicator expansions reproduce the indicator") {
    SiteSet w = SiteSet::line({0, 1, 2});
    Configuration x = torus_config(8);
    for (std::uint64_t u = 0; u < 8; ++u) {
        std::vector<int> symbols{static_cast<int>(u >> 2) & 1,
                                 static_cast<int>(u >> 1) & 1,
                                 static_cast<int>(u) & 1};
        for (Basis b : {Basis::fourier, Basis::moebius}) {
            CharacterObservable h = observable_to_basis(b, w, symbols);
            for (std::uint64_t cfg = 0; cfg < 8; ++cfg) {
                for (std::size_t k = 0; k < 3; ++k)
                    x.cells[k] = static_cast<std::uint8_t>((cfg >> (2 - k)) & 1);
                double want = cfg == u ? 1.0 : 0.0;
                CHECK(observable_eval(h, x) == doctest::Approx(want));
            }
        }
    }
}

TEST_CASE("index pull-back through additive rules") {
    LocalRule f = build_zoo("xor");
    CHECK(f_star(f, {{0}}) == std::vector<Coord>{{0}, {1}});
    // double hits cancel: chi_{0}chi_{1} pulled back drops the shared site 1
    CHECK(f_star(f, {{0}, {1}}) == std::vector<Coord>{{0}, {2}});
    CHECK(f_star(f, {}) == std::vector<Coord>{});
    CHECK_THROWS_WITH(f_star(build_zoo("majority1d"), {{0}}),
                      doctest::Contains("affine"));
}

TEST_CASE("transfer step matches the exhaustive-noise oracle") {
    std::mt19937 rng(2718);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<std::vector<Coord>> indices{
        {{0}}, {{0}, {2}}, {{0}, {1}, {3}}};
    for (int trial = 0; trial < 20; ++trial) {
        double p = U(rng), q = U(rng);
        for (const auto& A : indices) {
            check_against_oracle(build_zoo("xor"), p, q, Basis::fourier, A);
            check_against_oracle(build_zoo("xor"), p, q, Basis::moebius, A);
        }
        // moebius handles non-additive rules
        check_against_oracle(build_zoo("spreading_binary"), p, q,
                             Basis::moebius, {{0}, {2}});
        check_against_oracle(build_zoo("majority1d"), p, q, Basis::moebius,
                             {{0}});
    }
}

TEST_CASE("seminorm closed forms") {
    std::mt19937 rng(31415);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    LocalRule id{Alphabet::binary(), Neighborhood::line({0}), {0, 1}};
    for (int trial = 0; trial < 50; ++trial) {
        double p = U(rng), q = U(rng);
        PcaRule phi = compose_pca(
            id, NoiseKernel::explicit_matrix(2, {1 - p, p, q, 1 - q}));
        for (Basis b : {Basis::fourier, Basis::moebius}) {
            for (int n = 1; n <= 4; ++n) {
                std::vector<Coord> A;
                for (std::int64_t k = 0; k < n; ++k) A.push_back({2 * k});
                double got = seminorm(pca_on_character(phi, b, A));
                CHECK(got ==
                      doctest::Approx(single_index_seminorm(p, q, n, b))
                          .epsilon(1e-12));
            }
            double rho = contraction_coefficient(phi, b);
            double want = b == Basis::fourier ? std::abs(q - p) + std::abs(1 - p - q)
                                              : p + std::abs(1 - p - q);
            CHECK(rho == doctest::Approx(want));
        }
    }
}

TEST_CASE("xor with symmetric flip contracts characters geometrically") {
    double eps = 0.1;
    PcaRule phi = compose_pca(build_zoo("xor"),
                              NoiseKernel::additive(Alphabet::binary(),
                                                    {1 - eps, eps}));
    // symmetric flip: q=p so the fourier image of a character is a single
    // character with coefficient (1-2e)^{|F*A|}
    CharacterObservable h;
    h.basis = Basis::fourier;
    h.coeffs[{{0}}] = 1.0;
    double expected = 1.0;
    std::vector<std::size_t> sizes{2, 2, 4};  // |F*A| along the orbit of {0}
    for (std::size_t t = 0; t < sizes.size(); ++t) {
        h = pca_on_observable(phi, h);
        expected *= std::pow(1 - 2 * eps, static_cast<double>(sizes[t]));
        REQUIRE(h.coeffs.size() == 1);
        CHECK(h.coeffs.begin()->second == doctest::Approx(expected));
        CHECK(h.coeffs.begin()->first.size() == sizes[t]);
        CHECK(seminorm(h) == doctest::Approx(std::abs(expected)));
    }
    // orbit of index sets: {0} -> {0,1} -> {0,2} -> {0,1,2,3}
    CHECK(h.coeffs.begin()->first ==
          std::vector<Coord>{{0}, {1}, {2}, {3}});
}

TEST_CASE("transfer is linear in the observable") {
    PcaRule phi = compose_pca(
        build_zoo("xor"), NoiseKernel::explicit_matrix(2, {0.8, 0.2, 0.35, 0.65}));
    CharacterObservable h;
    h.basis = Basis::fourier;
    h.coeffs[{{0}}] = 2.0;
    h.coeffs[{{1}, {2}}] = -0.5;
    CharacterObservable out = pca_on_observable(phi, h);
    CharacterObservable a = pca_on_character(phi, Basis::fourier, {{0}});
    CharacterObservable b = pca_on_character(phi, Basis::fourier, {{1}, {2}});
    Configuration x = torus_config(8);
    for (std::uint64_t cfg = 0; cfg < 256; cfg += 7) {
        for (std::size_t k = 0; k < 8; ++k)
            x.cells[k] = static_cast<std::uint8_t>((cfg >> k) & 1);
        CHECK(observable_eval(out, x) ==
              doctest::Approx(2.0 * observable_eval(a, x) -
                              0.5 * observable_eval(b, x)));
    }
}
