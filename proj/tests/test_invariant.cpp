#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "pca/engine.hpp"
#include "pca/invariant.hpp"

using namespace pca;

namespace {

PcaRule id_flip(double eps) {
    LocalRule id{Alphabet::binary(), Neighborhood::line({0}), {0, 1}};
    return compose_pca(id, NoiseKernel::additive(Alphabet::binary(), {1 - eps, eps}));
}

PcaRule xor_flip(double eps) {
    return compose_pca(build_zoo("xor"),
                       NoiseKernel::additive(Alphabet::binary(), {1 - eps, eps}));
}

}  // namespace

TEST_CASE("measure enumeration is exhaustive and exact") {
    SiteSet c = SiteSet::line({0});
    // k into 2 parts: k+1 compositions
    std::size_t seen = 0;
    std::set<std::vector<int>> all;
    enumerate_measures(c, 2, 2, [&](const RationalWindowMeasure& nu) {
        ++seen;
        CHECK(nu.counts[0] + nu.counts[1] == 2);
        all.insert(nu.counts);
    });
    CHECK(seen == 3);
    CHECK(all.size() == 3);
    seen = 0;
    enumerate_measures(c, 2, 4,
                       [&](const RationalWindowMeasure&) { ++seen; });
    CHECK(seen == 5);
    // two binary sites, k=3: C(3+3,3) = 20 compositions
    seen = 0;
    enumerate_measures(SiteSet::line({0, 1}), 2, 3,
                       [&](const RationalWindowMeasure&) { ++seen; });
    CHECK(seen == 20);
    // budget guard
    CHECK_THROWS(enumerate_measures(SiteSet::line({0, 1, 2}), 2, 50,
                                    [](const RationalWindowMeasure&) {}, 10));
}

TEST_CASE("restricted invariance norm on hand-checkable cases") {
    SiteSet B = SiteSet::line({0});
    PcaRule phi = xor_flip(0.2);
    // point mass on all-0 over N(B) = {0,1}: push at site 0 is (0.8, 0.2),
    // own marginal is (1,0) -> TV 0.2
    RationalWindowMeasure pt{SiteSet::line({0, 1}), 2, {1, 0, 0, 0}, 1};
    CHECK(restricted_invariance_norm(pt, phi, B) == doctest::Approx(0.2));
    // uniform is exactly invariant site-wise for xor+flip
    RationalWindowMeasure uni{SiteSet::line({0, 1}), 2, {1, 1, 1, 1}, 4};
    CHECK(restricted_invariance_norm(uni, phi, B) ==
          doctest::Approx(0.0).epsilon(1e-12));
    // identity+flip 0.5 sends everything to the uniform marginal
    RationalWindowMeasure pt1{SiteSet::line({0}), 2, {0, 1}, 1};
    CHECK(restricted_invariance_norm(pt1, id_flip(0.5), B) ==
          doctest::Approx(0.5));
}

TEST_CASE("uniform invariance for permutation noise over a permutive rule") {
    PcaRule phi = compose_pca(
        build_zoo("permutive_demo"),
        NoiseKernel::permutation(3, {1, 2, 0}, 0.3,
                                 {1.0 / 3, 1.0 / 3, 1.0 / 3}));
    SiteSet B = SiteSet::line({0});
    SiteSet NB = SiteSet::line({-1, 0, 1});
    RationalWindowMeasure uni{NB, 3, std::vector<int>(27, 1), 27};
    CHECK(restricted_invariance_norm(uni, phi, B) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("approximate invariant for one-step uniformizing noise") {
    // identity + flip 0.5: every measure maps to uniform, exact marginal 0.5
    InvariantResult r =
        approximate_invariant(id_flip(0.5), SiteSet::line({0}), {1}, 4);
    CHECK(r.value > 0.25);
    CHECK(r.value < 0.75);
    CHECK(std::abs(r.value - 0.5) <= 1.0 / 3);
    CHECK(r.candidates_checked > 0);
}

TEST_CASE("approximate invariant brackets the xor+flip marginal") {
    InvariantResult r =
        approximate_invariant(xor_flip(0.45), SiteSet::line({0}), {1}, 3);
    CHECK(std::abs(r.value - 0.5) <= 1.0 / 3);
}

TEST_CASE("deterministic rule exhausts the budget") {
    PcaRule det = compose_pca(build_zoo("xor"),
                              NoiseKernel::memoryless_uniform(2, 0.0));
    CHECK_THROWS(
        approximate_invariant(det, SiteSet::line({0}), {1}, 8, 2000));
}
