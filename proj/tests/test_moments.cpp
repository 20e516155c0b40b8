#include <doctest.h>

#include <cmath>

#include "cubature/moments.hpp"
#include "oracles.hpp"

using namespace cubature;

namespace {
double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}
} // namespace

TEST_CASE("monomial moments match the closed forms") {
    CHECK(monomial_moment(Region::ExpR2, 2, MultiIndex({4, 0})) == doctest::Approx(3 * M_PI / 4).epsilon(1e-15));
    CHECK(monomial_moment(Region::ExpR2, 2, MultiIndex({2, 2})) == doctest::Approx(M_PI / 4).epsilon(1e-15));
    CHECK(monomial_moment(Region::Ball, 3, MultiIndex({1, 0, 0})) == 0.0);
    CHECK(monomial_moment(Region::Ball, 2, MultiIndex({0, 0})) == doctest::Approx(M_PI).epsilon(1e-15));
    CHECK(monomial_moment(Region::ExpR, 2, MultiIndex({2, 0})) == doctest::Approx(6 * M_PI).epsilon(1e-15));
    // cross-check the ExpR value against the radial x angular oracle
    CHECK(rel_err(oracle::moment(Region::ExpR, 2, {2, 0}), 6 * M_PI) < 1e-10);
}

TEST_CASE("odd exponents give zero for every region") {
    for (auto region : {Region::ExpR2, Region::ExpR, Region::Ball})
        for (int n : {1, 2, 3, 5}) {
            std::vector<int> e(n, 0);
            e[0] = 3;
            CHECK(monomial_moment(region, n, MultiIndex(e)) == 0.0);
            if (n > 1) {
                e[0] = 2;
                e[n - 1] = 1;
                CHECK(monomial_moment(region, n, MultiIndex(e)) == 0.0);
            }
        }
}

TEST_CASE("moment of the zero index equals the volume") {
    CHECK(volume(Region::ExpR2, 5) == doctest::Approx(std::pow(M_PI, 2.5)).epsilon(1e-15));
    CHECK(volume(Region::Ball, 2) == doctest::Approx(M_PI).epsilon(1e-15));
    CHECK(volume(Region::ExpR, 2) == doctest::Approx(2 * M_PI).epsilon(1e-15));
    CHECK(rel_err(oracle::moment(Region::ExpR, 2, {0, 0}), volume(Region::ExpR, 2)) < 1e-10);
    for (auto region : {Region::ExpR2, Region::ExpR, Region::Ball})
        for (int n = 1; n <= 8; ++n)
            CHECK(monomial_moment(region, n, MultiIndex(std::vector<int>(n, 0))) ==
                  doctest::Approx(volume(region, n)).epsilon(1e-15));
}

TEST_CASE("gaussian moments are defined only through conversion") {
    CHECK(volume(Region::GaussianProb, 3) == 1.0);
    CHECK_THROWS_AS(monomial_moment(Region::GaussianProb, 2, MultiIndex({0, 0})),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_moment_system(Region::GaussianProb, 2, 2), std::invalid_argument);
}

TEST_CASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS(monomial_moment(Region::Ball, 3, MultiIndex({2, 0})), dimension_mismatch);
}

TEST_CASE("moment system enumeration") {
    CHECK(build_moment_system(Region::ExpR2, 2, 4).size() == 15);
    CHECK(build_moment_system(Region::ExpR2, 7, 7).size() == 3432);

    MomentSystem one = build_moment_system(Region::Ball, 1, 0);
    REQUIRE(one.size() == 1);
    CHECK(one.target_values[0] == doctest::Approx(2.0).epsilon(1e-15));

    for (int n = 1; n <= 8; ++n)
        for (int d = 0; d <= 8; ++d)
            CHECK(static_cast<long long>(build_moment_system(Region::Ball, n, d).size()) ==
                  binomial_ll(n + d, d));

    SUBCASE("graded lexicographic order") {
        MomentSystem sys = build_moment_system(Region::ExpR2, 2, 2);
        REQUIRE(sys.size() == 6);
        CHECK(sys.alphas[0].e == std::vector<int>{0, 0});
        CHECK(sys.alphas[1].e == std::vector<int>{1, 0});
        CHECK(sys.alphas[2].e == std::vector<int>{0, 1});
        CHECK(sys.alphas[3].e == std::vector<int>{2, 0});
        CHECK(sys.alphas[4].e == std::vector<int>{1, 1});
        CHECK(sys.alphas[5].e == std::vector<int>{0, 2});
    }

    SUBCASE("extras are single-axis degree d+1 constraints") {
        MomentSystem sys = build_moment_system(Region::ExpR2, 3, 3, 2);
        REQUIRE(sys.size() == 20 + 2);
        CHECK(sys.alphas[20].e == std::vector<int>{4, 0, 0});
        CHECK(sys.alphas[21].e == std::vector<int>{0, 4, 0});
        CHECK(sys.target_values[20] ==
              doctest::Approx(monomial_moment(Region::ExpR2, 3, MultiIndex({4, 0, 0}))));
        MomentSystem odd = build_moment_system(Region::ExpR2, 2, 2, 1);
        CHECK(odd.target_values.back() == 0.0); // x^3 target
    }
}

TEST_CASE("every even moment agrees with the quadrature oracle") {
    for (auto region : {Region::ExpR2, Region::ExpR, Region::Ball})
        for (int n = 1; n <= 4; ++n) {
            auto idx = enumerate_multi_indices(n, 6);
            for (const auto& a : idx) {
                if (!a.all_even()) continue;
                double got = monomial_moment(region, n, a);
                double want = oracle::moment(region, n, a.e);
                CHECK(rel_err(got, want) < 5e-3);  // coarse oracle tolerance
                CHECK(rel_err(got, want) < 1e-8);  // what the oracle actually delivers
            }
        }
}

TEST_CASE("stroud bound") {
    CHECK(stroud_bound(2, 6) == 10);
    CHECK(stroud_bound(4, 8) == 70);
    CHECK(stroud_bound(1, 0) == 1);
}

TEST_CASE("moller bound") {
    CHECK(moller_bound(7, 7) == 182);
    CHECK(moller_bound(6, 7) == 124);
    CHECK(moller_bound(4, 9) == 91);
    CHECK_THROWS_AS(moller_bound(3, 4), std::invalid_argument);
    for (int n = 1; n <= 11; ++n)
        for (int d : {3, 5, 7, 9})
            CHECK(moller_bound(n, d) >= stroud_bound(n, d));
}

TEST_CASE("effective bound reproduces the even-degree table entries") {
    CHECK(effective_bound(2, 8) == 15);
    CHECK(effective_bound(4, 6) == 35);
    CHECK(effective_bound(3, 4) == 10);
    CHECK(effective_bound(7, 7) == 182); // odd passthrough
    CHECK(effective_bound(1, 0) == 1);
}
