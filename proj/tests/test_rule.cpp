#include <doctest.h>

#include <cmath>

#include "cubature/catalog.hpp"
#include "cubature/moments.hpp"
#include "cubature/rule.hpp"

using namespace cubature;

namespace {

Rule origin_rule(Region region, int n) {
    Rule r;
    r.region = region;
    r.n = n;
    r.points.assign(n, 0.0);
    r.weights = {volume(region, n)};
    r.provenance = "origin";
    return r;
}

double cos_sum(std::span<const double> x) {
    double s = 0;
    for (double v : x) s += v;
    return std::cos(s);
}

} // namespace

TEST_CASE("residuals") {
    Rule o = origin_rule(Region::ExpR2, 3);
    MomentSystem d0 = build_moment_system(Region::ExpR2, 3, 0);
    CHECK(residuals(o, d0)[0] == doctest::Approx(0.0).epsilon(1e-16));

    Rule r22 = build_catalog_rule("e5r2-22-4");
    MomentSystem d4 = build_moment_system(Region::ExpR2, 5, 4);
    for (double v : residuals(r22, d4)) CHECK(std::abs(v) < 1e-12);

    Rule r10 = build_catalog_rule("e2r2-10-6");
    MomentSystem d6 = build_moment_system(Region::ExpR2, 2, 6);
    double worst = 0;
    for (double v : residuals(r10, d6)) worst = std::max(worst, std::abs(v));
    CHECK(worst < 1e-11);

    CHECK_THROWS_AS(residuals(r10, d4), dimension_mismatch);
}

TEST_CASE("verify") {
    Rule s415 = build_catalog_rule("s4-15-4");
    CHECK(verify(s415, 4, 1e-12).pass);
    CHECK_FALSE(verify(s415, 5, 1e-12).pass);
    CHECK(verify(origin_rule(Region::Ball, 2), 0).pass);

    VerificationReport rep = verify(s415, 5, 1e-12);
    CHECK(rep.max_abs_residual > rep.tolerance_used);
    CHECK(rep.degree_checked == 5);
    CHECK(rep.worst_constraint.total_degree() <= 5);
}

TEST_CASE("detected degree") {
    CHECK(detected_degree(build_catalog_rule("s7-183-7"), 1e-11, 8) == 7);
    CHECK(detected_degree(build_catalog_rule("e6r2-28-4"), 1e-11, 6) == 4);
    // odd moments vanish with a single point at the origin
    CHECK(detected_degree(origin_rule(Region::ExpR2, 2), 1e-11, 4) == 1);
}

TEST_CASE("evaluate") {
    Rule s415 = build_catalog_rule("s4-15-4");
    CHECK(std::abs(evaluate(s415, cos_sum) - 3.4818127309) < 1e-9);

    double wsum = 0;
    for (double w : s415.weights) wsum += w;
    CHECK(evaluate(s415, [](std::span<const double>) { return 1.0; }) ==
          doctest::Approx(wsum).epsilon(1e-15));

    // integrating monomials reproduces the moments up to the claimed degree
    for (const char* id : {"e5r2-22-4", "s4-23-5", "e2r2-10-6"}) {
        Rule r = build_catalog_rule(id);
        double V = volume(r.region, r.n);
        for (const auto& a : enumerate_multi_indices(r.n, r.claimed_degree)) {
            double got = evaluate(r, [&](std::span<const double> x) {
                double v = 1.0;
                for (int k = 0; k < r.n; ++k)
                    for (int t = 0; t < a.e[k]; ++t) v *= x[k];
                return v;
            });
            CHECK(std::abs(got - monomial_moment(r.region, r.n, a)) < 1e-10 * V);
        }
    }
}

TEST_CASE("stability factor") {
    CHECK(stability_factor(build_catalog_rule("e7r2-38-4")) == doctest::Approx(7.18).epsilon(0.0015));
    CHECK(stability_factor(build_catalog_rule("s7-38-4")) == doctest::Approx(8.55).epsilon(0.0015));
    CHECK(stability_factor(build_catalog_rule("e5r2-22-4")) == 1.0);

    Rule zero = origin_rule(Region::Ball, 2);
    zero.weights[0] = 0.0;
    CHECK_THROWS_AS(stability_factor(zero), std::domain_error);

    // 1.0 exactly iff all weights positive
    for (const auto& e : catalog_entries()) {
        Rule r = build_catalog_rule(e.id);
        bool all_pos = true;
        for (double w : r.weights) all_pos = all_pos && w > 0;
        CHECK((stability_factor(r) == 1.0) == all_pos);
    }
}

TEST_CASE("quality codes") {
    CHECK(quality_of(build_catalog_rule("s4-15-4")) == "PB");
    CHECK(quality_of(build_catalog_rule("s3-10-4")) == "PO");
    CHECK(quality_of(build_catalog_rule("e7r2-38-4")) == "N");
    CHECK(quality_of(build_catalog_rule("s5-22-4")) == "PI");
}

TEST_CASE("gaussian conversions") {
    Rule e = build_catalog_rule("e5r2-22-4");
    Rule g = convert_from_gaussian(e);
    CHECK(g.region == Region::GaussianProb);
    double gsum = 0;
    for (double w : g.weights) gsum += w;
    CHECK(gsum == doctest::Approx(1.0).epsilon(1e-14));

    Rule back = convert_gaussian(g);
    double drift = 0;
    for (size_t i = 0; i < e.points.size(); ++i)
        drift = std::max(drift, std::abs(e.points[i] - back.points[i]) /
                                    std::max(1.0, std::abs(e.points[i])));
    for (size_t i = 0; i < e.weights.size(); ++i)
        drift = std::max(drift, std::abs(e.weights[i] - back.weights[i]) /
                                    std::max(1.0, std::abs(e.weights[i])));
    CHECK(drift < 1e-14);

    double esum = 0;
    for (double w : e.weights) esum += w;
    CHECK(esum == doctest::Approx(std::pow(M_PI, 2.5)).epsilon(1e-14));

    // the origin stays put
    Rule og = origin_rule(Region::GaussianProb, 3);
    og.weights[0] = 1.0;
    Rule oe = convert_gaussian(og);
    CHECK(oe.points[0] == 0.0);
    CHECK(oe.points[2] == 0.0);

    // a converted Gaussian rule verifies through the conversion path
    CHECK(verify(g, 4, 1e-11).pass);
    CHECK_FALSE(verify(g, 5, 1e-11).pass);

    CHECK_THROWS_AS(convert_gaussian(e), std::invalid_argument);
    CHECK_THROWS_AS(convert_from_gaussian(g), std::invalid_argument);
}
