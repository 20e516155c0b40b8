#include <doctest.h>

#include <cmath>

#include "cubature/catalog.hpp"
#include "cubature/moments.hpp"
#include "cubature/refine.hpp"
#include "cubature/rule.hpp"

using namespace cubature;

TEST_CASE("continued fractions") {
    mpfr_prec_t p50 = Real::bits_for_digits(50);
    SUBCASE("one half") {
        auto t = continued_fraction(Real(0.5, p50));
        REQUIRE(t.size() == 2);
        CHECK(t[0] == 0);
        CHECK(t[1] == 2);
    }
    SUBCASE("an integer terminates immediately") {
        auto t = continued_fraction(Real(4.0, p50));
        REQUIRE(t.size() == 1);
        CHECK(t[0] == 4);
    }
    SUBCASE("sqrt(3) has period (1, 2)") {
        auto t = continued_fraction(sqrt(Real(3.0, p50)));
        REQUIRE(t.size() >= 12);
        CHECK(t[0] == 1);
        for (size_t i = 1; i + 1 < t.size() && i < 12; i += 2) {
            CHECK(t[i] == 1);
            CHECK(t[i + 1] == 2);
        }
    }
    SUBCASE("convergents obey the classical error bound") {
        Real x = sqrt(Real(3.0, p50));
        auto t = continued_fraction(x);
        mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
        std::vector<std::pair<mpz_class, mpz_class>> cv;
        for (const auto& a : t) {
            mpz_class h = a * h1 + h0, k = a * k1 + k0;
            cv.emplace_back(h, k);
            h0 = h1;
            h1 = h;
            k0 = k1;
            k1 = k;
        }
        for (size_t i = 0; i + 1 < cv.size(); ++i) {
            Real approx = Real::from_mpz(cv[i].first, p50) / Real::from_mpz(cv[i].second, p50);
            Real bound = Real(1.0, p50) / (Real::from_mpz(cv[i].second, p50) *
                                           Real::from_mpz(cv[i + 1].second, p50));
            CHECK(abs(x - approx) <= bound);
        }
    }
}

TEST_CASE("identify_surd") {
    mpfr_prec_t p50 = Real::bits_for_digits(50);
    SUBCASE("sqrt(1/2)") {
        auto c = identify_surd(sqrt(Real(0.5, p50)));
        REQUIRE(c.has_value());
        CHECK(c->form == SurdCandidate::Form::sqrt_rational);
        CHECK(c->a == 1);
        CHECK(c->d == 2);
        CHECK(c->confidence_digits >= 38);
    }
    SUBCASE("(1 + sqrt 7)/2") {
        Real g = (Real(1.0, p50) + sqrt(Real(7.0, p50))) / Real(2.0, p50);
        auto c = identify_surd(g);
        REQUIRE(c.has_value());
        CHECK(c->form == SurdCandidate::Form::quadratic);
        CHECK(c->a == 1);
        CHECK(c->b == 1);
        CHECK(c->c == 7);
        CHECK(c->d == 2);
    }
    SUBCASE("pi is not identified within the default bounds") {
        CHECK_FALSE(identify_surd(Real::pi(p50)).has_value());
    }
    SUBCASE("negative rationals work") {
        auto c = identify_surd(Real(-1.0, p50) / Real(9.0, p50));
        REQUIRE(c.has_value());
        CHECK(c->form == SurdCandidate::Form::rational);
        CHECK(c->a == -1);
        CHECK(c->d == 9);
    }
    SUBCASE("low precision is rejected") {
        CHECK_THROWS_AS(identify_surd(Real(0.5, Real::bits_for_digits(20))),
                        std::invalid_argument);
    }
}

TEST_CASE("verify_extended") {
    SUBCASE("closed-form catalog rules at 64 digits sit below 1e-55") {
        for (const char* id : {"e5r2-22-4", "s5-22-4", "e3r2-10-4"}) {
            auto ext = build_catalog_rule_ext(id, 64);
            Real res = verify_extended(ext, ext.claimed_degree);
            CHECK(res < Real::pow10(-55, ext.weights[0].prec()));
        }
    }
    SUBCASE("an exact origin rule has zero residual at degree 0") {
        mpfr_prec_t prec = Real::bits_for_digits(64);
        RuleT<Real> r;
        r.region = Region::ExpR2;
        r.n = 2;
        r.points = {Real(prec), Real(prec)};
        r.weights = {volume_exact(Region::ExpR2, 2).value_real(prec)};
        CHECK(verify_extended(r, 0).is_zero());
    }
}

TEST_CASE("refine_rule") {
    SUBCASE("the 10-point degree-6 rule reaches 1e-190 x V at 202 digits") {
        Rule r = build_catalog_rule("e2r2-10-6");
        ExtendedRule ext = refine_rule(r, 6, 202);
        CHECK(ext.working_digits == 202);
        mpfr_prec_t prec = ext.rule.weights[0].prec();
        Real limit = Real::pow10(-190, prec) * Real::pi(prec);
        CHECK(ext.max_residual < limit);
        CHECK(ext.print32_stable);

        SUBCASE("it polishes rather than re-searching") {
            double move = 0;
            for (size_t i = 0; i < r.points.size(); ++i)
                move = std::max(move, std::abs(r.points[i] - ext.rule.points[i].to_double()));
            CHECK(move < 1e-9);
        }
    }
    SUBCASE("the 11-point exponential-weight rule refines the same way") {
        Rule r = build_catalog_rule("e2r1-11-6");
        ExtendedRule ext = refine_rule(r, 6, 202);
        mpfr_prec_t prec = ext.rule.weights[0].prec();
        Real V = volume_exact(Region::ExpR, 2).value_real(prec);
        CHECK(ext.max_residual < Real::pow10(-190, prec) * V);
    }
    SUBCASE("digits are clamped to 32 d + 10") {
        Rule r = build_catalog_rule("e2r2-10-6");
        ExtendedRule ext = refine_rule(r, 6, 64);
        CHECK(ext.working_digits == 202);
    }
    SUBCASE("non-verifying input is rejected with no partial result") {
        Rule r = build_catalog_rule("e2r2-10-6");
        r.points[0] += 0.25;
        CHECK_THROWS_AS(refine_rule(r, 6, 202), std::invalid_argument);
    }
}
