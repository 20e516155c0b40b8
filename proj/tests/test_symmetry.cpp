#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cubature/catalog.hpp"
#include "cubature/moments.hpp"
#include "cubature/rule.hpp"
#include "cubature/search.hpp"
#include "cubature/symmetry.hpp"

using namespace cubature;

TEST_CASE("detect_shells") {
    SUBCASE("183-point rule decomposes as 1+56+126") {
        auto dec = detect_shells(build_catalog_rule("e7r2-183-7"));
        REQUIRE(dec.shells.size() == 3);
        CHECK(dec.shells[0].members.size() == 1);
        CHECK(dec.shells[1].members.size() == 56);
        CHECK(dec.shells[2].members.size() == 126);
        CHECK(shells_signature(dec) == "1+56+126");
        for (const auto& s : dec.shells) CHECK(s.uniform_weight);
    }
    SUBCASE("44-point rule has shells 12+32 at the printed radii") {
        auto dec = detect_shells(build_catalog_rule("e6r1-44-5"), 1e-7, 1e-7);
        REQUIRE(dec.shells.size() == 2);
        CHECK(dec.shells[0].members.size() == 12);
        CHECK(dec.shells[1].members.size() == 32);
        CHECK(dec.shells[0].radius == doctest::Approx(5.40578920).epsilon(1e-8));
        CHECK(dec.shells[1].radius == doctest::Approx(11.85796266).epsilon(1e-8));
    }
    SUBCASE("single point is a single shell; the partition is complete") {
        Rule r;
        r.region = Region::ExpR2;
        r.n = 2;
        r.points = {0.3, 0.4};
        r.weights = {1.0};
        auto dec = detect_shells(r);
        REQUIRE(dec.shells.size() == 1);
        CHECK(dec.shells[0].radius == doctest::Approx(0.5));

        Rule big = build_catalog_rule("s6-127-7");
        auto d2 = detect_shells(big);
        size_t covered = 0;
        for (const auto& s : d2.shells) covered += s.members.size();
        CHECK(covered == static_cast<size_t>(big.point_count()));
    }
}

TEST_CASE("align_axes") {
    SUBCASE("a 2-d point at (1,1) rotates onto (sqrt2, 0)") {
        Rule r;
        r.region = Region::ExpR2;
        r.n = 2;
        r.points = {1.0, 1.0};
        r.weights = {1.0};
        Rule a = align_axes(r, {0});
        CHECK(a.point(0)[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
        CHECK(std::abs(a.point(0)[1]) < 1e-15);
    }
    SUBCASE("residuals and radii are preserved on catalog rules") {
        for (const char* id : {"e2r2-10-6", "s4-23-5", "e5r2-22-4"}) {
            Rule r = build_catalog_rule(id);
            std::vector<int> chosen;
            for (int i = 0; i < r.point_count() && static_cast<int>(chosen.size()) < r.n; ++i) {
                chosen.push_back(i);
                try {
                    align_axes(r, chosen);
                } catch (const std::invalid_argument&) {
                    chosen.pop_back();
                }
            }
            Rule a = align_axes(r, chosen);
            double before = verify(r, r.claimed_degree, 1e-9).max_abs_residual;
            double after = verify(a, r.claimed_degree, 1e-9).max_abs_residual;
            CHECK(std::abs(before - after) < 1e-12 * std::max(1.0, volume(r.region, r.n)));
            for (int i = 0; i < r.point_count(); ++i)
                CHECK(point_radius(a, i) == doctest::Approx(point_radius(r, i)).epsilon(1e-12));
        }
    }
    SUBCASE("three chosen points in 3-d become lower-triangular") {
        Rule r = build_catalog_rule("e3r2-10-4");
        Eigen::MatrixXd Q = cayley_rotation(3, {0.37, -0.21, 0.9});
        Rule rot = apply_orthogonal(r, Q);
        Rule a = align_axes(rot, {0, 1, 3});
        CHECK(std::abs(a.point(0)[1]) < 1e-13);
        CHECK(std::abs(a.point(0)[2]) < 1e-13);
        CHECK(std::abs(a.point(1)[2]) < 1e-13);
        CHECK(a.point(0)[0] > 0);
        CHECK(a.point(1)[1] > 0);
        CHECK(a.point(3)[2] > 0);
    }
    SUBCASE("rank-deficient choices are rejected") {
        Rule r;
        r.region = Region::ExpR2;
        r.n = 2;
        r.points = {1.0, 0.0, 2.0, 0.0};
        r.weights = {1.0, 1.0};
        CHECK_THROWS_AS(align_axes(r, {0, 1}), std::invalid_argument);
    }
}

TEST_CASE("angular order") {
    Rule r = build_catalog_rule("e5r2-22-4");
    auto dec = detect_shells(r);
    auto& shell = dec.shells[2].members;
    auto order = angular_order(r, shell, shell[0]);
    CHECK(order.size() == shell.size());
    CHECK(order[0] == shell[0]);
}

TEST_CASE("cayley_rotation") {
    SUBCASE("zero parameters give the identity") {
        Eigen::MatrixXd Q = cayley_rotation(4, {0, 0, 0, 0, 0, 0});
        CHECK((Q - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("n=2 parameter t is a rotation by 2 atan(t)") {
        double t = 0.37;
        Eigen::MatrixXd Q = cayley_rotation(2, {t});
        double th = 2 * std::atan(t);
        CHECK(Q(0, 0) == doctest::Approx(std::cos(th)).epsilon(1e-14));
        CHECK(Q(1, 0) == doctest::Approx(std::sin(th)).epsilon(1e-14));
        CHECK(Q(0, 1) == doctest::Approx(-std::sin(th)).epsilon(1e-14));
    }
    SUBCASE("random parameters give an orthogonal matrix") {
        std::vector<double> p = {0.3, -1.2, 0.8, 2.0, -0.1, 0.55, 1.4, -0.7, 0.05, 0.9};
        Eigen::MatrixXd Q = cayley_rotation(5, p);
        CHECK((Q.transpose() * Q - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-13);
    }
    CHECK_THROWS_AS(cayley_rotation(3, {1.0}), std::invalid_argument);
}

TEST_CASE("orient_simplex") {
    SUBCASE("recovers the four-point pattern from a random rotation") {
        Rule s = simplex_rule(Region::ExpR2, 3, SimplexVariant::simple_a);
        Rule rot = apply_orthogonal(s, cayley_rotation(3, {0.9, -0.4, 0.2}));
        Rule rec = orient_simplex(rot, {0, 1, 2, 3}, SimplexVariant::simple_a);
        // row multiset match: each canonical row has exactly one close partner
        std::vector<char> used(4, 0);
        for (int i = 0; i < 4; ++i) {
            int hit = -1;
            for (int j = 0; j < 4 && hit < 0; ++j) {
                if (used[j]) continue;
                double d = 0;
                for (int k = 0; k < 3; ++k)
                    d = std::max(d, std::abs(s.point(i)[k] - rec.point(j)[k]));
                if (d < 1e-10) hit = j;
            }
            CHECK(hit >= 0);
            if (hit >= 0) used[hit] = 1;
        }
    }
    SUBCASE("already-oriented input is a fixed point") {
        Rule s = simplex_rule(Region::Ball, 4, SimplexVariant::simple_b);
        Rule rec = orient_simplex(s, {0, 1, 2, 3, 4}, SimplexVariant::simple_b);
        for (size_t i = 0; i < s.points.size(); ++i)
            CHECK(rec.points[i] == doctest::Approx(s.points[i]).epsilon(1e-12));
    }
    SUBCASE("the 22-point rule's inner shell matches the printed pattern") {
        Rule r = build_catalog_rule("e5r2-22-4");
        auto dec = detect_shells(r);
        auto members = dec.shells[1].members;
        Rule rot = apply_orthogonal(
            r, cayley_rotation(5, {0.1, 0.2, -0.3, 0.4, 0.5, -0.6, 0.7, 0.8, -0.9, 1.0}));
        Rule rec = orient_simplex(rot, members, SimplexVariant::simple_b);
        // first member onto (c, c, c, c, c) with c = sqrt(1/2); the rest are
        // the permutations of (-h, a, a, a, a)
        const double c = std::sqrt(0.5);
        const double h = (8 * std::sqrt(3.0) + std::sqrt(2.0)) / 10;
        const double a = (2 * std::sqrt(3.0) - std::sqrt(2.0)) / 10;
        for (int k = 0; k < 5; ++k)
            CHECK(rec.point(members[0])[k] == doctest::Approx(c).epsilon(1e-10));
        for (size_t j = 1; j < members.size(); ++j) {
            std::vector<double> row(rec.point(members[j]), rec.point(members[j]) + 5);
            std::sort(row.begin(), row.end());
            CHECK(row[0] == doctest::Approx(-h).epsilon(1e-10));
            for (int k = 1; k < 5; ++k) CHECK(row[k] == doctest::Approx(a).epsilon(1e-10));
        }
    }
    SUBCASE("non-simplex shells are rejected") {
        Rule r = build_catalog_rule("e4r2-16-4b");
        CHECK_THROWS_AS(orient_simplex(r, {0, 1, 2, 3, 4}, SimplexVariant::simple_a),
                        std::invalid_argument);
    }
}

TEST_CASE("project_to_shell") {
    Rule r;
    r.region = Region::ExpR2;
    r.n = 2;
    r.points = {0.9, 0.0, 0.0, 1.1};
    r.weights = {0.5, 0.5};

    SUBCASE("equal weights project to the mean radius") {
        Rule p = project_to_shell(r, {0, 1});
        CHECK(point_radius(p, 0) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(point_radius(p, 1) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(p.weights[0] == 0.5);
    }
    SUBCASE("a selection already on a shell is unchanged") {
        Rule onshell = project_to_shell(r, {0, 1});
        Rule again = project_to_shell(onshell, {0, 1});
        for (size_t i = 0; i < onshell.points.size(); ++i)
            CHECK(again.points[i] == doctest::Approx(onshell.points[i]).epsilon(1e-15));
    }
    SUBCASE("blend moves points part way") {
        Rule p = project_to_shell(r, {0, 1}, {}, 0.5);
        CHECK(point_radius(p, 0) == doctest::Approx(0.95).epsilon(1e-14));
    }
    SUBCASE("origin points cannot be projected") {
        Rule z = r;
        z.points[0] = z.points[1] = 0.0;
        CHECK_THROWS_AS(project_to_shell(z, {0}), std::invalid_argument);
    }
    SUBCASE("perturb, project, re-solve recovers a degree-4 rule") {
        Rule r28 = build_catalog_rule("e6r2-28-4");
        std::mt19937_64 rng(11);
        auto noise = [&] { return ((rng() >> 11) * 0x1p-53 - 0.5) * 2e-3; };
        Rule pert = r28;
        for (double& x : pert.points) x += noise();
        std::vector<int> outer;
        for (int i = 0; i < pert.point_count(); ++i)
            if (point_radius(pert, i) > 0.5) outer.push_back(i);
        Rule seeded = project_to_shell(pert, outer);
        SearchConfig c;
        c.region = r28.region;
        c.n = r28.n;
        c.degree = 4;
        c.N = r28.point_count();
        MomentSystem sys = build_moment_system(c.region, c.n, c.degree);
        SearchReport rep = solve(seeded, sys, c);
        REQUIRE(rep.outcome == SearchOutcome::success);
        CHECK(verify(*rep.rule, 4, 1e-11).pass);
    }
}

TEST_CASE("linear_assignment") {
    SUBCASE("identity and swap") {
        Eigen::MatrixXd c1(2, 2);
        c1 << 0, 1, 1, 0;
        CHECK(linear_assignment(c1) == std::vector<int>{0, 1});
        Eigen::MatrixXd c2(2, 2);
        c2 << 1, 0, 0, 1;
        CHECK(linear_assignment(c2) == std::vector<int>{1, 0});
    }
    SUBCASE("matches the exhaustive minimum up to size 7") {
        std::mt19937_64 rng(2024);
        for (int trial = 0; trial < 60; ++trial) {
            int n = 2 + static_cast<int>(rng() % 6);
            Eigen::MatrixXd C(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    C(i, j) = (rng() >> 11) * 0x1p-53 * 10 - 2.0; // negatives too
            auto sol = linear_assignment(C);
            double got = 0;
            for (int i = 0; i < n; ++i) got += C(i, sol[i]);
            std::vector<int> p(n);
            std::iota(p.begin(), p.end(), 0);
            double best = std::numeric_limits<double>::infinity();
            do {
                double cst = 0;
                for (int i = 0; i < n; ++i) cst += C(i, p[i]);
                best = std::min(best, cst);
            } while (std::next_permutation(p.begin(), p.end()));
            CHECK(got == doctest::Approx(best).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(linear_assignment(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("symmetrize_bilateral") {
    SUBCASE("an exactly symmetric rule is a fixed point") {
        Rule r = build_catalog_rule("e2r2-10-6");
        int axis = -1;
        Rule s = symmetrize_bilateral(r, {}, &axis);
        CHECK(axis == 0);
        for (size_t i = 0; i < r.points.size(); ++i)
            CHECK(std::abs(s.points[i] - r.points[i]) < 1e-13);
        for (size_t i = 0; i < r.weights.size(); ++i)
            CHECK(std::abs(s.weights[i] - r.weights[i]) < 1e-13);
    }
    SUBCASE("self-assigned points land exactly on the plane") {
        Rule r;
        r.region = Region::ExpR2;
        r.n = 2;
        // a pair straddling the x2 axis plus one point close to it
        r.points = {1.0, 0.5, -1.0, 0.5, 0.01, -0.8};
        r.weights = {1.0, 1.0, 0.7};
        Rule s = symmetrize_bilateral(r, 0);
        bool found_zero = false;
        for (int i = 0; i < s.point_count(); ++i)
            if (s.point(i)[0] == 0.0) found_zero = true;
        CHECK(found_zero);
    }
    SUBCASE("the output is exactly mirror-invariant") {
        SearchConfig c;
        c.region = Region::ExpR2;
        c.n = 3;
        c.degree = 2;
        c.N = 7;
        c.seed = 31;
        Rule r = initialize(c);
        int axis = -1;
        Rule s = symmetrize_bilateral(r, {}, &axis);
        // reflect and compare as multisets of (point, weight)
        std::vector<std::pair<std::vector<double>, double>> a, b;
        for (int i = 0; i < s.point_count(); ++i) {
            std::vector<double> x(s.point(i), s.point(i) + s.n);
            a.emplace_back(x, s.weights[i]);
            x[axis] = x[axis] == 0.0 ? 0.0 : -x[axis];
            b.emplace_back(x, s.weights[i]);
        }
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
    }
    SUBCASE("perturb, symmetrize, re-solve recovers a bilateral degree-6 rule") {
        Rule r = build_catalog_rule("e2r2-10-6");
        std::mt19937_64 rng(5);
        Rule pert = r;
        for (double& x : pert.points) x += ((rng() >> 11) * 0x1p-53 - 0.5) * 2e-4;
        Rule seeded = symmetrize_bilateral(pert);
        SearchConfig c;
        c.region = r.region;
        c.n = 2;
        c.degree = 6;
        c.N = 10;
        MomentSystem sys = build_moment_system(c.region, 2, 6);
        SearchReport rep = solve(seeded, sys, c);
        REQUIRE(rep.outcome == SearchOutcome::success);
        CHECK(verify(*rep.rule, 6, 1e-11).pass);
        // the recovered rule is bilaterally symmetric to 1e-10
        Rule sym = symmetrize_bilateral(*rep.rule);
        double drift = 0;
        for (size_t i = 0; i < sym.points.size(); ++i)
            drift = std::max(drift, std::abs(sym.points[i] - rep.rule->points[i]));
        CHECK(drift < 1e-10);
    }
}
