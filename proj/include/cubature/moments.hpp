#pragma once

#include <gmpxx.h>

#include <vector>

#include "cubature/real.hpp"
#include "cubature/types.hpp"

namespace cubature {

/// Exact moment value: coef * pi^(pi_half/2).
///
/// Gamma at half-integers is evaluated by the exact recurrence from
/// Gamma(1/2) = sqrt(pi) and Gamma(1) = 1, so every target is a rational
/// times a half-integer power of pi.  The same exact value feeds both the
/// double and the extended-precision paths.
struct MomentValue {
    mpq_class coef;
    int pi_half = 0;

    double value() const;
    Real value_real(mpfr_prec_t prec) const;
};

/// Closed-form monomial moment for ExpR2 / ExpR / Ball.
/// Zero whenever any exponent is odd.  GaussianProb is rejected: its moments
/// are defined through the ExpR2 conversion only.
MomentValue monomial_moment_exact(Region region, int n, const MultiIndex& alpha);
double monomial_moment(Region region, int n, const MultiIndex& alpha);

/// Total weight-function mass V; equals the moment of the zero multi-index.
/// Defined for all four regions (GaussianProb has V = 1).
MomentValue volume_exact(Region region, int n);
double volume(Region region, int n);

/// The full constraint set for exactness to degree d: every multi-index with
/// total degree <= d in graded lexicographic order, plus k_extras
/// single-axis constraints x_j^(d+1), j = 1..k_extras.
struct MomentSystem {
    Region region = Region::ExpR2;
    int n = 0;
    int degree = 0;
    int extras = 0;
    std::vector<MultiIndex> alphas;
    std::vector<MomentValue> targets;
    std::vector<double> target_values;
    // nonzero-exponent support of each alpha, as (coordinate, exponent) pairs
    std::vector<std::vector<std::pair<int, int>>> support;

    size_t size() const { return alphas.size(); }
    std::vector<Real> targets_real(mpfr_prec_t prec) const;
};

MomentSystem build_moment_system(Region region, int n, int d, int k_extras = 0);

/// Multi-indices of total degree <= d in graded lexicographic order.
std::vector<MultiIndex> enumerate_multi_indices(int n, int d);

long long binomial_ll(int n, int k);

/// Stroud's bound: C(n + floor(d/2), floor(d/2)).
long long stroud_bound(int n, int d);

/// Moller's odd-degree bound, evaluated over exact rationals and rounded up.
long long moller_bound(int n, int d);

/// Table-compatible bound for any degree: Moller for odd d, otherwise
/// max(Stroud(d), Moller(d-1)).
long long effective_bound(int n, int d);

} // namespace cubature
