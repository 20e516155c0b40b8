#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "cubature/real.hpp"
#include "cubature/types.hpp"

namespace cubature {

/// A rule whose coordinates and weights are extended-precision reals.
struct ExtendedRule {
    RuleT<Real> rule;
    int working_digits = 0;
    Real max_residual;
    bool print32_stable = false; // 32-digit listing unchanged over two extra iterations
};

/// Newton polish of a double-precision rule on the full degree-d moment
/// system, using Moore-Penrose pseudoinverse steps (rank-revealing QR at
/// working precision).  digits is clamped up to 32*d + 10.  Terminates when
/// max |residual| < 10^-(digits-5) * V; throws on divergence.
ExtendedRule refine_rule(const Rule& rule, int d, int digits);

/// Max |residual| of the degree-d system, computed entirely at the rule's
/// working precision.
Real verify_extended(const RuleT<Real>& rule, int d);

/// Simple continued fraction terms [a0; a1, a2, ...], truncated at max_terms
/// or when the remainder falls below the precision floor.
std::vector<mpz_class> continued_fraction(const Real& x, int max_terms = 64);

struct SurdBounds {
    mpz_class max_rational = 1000000;     // p, q in p/q and sqrt(p/q)
    mpz_class max_quad_int = 1000000000;  // a, b, d in (a + b sqrt(c))/d
    long max_radicand = 1000;             // c (squarefree)
};

/// Closed-form candidate for a numeric constant.
struct SurdCandidate {
    enum class Form { rational, sqrt_rational, quadratic, sqrt_quadratic };
    Form form = Form::rational;
    // rational:        a/d
    // sqrt_rational:   sign * sqrt(a/d)
    // quadratic:       (a + b sqrt(c))/d
    // sqrt_quadratic:  sign * sqrt((a + b sqrt(c))/d)
    mpz_class a, b, c, d;
    int sign = 1;
    std::vector<mpz_class> cf_terms;
    int confidence_digits = 0;

    Real eval(mpfr_prec_t prec) const;
    std::string to_string() const;
};

/// Identify x as an integer/rational, sqrt of a rational, quadratic surd, or
/// sqrt of a quadratic surd.  Tries rational reconstruction from the CF, then
/// the squared value, then periodic-CF quadratic detection with an exact
/// integer-relation (LLL) fallback over small radicands.  Returns the first
/// candidate that reproduces x to (digits - 10) places; none is a valid answer.
std::optional<SurdCandidate> identify_surd(const Real& x, const SurdBounds& bounds = {});

} // namespace cubature
