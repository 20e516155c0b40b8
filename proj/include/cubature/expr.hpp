#pragma once

#include <gmpxx.h>

#include <memory>
#include <string>

#include "cubature/real.hpp"

namespace cubature {

/// Exact symbolic constant used by the catalog: rationals, pi, square roots,
/// field operations, and exact decimal literals.  Evaluable at any precision,
/// so the same recipe builds a rule in double or in extended precision.
class Expr {
  public:
    Expr() : Expr(from_long(0)) {}

    static Expr integer(long v);
    static Expr rational(long num, long den);
    static Expr rational(const mpq_class& q);
    static Expr pi();
    /// Exact decimal literal, e.g. "5.123512671436" (parsed as a rational).
    static Expr decimal(const std::string& s);

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    Expr operator-() const;
    friend Expr sqrt(const Expr& a);
    /// pi^(k/2)
    static Expr pi_half_pow(int k);

    Real eval(mpfr_prec_t prec) const;
    double eval_double() const;

    struct Node; // opaque; defined in expr.cpp

  private:
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Expr from_long(long v);
    std::shared_ptr<const Node> node_;
};

} // namespace cubature
