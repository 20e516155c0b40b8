#include "cubature/expr.hpp"

#include <stdexcept>

namespace cubature {

struct Expr::Node {
    enum class Kind { Rational, Pi, Sqrt, Add, Sub, Mul, Div, Neg } kind;
    mpq_class q;
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_node(Expr::Node::Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

} // namespace

Expr Expr::from_long(long v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Rational;
    n->q = v;
    return Expr(NodePtr(std::move(n)));
}

Expr Expr::integer(long v) { return from_long(v); }

Expr Expr::rational(long num, long den) {
    mpq_class q(num, den);
    q.canonicalize();
    return rational(q);
}

Expr Expr::rational(const mpq_class& q) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Rational;
    n->q = q;
    n->q.canonicalize();
    return Expr(NodePtr(std::move(n)));
}

Expr Expr::pi() { return Expr(make_node(Node::Kind::Pi)); }

Expr Expr::decimal(const std::string& s) {
    std::string t = s;
    bool neg = false;
    if (!t.empty() && (t[0] == '+' || t[0] == '-')) {
        neg = t[0] == '-';
        t = t.substr(1);
    }
    auto dot = t.find('.');
    std::string digits = t;
    size_t frac_len = 0;
    if (dot != std::string::npos) {
        digits = t.substr(0, dot) + t.substr(dot + 1);
        frac_len = t.size() - dot - 1;
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("Expr::decimal: bad literal '" + s + "'");
    mpz_class num(digits, 10);
    mpz_class den = 1;
    for (size_t i = 0; i < frac_len; ++i) den *= 10;
    mpq_class q(num, den);
    q.canonicalize();
    if (neg) q = -q;
    return rational(q);
}

Expr operator+(const Expr& a, const Expr& b) {
    return Expr(make_node(Expr::Node::Kind::Add, a.node_, b.node_));
}
Expr operator-(const Expr& a, const Expr& b) {
    return Expr(make_node(Expr::Node::Kind::Sub, a.node_, b.node_));
}
Expr operator*(const Expr& a, const Expr& b) {
    return Expr(make_node(Expr::Node::Kind::Mul, a.node_, b.node_));
}
Expr operator/(const Expr& a, const Expr& b) {
    return Expr(make_node(Expr::Node::Kind::Div, a.node_, b.node_));
}

Expr Expr::operator-() const { return Expr(make_node(Node::Kind::Neg, node_)); }

Expr sqrt(const Expr& a) { return Expr(make_node(Expr::Node::Kind::Sqrt, a.node_)); }

Expr Expr::pi_half_pow(int k) {
    Expr r = integer(1);
    Expr sp = sqrt(pi());
    for (int i = 0; i < k; ++i) r = r * sp;
    return r;
}

static Real eval_node(const Expr::Node& n, mpfr_prec_t prec) {
    using K = Expr::Node::Kind;
    switch (n.kind) {
        case K::Rational: return Real::from_mpq(n.q, prec);
        case K::Pi: return Real::pi(prec);
        case K::Sqrt: return sqrt(eval_node(*n.a, prec));
        case K::Add: return eval_node(*n.a, prec) + eval_node(*n.b, prec);
        case K::Sub: return eval_node(*n.a, prec) - eval_node(*n.b, prec);
        case K::Mul: return eval_node(*n.a, prec) * eval_node(*n.b, prec);
        case K::Div: return eval_node(*n.a, prec) / eval_node(*n.b, prec);
        case K::Neg: return -eval_node(*n.a, prec);
    }
    throw std::logic_error("unreachable");
}

Real Expr::eval(mpfr_prec_t prec) const { return eval_node(*node_, prec); }

double Expr::eval_double() const { return eval(96).to_double(); }

} // namespace cubature
