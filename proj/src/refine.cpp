#include "cubature/refine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "cubature/moments.hpp"
#include "cubature/rule.hpp"

namespace cubature {

namespace {

// ---------------------------------------------------------------------------
// dense extended-precision matrices (sizes here are tiny; clarity wins)
// ---------------------------------------------------------------------------

struct RMatrix {
    int rows = 0, cols = 0;
    std::vector<Real> a;
    RMatrix() = default;
    RMatrix(int r, int c, mpfr_prec_t prec) : rows(r), cols(c), a(static_cast<size_t>(r) * c, Real(prec)) {}
    Real& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Real& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

RMatrix jacobian_ext(const RuleT<Real>& rule, const MomentSystem& sys, mpfr_prec_t prec) {
    const int N = rule.point_count(), n = rule.n;
    const int m = static_cast<int>(sys.size());
    int maxd = 0;
    for (const auto& al : sys.alphas)
        for (int v : al.e) maxd = std::max(maxd, v);

    std::vector<Real> pows(static_cast<size_t>(N) * n * (maxd + 1), Real(prec));
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < n; ++k) {
            Real* p = &pows[(static_cast<size_t>(i) * n + k) * (maxd + 1)];
            p[0] = Real(1.0, prec);
            for (int e = 1; e <= maxd; ++e) p[e] = p[e - 1] * rule.point(i)[k];
        }
    auto pw = [&](int i, int k, int e) -> const Real& {
        return pows[(static_cast<size_t>(i) * n + k) * (maxd + 1) + e];
    };

    RMatrix J(m, N * (n + 1), prec);
    for (int j = 0; j < m; ++j) {
        const auto& supp = sys.support[j];
        for (int i = 0; i < N; ++i) {
            Real mono(1.0, prec);
            for (auto [k, e] : supp) mono *= pw(i, k, e);
            J(j, N * n + i) = mono;
            for (auto [k, e] : supp) {
                Real d = rule.weights[i] * Real(static_cast<double>(e), prec) * pw(i, k, e - 1);
                for (auto [k2, e2] : supp)
                    if (k2 != k) d *= pw(i, k2, e2);
                J(j, i * n + k) = std::move(d);
            }
        }
    }
    return J;
}

// Min-norm least-squares solve via complete orthogonal decomposition:
// column-pivoted Householder QR of A, then QR of the trapezoid's transpose.
std::vector<Real> pinv_solve_ext(RMatrix A, std::vector<Real> rhs, mpfr_prec_t prec,
                                 const Real& rank_rel_tol) {
    const int m = A.rows, p = A.cols;
    const int kmax = std::min(m, p);
    std::vector<int> perm(p);
    for (int j = 0; j < p; ++j) perm[j] = j;

    auto col_norm2 = [&](int j, int from) {
        Real s(prec);
        for (int i = from; i < m; ++i) s.add_mul(A(i, j), A(i, j));
        return s;
    };

    // Householder QR with column pivoting; Q applied to rhs on the fly
    std::vector<std::vector<Real>> hh; // reflectors for rank r
    int rank = 0;
    Real first_diag(prec);
    for (int kcol = 0; kcol < kmax; ++kcol) {
        int best = kcol;
        Real bestn = col_norm2(kcol, kcol);
        for (int j = kcol + 1; j < p; ++j) {
            Real nj = col_norm2(j, kcol);
            if (nj > bestn) {
                bestn = nj;
                best = j;
            }
        }
        if (best != kcol) {
            for (int i = 0; i < m; ++i) std::swap(A(i, kcol), A(i, best));
            std::swap(perm[kcol], perm[best]);
        }
        Real normx = sqrt(bestn);
        if (rank == 0)
            first_diag = normx;
        else if (normx <= rank_rel_tol * first_diag)
            break;

        // reflector v = x + sign(x0)|x| e0
        std::vector<Real> v(static_cast<size_t>(m - kcol), Real(prec));
        for (int i = kcol; i < m; ++i) v[i - kcol] = A(i, kcol);
        if (v[0].sign() < 0) normx = -normx;
        v[0] += normx;
        Real vtv(prec);
        for (auto& vi : v) vtv.add_mul(vi, vi);
        if (vtv.is_zero()) break;

        auto apply = [&](auto&& get, auto&& set, int len) {
            (void)len;
            Real dot(prec);
            for (int i = kcol; i < m; ++i) dot.add_mul(v[i - kcol], get(i));
            Real coef = (Real(2.0, prec) * dot) / vtv;
            for (int i = kcol; i < m; ++i) set(i, get(i) - coef * v[i - kcol]);
        };
        for (int j = kcol; j < p; ++j)
            apply([&](int i) { return A(i, j); }, [&](int i, Real val) { A(i, j) = std::move(val); }, m);
        apply([&](int i) { return rhs[i]; }, [&](int i, Real val) { rhs[i] = std::move(val); }, m);
        hh.push_back(std::move(v));
        ++rank;
    }

    // R = top rank x p of A (upper trapezoid).  QR of R^T gives R = U^T Q2^T.
    RMatrix Rt(p, rank, prec);
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < p; ++j) Rt(j, i) = (j >= i) ? A(i, j) : Real(prec);

    std::vector<std::vector<Real>> hh2;
    for (int kcol = 0; kcol < rank; ++kcol) {
        Real nx2(prec);
        for (int i = kcol; i < p; ++i) nx2.add_mul(Rt(i, kcol), Rt(i, kcol));
        Real normx = sqrt(nx2);
        std::vector<Real> v(static_cast<size_t>(p - kcol), Real(prec));
        for (int i = kcol; i < p; ++i) v[i - kcol] = Rt(i, kcol);
        if (v[0].sign() < 0) normx = -normx;
        v[0] += normx;
        Real vtv(prec);
        for (auto& vi : v) vtv.add_mul(vi, vi);
        if (!vtv.is_zero())
            for (int j = kcol; j < rank; ++j) {
                Real dot(prec);
                for (int i = kcol; i < p; ++i) dot.add_mul(v[i - kcol], Rt(i, j));
                Real coef = (Real(2.0, prec) * dot) / vtv;
                for (int i = kcol; i < p; ++i) Rt(i, j) -= coef * v[i - kcol];
            }
        hh2.push_back(std::move(v));
    }

    // solve U^T z = Q1^T rhs (U = top rank x rank of Rt, upper triangular)
    std::vector<Real> z(static_cast<size_t>(rank), Real(prec));
    for (int i = 0; i < rank; ++i) {
        Real s = rhs[i];
        for (int j = 0; j < i; ++j) s -= Rt(j, i) * z[j];
        z[i] = s / Rt(i, i);
    }

    // delta' = Q2 [z; 0]: apply reflectors in reverse
    std::vector<Real> dp(static_cast<size_t>(p), Real(prec));
    for (int i = 0; i < rank; ++i) dp[i] = z[i];
    for (int kcol = rank - 1; kcol >= 0; --kcol) {
        const auto& v = hh2[kcol];
        Real vtv(prec);
        for (const auto& vi : v) vtv.add_mul(vi, vi);
        if (vtv.is_zero()) continue;
        Real dot(prec);
        for (int i = kcol; i < p; ++i) dot.add_mul(v[i - kcol], dp[i]);
        Real coef = (Real(2.0, prec) * dot) / vtv;
        for (int i = kcol; i < p; ++i) dp[i] -= coef * v[i - kcol];
    }

    std::vector<Real> delta(static_cast<size_t>(p), Real(prec));
    for (int j = 0; j < p; ++j) delta[perm[j]] = dp[j];
    return delta;
}

Real max_abs_ext(const std::vector<Real>& v, mpfr_prec_t prec) {
    Real m(prec);
    for (const auto& x : v) {
        Real ax = abs(x);
        if (ax > m) m = ax;
    }
    return m;
}

} // namespace

Real verify_extended(const RuleT<Real>& rule, int d) {
    if (rule.region == Region::GaussianProb)
        throw std::invalid_argument("verify_extended: convert GaussianProb rules to ExpR2 first");
    if (rule.point_count() < 1) throw std::invalid_argument("verify_extended: empty rule");
    const mpfr_prec_t prec = rule.weights[0].prec();
    MomentSystem sys = build_moment_system(rule.region, rule.n, d);
    std::vector<Real> targets = sys.targets_real(prec);
    std::vector<Real> r = residuals_t(rule, sys, targets);
    return max_abs_ext(r, prec);
}

ExtendedRule refine_rule(const Rule& rule, int d, int digits) {
    VerificationReport pre = verify(rule, d, 1e-8);
    if (!pre.pass)
        throw std::invalid_argument("refine_rule: input does not verify at degree " +
                                    std::to_string(d) + " (max residual " +
                                    std::to_string(pre.max_abs_residual) + ")");

    const int digits_eff = std::max(digits, 32 * d + 10);
    const mpfr_prec_t prec = Real::bits_for_digits(digits_eff + 15);

    RuleT<Real> ext;
    ext.region = rule.region == Region::GaussianProb ? Region::ExpR2 : rule.region;
    Rule base = rule.region == Region::GaussianProb ? convert_gaussian(rule) : rule;
    ext.n = base.n;
    ext.claimed_degree = d;
    ext.provenance = base.provenance + " refined";
    for (double x : base.points) ext.points.emplace_back(x, prec);
    for (double w : base.weights) ext.weights.emplace_back(w, prec);

    MomentSystem sys = build_moment_system(ext.region, ext.n, d);
    std::vector<Real> targets = sys.targets_real(prec);
    const Real V = volume_exact(ext.region, ext.n).value_real(prec);
    const Real tol = Real::pow10(-(digits_eff - 5), prec) * V;
    const Real rank_tol = Real::pow10(-(digits_eff / 2), prec);

    const int N = ext.point_count(), n = ext.n;
    auto newton_step = [&](std::vector<Real>& r) {
        RMatrix J = jacobian_ext(ext, sys, prec);
        std::vector<Real> rhs = r;
        std::vector<Real> delta = pinv_solve_ext(std::move(J), std::move(rhs), prec, rank_tol);
        for (int i = 0; i < N * n; ++i) ext.points[i] -= delta[i];
        for (int i = 0; i < N; ++i) ext.weights[i] -= delta[static_cast<size_t>(N) * n + i];
    };

    std::vector<Real> r = residuals_t(ext, sys, targets);
    Real best = max_abs_ext(r, prec);
    int no_progress = 0;
    bool converged = false;
    for (int iter = 0; iter < 64; ++iter) {
        Real cur = max_abs_ext(r, prec);
        if (cur < tol) {
            converged = true;
            break;
        }
        newton_step(r);
        r = residuals_t(ext, sys, targets);
        Real next = max_abs_ext(r, prec);
        if (next < best) {
            best = next;
            no_progress = 0;
        } else if (++no_progress >= 5) {
            throw std::runtime_error("refine_rule: residual stopped decreasing (diverged)");
        }
    }
    if (!converged) throw std::runtime_error("refine_rule: did not reach the residual target");

    // two extra iterations; the 32-digit listing must be stable to +-1 ulp
    RuleT<Real> before = ext;
    newton_step(r);
    r = residuals_t(ext, sys, targets);
    newton_step(r);
    r = residuals_t(ext, sys, targets);
    bool stable = true;
    const Real ulp_rel = Real::pow10(-31, prec);
    auto check = [&](const Real& a, const Real& b) {
        Real scale = abs(a);
        if (scale < Real(1.0, prec)) scale = Real(1.0, prec);
        if (abs(a - b) > ulp_rel * scale) stable = false;
    };
    for (size_t i = 0; i < ext.points.size(); ++i) check(before.points[i], ext.points[i]);
    for (size_t i = 0; i < ext.weights.size(); ++i) check(before.weights[i], ext.weights[i]);

    ExtendedRule out;
    out.rule = std::move(ext);
    out.working_digits = digits_eff;
    out.max_residual = max_abs_ext(r, prec);
    out.print32_stable = stable;
    return out;
}

// ---------------------------------------------------------------------------
// continued fractions and surd identification
// ---------------------------------------------------------------------------

std::vector<mpz_class> continued_fraction(const Real& x, int max_terms) {
    if (!x.is_finite()) throw std::invalid_argument("continued_fraction: x must be finite");
    const mpfr_prec_t prec = x.prec();
    const int digits = Real::digits_for_bits(prec);
    std::vector<mpz_class> terms;
    Real cur = x;
    // stop once the terms have consumed nearly all input precision
    double consumed = 0.0;
    for (int t = 0; t < max_terms; ++t) {
        mpz_class a = cur.floor_mpz();
        terms.push_back(a);
        Real frac = cur - Real::from_mpz(a, prec);
        consumed += 2.0 * (mpz_sizeinbase(a.get_mpz_t(), 10) - 0.5);
        if (consumed > digits - 10) break;
        if (frac < Real::pow10(-(digits - 6), prec)) break;
        cur = Real(1.0, prec) / frac;
    }
    return terms;
}

namespace {

struct Convergent {
    mpz_class h, k; // h/k
};

std::vector<Convergent> convergents(const std::vector<mpz_class>& terms) {
    std::vector<Convergent> out;
    mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    for (const auto& a : terms) {
        mpz_class h = a * h1 + h0, k = a * k1 + k0;
        out.push_back({h, k});
        h0 = h1;
        h1 = h;
        k0 = k1;
        k1 = k;
    }
    return out;
}

bool matches(const Real& x, const Real& v, int digits) {
    const mpfr_prec_t prec = x.prec();
    Real scale = abs(x);
    if (scale < Real(1.0, prec)) scale = Real(1.0, prec);
    return abs(x - v) <= Real::pow10(-(digits - 10), prec) * scale;
}

int matched_digits(const Real& x, const Real& v) {
    const mpfr_prec_t prec = x.prec();
    Real scale = abs(x);
    if (scale < Real(1.0, prec)) scale = Real(1.0, prec);
    Real err = abs(x - v) / scale;
    if (err.is_zero()) return Real::digits_for_bits(prec);
    double lg = std::log10(std::abs(err.to_double()));
    if (!std::isfinite(lg)) return Real::digits_for_bits(prec);
    return std::max(0, static_cast<int>(-lg));
}

mpz_class isqrt_z(const mpz_class& v) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
    return r;
}

// factor out the largest square: v = f^2 * c with c squarefree (trial division)
void squarefree_split(const mpz_class& v, mpz_class& f, mpz_class& c) {
    f = 1;
    c = v;
    for (mpz_class p = 2; p <= 100000 && p * p <= c; ++p) {
        while (mpz_divisible_p(c.get_mpz_t(), mpz_class(p * p).get_mpz_t())) {
            c /= p * p;
            f *= p;
        }
    }
    // leftover perfect square
    mpz_class r = isqrt_z(c);
    if (r * r == c) {
        f *= r;
        c = 1;
    }
}

std::optional<SurdCandidate> rational_from_cf(const Real& x, const std::vector<mpz_class>& terms,
                                              const mpz_class& bound, int digits) {
    const mpfr_prec_t prec = x.prec();
    for (const auto& cv : convergents(terms)) {
        if (cv.k > bound || abs(cv.h) > bound) break;
        if (cv.k == 0) continue;
        Real v = Real::from_mpz(cv.h, prec) / Real::from_mpz(cv.k, prec);
        if (matches(x, v, digits)) {
            SurdCandidate cand;
            cand.form = SurdCandidate::Form::rational;
            cand.a = cv.h;
            cand.d = cv.k;
            cand.cf_terms = terms;
            cand.confidence_digits = matched_digits(x, v);
            return cand;
        }
    }
    return std::nullopt;
}

// quadratic surd from a periodic continued fraction
std::optional<SurdCandidate> quadratic_from_periodic_cf(const Real& x,
                                                        const std::vector<mpz_class>& terms,
                                                        const SurdBounds& bounds, int digits) {
    const mpfr_prec_t prec = x.prec();
    const int usable = static_cast<int>(terms.size()) - 2; // last terms may carry noise
    if (usable < 4) return std::nullopt;

    for (int start = 0; start <= std::min(8, usable - 3); ++start) {
        for (int period = 1; period <= 12; ++period) {
            if (start + 3 * period > usable) break; // require >= 3 repeats
            bool ok = true;
            for (int j = start + period; j < usable && ok; ++j)
                ok = terms[j] == terms[j - period];
            if (!ok) continue;
            for (int j = start; j < start + period; ++j)
                if (terms[j] <= 0 && j > 0) ok = false; // CF tails have positive terms
            if (!ok) continue;

            // omega = [t_start; ..., t_{start+period-1}, omega]
            std::vector<mpz_class> block(terms.begin() + start, terms.begin() + start + period);
            auto cv = convergents(block);
            mpz_class h = cv.back().h, k = cv.back().k;
            mpz_class h1 = cv.size() > 1 ? cv[cv.size() - 2].h : mpz_class(1);
            mpz_class k1 = cv.size() > 1 ? cv[cv.size() - 2].k : mpz_class(0);
            // k w^2 + (k1 - h) w - h1 = 0  ->  w = (A + sqrt(D)) / B
            mpz_class A = h - k1, B = 2 * k, D = (h - k1) * (h - k1) + 4 * k * h1;
            if (D < 0) continue;

            // x = (P w + P') / (Q w + Q') from the pre-period convergents
            mpz_class P = 1, P1 = 0, Q = 0, Q1 = 1;
            if (start > 0) {
                std::vector<mpz_class> pre(terms.begin(), terms.begin() + start);
                auto pcv = convergents(pre);
                P = pcv.back().h;
                Q = pcv.back().k;
                P1 = pcv.size() > 1 ? pcv[pcv.size() - 2].h : mpz_class(1);
                Q1 = pcv.size() > 1 ? pcv[pcv.size() - 2].k : mpz_class(0);
            }
            // substitute and rationalize: x = (na + nb sqrt(D)) / dd
            mpz_class pa = P * A + P1 * B, qa = Q * A + Q1 * B;
            mpz_class dd = qa * qa - Q * Q * D;
            if (dd == 0) continue;
            mpz_class na = pa * qa - P * Q * D;
            mpz_class nb = P * qa - Q * pa;

            mpz_class f, c;
            squarefree_split(D, f, c);
            if (c <= 1) continue; // rational in disguise
            nb *= f;
            mpz_class g = gcd(gcd(na, nb), dd);
            if (g != 0) {
                na /= g;
                nb /= g;
                dd /= g;
            }
            if (dd < 0) {
                na = -na;
                nb = -nb;
                dd = -dd;
            }
            if (nb == 0 || c > bounds.max_radicand || abs(na) > bounds.max_quad_int ||
                abs(nb) > bounds.max_quad_int || dd > bounds.max_quad_int)
                continue;

            SurdCandidate cand;
            cand.form = SurdCandidate::Form::quadratic;
            cand.a = na;
            cand.b = nb;
            cand.c = c;
            cand.d = dd;
            cand.cf_terms = terms;
            Real v = cand.eval(prec);
            if (matches(x, v, digits)) {
                cand.confidence_digits = matched_digits(x, v);
                return cand;
            }
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// exact-arithmetic LLL in dimension 3 (for A x + B sqrt(c) + C ~ 0)
// ---------------------------------------------------------------------------

using ZVec = std::array<mpz_class, 4>;

mpq_class dotq(const ZVec& u, const ZVec& v) {
    mpz_class s = 0;
    for (int i = 0; i < 4; ++i) s += u[i] * v[i];
    return mpq_class(s);
}

mpz_class round_q(const mpq_class& q) {
    mpz_class quo, rem;
    mpz_fdiv_qr(quo.get_mpz_t(), rem.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    if (2 * rem >= q.get_den()) quo += 1;
    return quo;
}

// Lenstra-Lenstra-Lovasz on 3 integer vectors in Z^4, recomputing the
// Gram-Schmidt data from scratch per pass (dimension 3 keeps this cheap).
void lll3(std::array<ZVec, 3>& b) {
    auto gs = [&](std::array<std::array<mpq_class, 3>, 3>& mu, std::array<mpq_class, 3>& Bn) {
        // b*_i = b_i - sum_{j<i} mu_ij b*_j; track via rational Gram data
        std::array<std::array<mpq_class, 3>, 3> dot;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j <= i; ++j) dot[i][j] = dotq(b[i], b[j]);
        // B0 = <b0,b0>; mu10 = <b1,b0>/B0; etc.
        Bn[0] = dot[0][0];
        mu[1][0] = Bn[0] != 0 ? dot[1][0] / Bn[0] : mpq_class(0);
        Bn[1] = dot[1][1] - mu[1][0] * dot[1][0];
        mu[2][0] = Bn[0] != 0 ? dot[2][0] / Bn[0] : mpq_class(0);
        mpq_class t = dot[2][1] - mu[2][0] * dot[1][0];
        mu[2][1] = Bn[1] != 0 ? t / Bn[1] : mpq_class(0);
        Bn[2] = dot[2][2] - mu[2][0] * dot[2][0] - mu[2][1] * t;
    };

    std::array<std::array<mpq_class, 3>, 3> mu;
    std::array<mpq_class, 3> Bn;
    const mpq_class delta(3, 4);
    int k = 1;
    int guard = 0;
    gs(mu, Bn);
    while (k < 3 && ++guard < 500) {
        // size-reduce b_k against b_{k-1} .. b_0
        for (int j = k - 1; j >= 0; --j) {
            mpz_class r = round_q(mu[k][j]);
            if (r != 0) {
                for (int t = 0; t < 4; ++t) b[k][t] -= r * b[j][t];
                gs(mu, Bn);
            }
        }
        if (Bn[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * Bn[k - 1]) {
            ++k;
        } else {
            std::swap(b[k], b[k - 1]);
            gs(mu, Bn);
            k = std::max(1, k - 1);
        }
    }
}

std::optional<SurdCandidate> quadratic_from_lll(const Real& x, const SurdBounds& bounds,
                                                int digits) {
    const mpfr_prec_t prec = x.prec();
    // enough digits to separate relations within the integer bounds; the full
    // input precision is only needed for the verification step afterwards
    const int kdigits = std::min(digits - 8, 36);
    const Real K = Real::pow10(kdigits, prec);

    // squarefree radicand sweep, ascending
    for (long c = 2; c <= bounds.max_radicand; ++c) {
        {
            mpz_class f, sf;
            squarefree_split(c, f, sf);
            if (f != 1) continue;
        }
        Real sc = sqrt(Real(static_cast<double>(c), prec));
        std::array<ZVec, 3> basis = {ZVec{1, 0, 0, (x * K).round_mpz()},
                                     ZVec{0, 1, 0, (sc * K).round_mpz()},
                                     ZVec{0, 0, 1, K.round_mpz()}};
        lll3(basis);

        for (const auto& vec : basis) {
            const mpz_class &A = vec[0], &B = vec[1], &C = vec[2];
            if (A == 0 || B == 0) continue;
            if (abs(A) > bounds.max_quad_int || abs(B) > bounds.max_quad_int ||
                abs(C) > bounds.max_quad_int)
                continue;
            // A x + B sqrt(c) + C ~ 0  ->  x = (-C - B sqrt(c)) / A
            SurdCandidate cand;
            cand.form = SurdCandidate::Form::quadratic;
            cand.a = -C;
            cand.b = -B;
            cand.c = c;
            cand.d = A;
            if (cand.d < 0) {
                cand.a = -cand.a;
                cand.b = -cand.b;
                cand.d = -cand.d;
            }
            mpz_class g = gcd(gcd(cand.a, cand.b), cand.d);
            if (g > 1) {
                cand.a /= g;
                cand.b /= g;
                cand.d /= g;
            }
            Real v = cand.eval(prec);
            if (matches(x, v, digits)) {
                cand.confidence_digits = matched_digits(x, v);
                return cand;
            }
        }
    }
    return std::nullopt;
}

} // namespace

Real SurdCandidate::eval(mpfr_prec_t prec) const {
    Real va = Real::from_mpz(a, prec);
    Real vd = Real::from_mpz(d, prec);
    switch (form) {
        case Form::rational: return va / vd;
        case Form::sqrt_rational: {
            Real v = sqrt(va / vd);
            return sign < 0 ? -v : v;
        }
        case Form::quadratic:
            return (va + Real::from_mpz(b, prec) * sqrt(Real::from_mpz(c, prec))) / vd;
        case Form::sqrt_quadratic: {
            Real v = sqrt((va + Real::from_mpz(b, prec) * sqrt(Real::from_mpz(c, prec))) / vd);
            return sign < 0 ? -v : v;
        }
    }
    throw std::logic_error("unreachable");
}

std::string SurdCandidate::to_string() const {
    auto z = [](const mpz_class& v) { return v.get_str(); };
    switch (form) {
        case Form::rational: return d == 1 ? z(a) : z(a) + "/" + z(d);
        case Form::sqrt_rational: {
            std::string s = "sqrt(" + z(a) + (d == 1 ? "" : "/" + z(d)) + ")";
            return sign < 0 ? "-" + s : s;
        }
        case Form::quadratic: {
            std::string num = z(a) + (b >= 0 ? "+" : "-") + mpz_class(abs(b)).get_str() + "*sqrt(" + z(c) + ")";
            return "(" + num + ")/" + z(d);
        }
        case Form::sqrt_quadratic: {
            std::string num = z(a) + (b >= 0 ? "+" : "-") + mpz_class(abs(b)).get_str() + "*sqrt(" + z(c) + ")";
            std::string s = "sqrt((" + num + ")/" + z(d) + ")";
            return sign < 0 ? "-" + s : s;
        }
    }
    return "?";
}

std::optional<SurdCandidate> identify_surd(const Real& x, const SurdBounds& bounds) {
    if (!x.is_finite()) throw std::invalid_argument("identify_surd: x must be finite");
    const mpfr_prec_t prec = x.prec();
    const int digits = Real::digits_for_bits(prec);
    if (digits < 40) throw std::invalid_argument("identify_surd: need at least 40 digits");

    std::vector<mpz_class> terms = continued_fraction(x, 64);

    // 1: rational
    if (auto cand = rational_from_cf(x, terms, bounds.max_rational, digits)) return cand;

    // 2: sqrt of a rational (square, then reconstruct)
    if (!x.is_zero()) {
        Real y = x * x;
        auto yterms = continued_fraction(y, 64);
        if (auto yr = rational_from_cf(y, yterms, bounds.max_rational, digits - 2)) {
            SurdCandidate cand;
            cand.form = SurdCandidate::Form::sqrt_rational;
            cand.a = yr->a;
            cand.d = yr->d;
            cand.sign = x.sign() < 0 ? -1 : 1;
            cand.cf_terms = terms;
            Real v = cand.eval(prec);
            if (cand.a >= 0 && matches(x, v, digits)) {
                cand.confidence_digits = matched_digits(x, v);
                return cand;
            }
        }
    }

    // 3: quadratic surd, periodic CF first, then the integer-relation fallback
    if (auto cand = quadratic_from_periodic_cf(x, terms, bounds, digits)) return cand;
    if (auto cand = quadratic_from_lll(x, bounds, digits)) {
        cand->cf_terms = terms;
        return cand;
    }

    // 4: sqrt of a quadratic surd
    if (x.sign() > 0) {
        Real y = x * x;
        auto yterms = continued_fraction(y, 64);
        std::optional<SurdCandidate> yc = quadratic_from_periodic_cf(y, yterms, bounds, digits - 2);
        if (!yc) yc = quadratic_from_lll(y, bounds, digits - 2);
        if (yc) {
            SurdCandidate cand = *yc;
            cand.form = SurdCandidate::Form::sqrt_quadratic;
            cand.sign = 1;
            cand.cf_terms = terms;
            Real v = cand.eval(prec);
            if (matches(x, v, digits)) {
                cand.confidence_digits = matched_digits(x, v);
                return cand;
            }
        }
    }
    return std::nullopt;
}

} // namespace cubature
