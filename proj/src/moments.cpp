#include "cubature/moments.hpp"

#include <algorithm>
#include <stdexcept>

namespace cubature {

std::string region_name(Region r) {
    switch (r) {
        case Region::GaussianProb: return "Gaussian";
        case Region::ExpR2: return "ExpR2";
        case Region::ExpR: return "ExpR";
        case Region::Ball: return "Ball";
    }
    return "?";
}

std::string region_tag(Region r) {
    switch (r) {
        case Region::GaussianProb: return "gauss";
        case Region::ExpR2: return "er2";
        case Region::ExpR: return "er1";
        case Region::Ball: return "ball";
    }
    return "?";
}

Region parse_region_tag(const std::string& tag) {
    if (tag == "gauss" || tag == "g") return Region::GaussianProb;
    if (tag == "er2" || tag == "e2") return Region::ExpR2;
    if (tag == "er1" || tag == "er" || tag == "e1") return Region::ExpR;
    if (tag == "ball" || tag == "s") return Region::Ball;
    throw std::invalid_argument("unknown region tag '" + tag + "'");
}

std::string MultiIndex::to_string() const {
    std::string s = "[";
    for (int i = 0; i < size(); ++i) {
        if (i) s += ",";
        s += std::to_string(e[i]);
    }
    return s + "]";
}

double MomentValue::value() const {
    // Route through mpfr so the double is correctly rounded.
    return value_real(96).to_double();
}

Real MomentValue::value_real(mpfr_prec_t prec) const {
    Real r = Real::from_mpq(coef, prec);
    if (pi_half != 0) {
        Real sp = sqrt(Real::pi(prec));
        r *= pow_int(sp, pi_half);
    }
    return r;
}

namespace {

// Gamma(j/2) = gamma_half(j).coef * pi^(gamma_half(j).pi_half / 2), j >= 1.
// Even j: (j/2 - 1)!.  Odd j: (j-2)!! / 2^((j-1)/2) * sqrt(pi).
MomentValue gamma_half(int j) {
    if (j < 1) throw std::invalid_argument("gamma_half: argument must be >= 1/2");
    MomentValue g;
    if (j % 2 == 0) {
        mpz_class f = 1;
        for (int i = 2; i <= j / 2 - 1; ++i) f *= i;
        g.coef = f;
        g.pi_half = 0;
    } else {
        mpz_class num = 1;
        for (int i = j - 2; i >= 1; i -= 2) num *= i;
        mpz_class den = 1;
        den <<= (j - 1) / 2;
        g.coef = mpq_class(num, den);
        g.coef.canonicalize();
        g.pi_half = 1;
    }
    return g;
}

MomentValue mv_mul(const MomentValue& a, const MomentValue& b) {
    return MomentValue{a.coef * b.coef, a.pi_half + b.pi_half};
}

MomentValue mv_div(const MomentValue& a, const MomentValue& b) {
    MomentValue r{a.coef / b.coef, a.pi_half - b.pi_half};
    r.coef.canonicalize();
    return r;
}

mpz_class factorial_z(int m) {
    mpz_class f = 1;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

} // namespace

MomentValue monomial_moment_exact(Region region, int n, const MultiIndex& alpha) {
    if (region == Region::GaussianProb)
        throw std::invalid_argument("monomial_moment: GaussianProb rules must be converted to ExpR2 first");
    if (alpha.size() != n)
        throw dimension_mismatch("monomial_moment: multi-index length != n");
    if (n < 1) throw std::invalid_argument("monomial_moment: n must be >= 1");
    for (int v : alpha.e)
        if (v < 0) throw std::invalid_argument("monomial_moment: negative exponent");

    if (!alpha.all_even()) return MomentValue{mpq_class(0), 0};

    // Product of Gamma((a_i + 1)/2), all factors at half-odd arguments.
    MomentValue prod{mpq_class(1), 0};
    int total = 0;
    for (int v : alpha.e) {
        prod = mv_mul(prod, gamma_half(v + 1));
        total += v;
    }
    const int sum_beta_twice = total + n; // 2 * sum of beta_i

    switch (region) {
        case Region::ExpR2:
            return prod;
        case Region::ExpR: {
            MomentValue num{2 * factorial_z(total + n - 1), 0};
            return mv_mul(mv_div(num, gamma_half(sum_beta_twice)), prod);
        }
        case Region::Ball:
            return mv_div(prod, gamma_half(sum_beta_twice + 2));
        default:
            throw std::logic_error("unreachable");
    }
}

double monomial_moment(Region region, int n, const MultiIndex& alpha) {
    return monomial_moment_exact(region, n, alpha).value();
}

MomentValue volume_exact(Region region, int n) {
    if (n < 1) throw std::invalid_argument("volume: n must be >= 1");
    if (region == Region::GaussianProb) return MomentValue{mpq_class(1), 0};
    return monomial_moment_exact(region, n, MultiIndex(std::vector<int>(n, 0)));
}

double volume(Region region, int n) { return volume_exact(region, n).value(); }

namespace {

void enumerate_degree(int n, int pos, int remaining, std::vector<int>& cur,
                      std::vector<MultiIndex>& out) {
    if (pos == n - 1) {
        cur[pos] = remaining;
        out.emplace_back(cur);
        return;
    }
    for (int v = remaining; v >= 0; --v) {
        cur[pos] = v;
        enumerate_degree(n, pos + 1, remaining - v, cur, out);
    }
}

} // namespace

std::vector<MultiIndex> enumerate_multi_indices(int n, int d) {
    std::vector<MultiIndex> out;
    std::vector<int> cur(n, 0);
    for (int t = 0; t <= d; ++t) enumerate_degree(n, 0, t, cur, out);
    return out;
}

MomentSystem build_moment_system(Region region, int n, int d, int k_extras) {
    if (region == Region::GaussianProb)
        throw std::invalid_argument("build_moment_system: convert GaussianProb rules to ExpR2 first");
    if (n < 1 || d < 0) throw std::invalid_argument("build_moment_system: need n >= 1, d >= 0");
    if (k_extras < 0 || k_extras > n)
        throw std::invalid_argument("build_moment_system: need 0 <= k_extras <= n");

    MomentSystem sys;
    sys.region = region;
    sys.n = n;
    sys.degree = d;
    sys.extras = k_extras;
    sys.alphas = enumerate_multi_indices(n, d);
    for (int j = 0; j < k_extras; ++j) {
        MultiIndex extra(std::vector<int>(n, 0));
        extra.e[j] = d + 1;
        sys.alphas.push_back(std::move(extra));
    }

    sys.targets.reserve(sys.alphas.size());
    sys.target_values.reserve(sys.alphas.size());
    sys.support.reserve(sys.alphas.size());
    for (const auto& a : sys.alphas) {
        sys.targets.push_back(monomial_moment_exact(region, n, a));
        sys.target_values.push_back(sys.targets.back().value());
        std::vector<std::pair<int, int>> supp;
        for (int k = 0; k < n; ++k)
            if (a.e[k] > 0) supp.emplace_back(k, a.e[k]);
        sys.support.push_back(std::move(supp));
    }
    return sys;
}

std::vector<Real> MomentSystem::targets_real(mpfr_prec_t prec) const {
    std::vector<Real> out;
    out.reserve(targets.size());
    // sqrt(pi) computed once; targets are coef * sqrt(pi)^pi_half
    Real sp = sqrt(Real::pi(prec));
    for (const auto& t : targets) {
        Real v = Real::from_mpq(t.coef, prec);
        if (t.pi_half != 0) v *= pow_int(sp, t.pi_half);
        out.push_back(std::move(v));
    }
    return out;
}

long long binomial_ll(int n, int k) {
    if (k < 0 || k > n) return 0;
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    if (!b.fits_slong_p()) throw std::overflow_error("binomial_ll: overflow");
    return b.get_si();
}

long long stroud_bound(int n, int d) {
    if (n < 1 || d < 0) throw std::invalid_argument("stroud_bound: need n >= 1, d >= 0");
    return binomial_ll(n + d / 2, d / 2);
}

long long moller_bound(int n, int d) {
    if (n < 1) throw std::invalid_argument("moller_bound: need n >= 1");
    if (d < 1 || d % 2 == 0)
        throw std::invalid_argument("moller_bound: defined for odd d only (use effective_bound)");
    const int s = (d + 1) / 2;

    auto binq = [](int a, int b) {
        mpz_class z;
        mpz_bin_uiui(z.get_mpz_t(), a, b);
        return mpq_class(z);
    };

    mpq_class total = binq(n + s - 1, n);
    for (int k = 1; k <= n - 1; ++k) {
        mpq_class pow2(1, 1);
        pow2 /= mpz_class(1) << (n - k); // 2^(k-n)
        if (s % 2 == 0)
            total += pow2 * binq(k + s - 1, k);
        else
            total += (1 - pow2) * binq(k + s - 2, k);
    }

    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), total.get_num().get_mpz_t(), total.get_den().get_mpz_t());
    if (!q.fits_slong_p()) throw std::overflow_error("moller_bound: overflow");
    return q.get_si();
}

long long effective_bound(int n, int d) {
    if (n < 1 || d < 0) throw std::invalid_argument("effective_bound: need n >= 1, d >= 0");
    if (d % 2 == 1) return moller_bound(n, d);
    long long s = stroud_bound(n, d);
    if (d >= 1) s = std::max(s, moller_bound(n, d - 1));
    return s;
}

} // namespace cubature
