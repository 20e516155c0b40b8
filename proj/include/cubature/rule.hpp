#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cubature/moments.hpp"
#include "cubature/types.hpp"

namespace cubature {

inline double one_like(const double&) { return 1.0; }
inline double zero_like(const double&) { return 0.0; }
inline Real one_like(const Real& r) { return Real(1.0, r.prec()); }
inline Real zero_like(const Real& r) { return Real(r.prec()); }

/// Moment-constraint residuals in system order:
/// r_j = sum_i W_i * prod_k x_ik^alpha_jk  -  target_j.
///
/// Works for double and for extended-precision rules; coordinate powers are
/// cached per point up to the system's maximum exponent, which dominates the
/// cost of search iterations.
template <class R>
std::vector<R> residuals_t(const RuleT<R>& rule, const MomentSystem& sys,
                           const std::vector<R>& targets) {
    if (rule.n != sys.n) throw dimension_mismatch("residuals: rule.n != system.n");
    if (rule.region != sys.region)
        throw std::invalid_argument("residuals: rule region incompatible with system region");
    if (targets.size() != sys.size()) throw dimension_mismatch("residuals: target count");
    if (rule.point_count() < 1) throw std::invalid_argument("residuals: empty rule");

    const int N = rule.point_count();
    const int n = rule.n;
    int maxd = 0;
    for (const auto& a : sys.alphas)
        for (int v : a.e) maxd = std::max(maxd, v);

    // pows[(i*n + k)*(maxd+1) + e] = x_ik^e
    std::vector<R> pows(static_cast<size_t>(N) * n * (maxd + 1), zero_like(rule.weights[0]));
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < n; ++k) {
            R* p = &pows[(static_cast<size_t>(i) * n + k) * (maxd + 1)];
            p[0] = one_like(rule.weights[0]);
            for (int e = 1; e <= maxd; ++e) p[e] = p[e - 1] * rule.point(i)[k];
        }

    std::vector<R> out;
    out.reserve(sys.size());
    for (size_t j = 0; j < sys.size(); ++j) {
        R acc = zero_like(rule.weights[0]);
        for (int i = 0; i < N; ++i) {
            R term = rule.weights[i];
            for (auto [k, e] : sys.support[j])
                term *= pows[(static_cast<size_t>(i) * n + k) * (maxd + 1) + e];
            acc += term;
        }
        out.push_back(acc - targets[j]);
    }
    return out;
}

std::vector<double> residuals(const Rule& rule, const MomentSystem& sys);

struct VerificationReport {
    int degree_checked = 0;
    double max_abs_residual = 0.0;
    MultiIndex worst_constraint;
    bool pass = false;
    double tolerance_used = 0.0;
};

/// Builds the degree-d system and tests max |residual| <= tol_rel * V.
/// GaussianProb rules are converted to ExpR2 internally.
VerificationReport verify(const Rule& rule, int d, double tol_rel = 1e-11);

/// Largest d <= d_max at which verify passes (and fails at d+1 when d < d_max);
/// -1 if even d = 0 fails.
int detected_degree(const Rule& rule, double tol_rel = 1e-11, int d_max = 20);

/// sum_i W_i f(x_i)
double evaluate(const Rule& rule, const std::function<double(std::span<const double>)>& f);

/// sum |W_i| / sum W_i  (worst-case round-off magnification; 1 iff all weights positive)
double stability_factor(const Rule& rule);

/// "P"/"N" from weight signs; Ball rules get a second letter I/B/O comparing
/// the largest radius against 1 with |r-1| <= boundary_tol meaning B.
std::string quality_of(const Rule& rule, double boundary_tol = 1e-9);

/// Gaussian -> ExpR2: points / sqrt(2), weights * pi^(n/2).
Rule convert_gaussian(const Rule& rule);
/// ExpR2 -> Gaussian: inverse of convert_gaussian.
Rule convert_from_gaussian(const Rule& rule);

double point_radius(const Rule& rule, int i);
double max_radius(const Rule& rule);

} // namespace cubature
