#include "cubature/rule.hpp"

#include <cmath>
#include <stdexcept>

namespace cubature {

std::vector<double> residuals(const Rule& rule, const MomentSystem& sys) {
    return residuals_t(rule, sys, sys.target_values);
}

VerificationReport verify(const Rule& rule, int d, double tol_rel) {
    if (d < 0) throw std::invalid_argument("verify: d must be >= 0");
    if (rule.region == Region::GaussianProb) return verify(convert_gaussian(rule), d, tol_rel);

    MomentSystem sys = build_moment_system(rule.region, rule.n, d);
    std::vector<double> r = residuals(rule, sys);

    VerificationReport rep;
    rep.degree_checked = d;
    rep.tolerance_used = tol_rel * volume(rule.region, rule.n);
    size_t worst = 0;
    for (size_t j = 0; j < r.size(); ++j)
        if (std::abs(r[j]) > std::abs(r[worst])) worst = j;
    rep.max_abs_residual = std::abs(r[worst]);
    rep.worst_constraint = sys.alphas[worst];
    rep.pass = rep.max_abs_residual <= rep.tolerance_used;
    return rep;
}

int detected_degree(const Rule& rule, double tol_rel, int d_max) {
    if (d_max < 0) throw std::invalid_argument("detected_degree: d_max must be >= 0");
    // Passing at d implies passing at every d' < d (the systems nest), so a
    // forward scan stopping at the first failure finds the degree.
    int deg = -1;
    for (int d = 0; d <= d_max; ++d) {
        if (!verify(rule, d, tol_rel).pass) break;
        deg = d;
    }
    return deg;
}

double evaluate(const Rule& rule, const std::function<double(std::span<const double>)>& f) {
    double acc = 0.0;
    for (int i = 0; i < rule.point_count(); ++i)
        acc += rule.weights[i] * f(std::span<const double>(rule.point(i), rule.n));
    return acc;
}

double stability_factor(const Rule& rule) {
    double sum = 0.0, abs_sum = 0.0;
    for (double w : rule.weights) {
        sum += w;
        abs_sum += std::abs(w);
    }
    if (sum == 0.0) throw std::domain_error("stability_factor: weight sum is zero");
    return abs_sum / sum;
}

std::string quality_of(const Rule& rule, double boundary_tol) {
    bool all_positive = true;
    for (double w : rule.weights)
        if (!(w > 0.0)) all_positive = false;
    std::string q = all_positive ? "P" : "N";
    if (rule.region == Region::Ball) {
        double r = max_radius(rule);
        if (r > 1.0 + boundary_tol)
            q += "O";
        else if (r >= 1.0 - boundary_tol)
            q += "B";
        else
            q += "I";
    }
    return q;
}

Rule convert_gaussian(const Rule& rule) {
    if (rule.region != Region::GaussianProb)
        throw std::invalid_argument("convert_gaussian: source region must be GaussianProb");
    Rule out = rule;
    out.region = Region::ExpR2;
    const double s = 1.0 / std::sqrt(2.0);
    const double wf = std::pow(M_PI, rule.n / 2.0);
    for (double& x : out.points) x *= s;
    for (double& w : out.weights) w *= wf;
    return out;
}

Rule convert_from_gaussian(const Rule& rule) {
    if (rule.region != Region::ExpR2)
        throw std::invalid_argument("convert_from_gaussian: source region must be ExpR2");
    Rule out = rule;
    out.region = Region::GaussianProb;
    const double s = std::sqrt(2.0);
    const double wf = std::pow(M_PI, -rule.n / 2.0);
    for (double& x : out.points) x *= s;
    for (double& w : out.weights) w *= wf;
    return out;
}

double point_radius(const Rule& rule, int i) {
    double s = 0.0;
    const double* p = rule.point(i);
    for (int k = 0; k < rule.n; ++k) s += p[k] * p[k];
    return std::sqrt(s);
}

double max_radius(const Rule& rule) {
    double r = 0.0;
    for (int i = 0; i < rule.point_count(); ++i) r = std::max(r, point_radius(rule, i));
    return r;
}

} // namespace cubature
