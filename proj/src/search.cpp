#include "cubature/search.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "cubature/rule.hpp"

namespace cubature {

std::string outcome_name(SearchOutcome o) {
    switch (o) {
        case SearchOutcome::success: return "success";
        case SearchOutcome::stalled: return "stalled";
        case SearchOutcome::max_iterations: return "max_iterations";
        case SearchOutcome::max_restarts: return "max_restarts";
    }
    return "?";
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 1));
}

// Deterministic standard normals: mt19937_64 + explicit Box-Muller, so
// identical seeds reproduce bit-identical rules on any platform.
class NormalStream {
  public:
    explicit NormalStream(std::uint64_t seed) : rng_(seed) {}
    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        double m = std::sqrt(-2.0 * std::log(u1));
        spare_ = m * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return m * std::cos(2.0 * M_PI * u2);
    }

  private:
    double uniform01() { // in (0, 1]
        return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1p-53;
    }
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

void validate(const SearchConfig& c) {
    if (c.region == Region::GaussianProb)
        throw std::invalid_argument("search: use ExpR2 and convert (Gaussian moments are defined by conversion)");
    if (c.n < 1 || c.degree < 0 || c.N < 1)
        throw std::invalid_argument("search: need n >= 1, degree >= 0, N >= 1");
    if (c.extras < 0 || c.extras > c.n) throw std::invalid_argument("search: need 0 <= extras <= n");
    if (!(c.residual_tol_rel > 0) || c.stall_window < 1 || !(c.stall_factor > 0))
        throw std::invalid_argument("search: bad tolerance/stall parameters");
}

double second_moment_trace_target(Region region, int n) {
    MultiIndex m2(std::vector<int>(n, 0));
    m2.e[0] = 2;
    return n * monomial_moment(region, n, m2);
}

Eigen::VectorXd pack(const Rule& rule) {
    const int N = rule.point_count(), n = rule.n;
    Eigen::VectorXd x(static_cast<long>(N) * (n + 1));
    for (int i = 0; i < N * n; ++i) x[i] = rule.points[i];
    for (int i = 0; i < N; ++i) x[static_cast<long>(N) * n + i] = rule.weights[i];
    return x;
}

void unpack(const Eigen::VectorXd& x, Rule& rule) {
    const int N = rule.point_count(), n = rule.n;
    for (int i = 0; i < N * n; ++i) rule.points[i] = x[i];
    for (int i = 0; i < N; ++i) rule.weights[i] = x[static_cast<long>(N) * n + i];
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// min-norm least-squares solve via truncated-SVD pseudoinverse
Eigen::VectorXd pinv_solve(const Eigen::MatrixXd& J, const Eigen::VectorXd& rhs, double rel_cut) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    double cut = sv.size() ? sv[0] * rel_cut : 0.0;
    Eigen::VectorXd y = svd.matrixU().transpose() * rhs;
    for (long i = 0; i < sv.size(); ++i) y[i] = sv[i] > cut ? y[i] / sv[i] : 0.0;
    return svd.matrixV() * y;
}

// damped normal-equations step (Levenberg-Marquardt)
Eigen::VectorXd lm_step(const Eigen::MatrixXd& J, const Eigen::VectorXd& r, double lambda) {
    Eigen::MatrixXd A = J.transpose() * J;
    double scale = A.diagonal().cwiseAbs().maxCoeff();
    if (!(scale > 0)) scale = 1.0;
    A.diagonal().array() += lambda * scale;
    Eigen::VectorXd g = J.transpose() * r;
    return A.ldlt().solve(-g);
}

} // namespace

int first_stall_step(const std::vector<double>& norms, int window, double factor) {
    for (size_t t = static_cast<size_t>(window); t < norms.size(); ++t)
        if (norms[t] >= norms[t - window] * (1.0 - factor)) return static_cast<int>(t);
    return -1;
}

Rule initialize(const SearchConfig& config, int restart_index) {
    validate(config);
    NormalStream rng(stream_seed(config.seed, static_cast<std::uint64_t>(restart_index)));

    Rule rule;
    rule.region = config.region;
    rule.n = config.n;
    rule.claimed_degree = -1;
    rule.provenance = "search-init";
    rule.points.resize(static_cast<size_t>(config.N) * config.n);
    rule.weights.resize(config.N);

    const double V = volume(config.region, config.n);
    for (int attempt = 0; attempt < 64; ++attempt) {
        for (double& x : rule.points) x = rng.next();
        double wsum = 0.0, trace = 0.0;
        for (int i = 0; i < config.N; ++i) {
            double r2 = 0.0;
            for (int k = 0; k < config.n; ++k) r2 += rule.point(i)[k] * rule.point(i)[k];
            rule.weights[i] = std::exp(-std::sqrt(r2));
            wsum += rule.weights[i];
            trace += rule.weights[i] * r2;
        }
        if (!(trace > 0.0)) continue; // degenerate draw, all points at the origin
        const double wscale = V / wsum;
        trace *= wscale;
        for (double& w : rule.weights) w *= wscale;
        const double s = std::sqrt(second_moment_trace_target(config.region, config.n) / trace);
        for (double& x : rule.points) x *= s;
        return rule;
    }
    throw std::runtime_error("initialize: degenerate draws");
}

Eigen::MatrixXd jacobian(const Rule& rule, const MomentSystem& sys) {
    if (rule.n != sys.n) throw dimension_mismatch("jacobian: rule.n != system.n");
    const int N = rule.point_count(), n = rule.n;
    const long m = static_cast<long>(sys.size());

    int maxd = 0;
    for (const auto& a : sys.alphas)
        for (int v : a.e) maxd = std::max(maxd, v);
    std::vector<double> pows(static_cast<size_t>(N) * n * (maxd + 1));
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < n; ++k) {
            double* p = &pows[(static_cast<size_t>(i) * n + k) * (maxd + 1)];
            p[0] = 1.0;
            for (int e = 1; e <= maxd; ++e) p[e] = p[e - 1] * rule.point(i)[k];
        }
    auto pw = [&](int i, int k, int e) {
        return pows[(static_cast<size_t>(i) * n + k) * (maxd + 1) + e];
    };

    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, static_cast<long>(N) * (n + 1));
    for (long j = 0; j < m; ++j) {
        const auto& supp = sys.support[j];
        for (int i = 0; i < N; ++i) {
            double mono = 1.0;
            for (auto [k, e] : supp) mono *= pw(i, k, e);
            J(j, static_cast<long>(N) * n + i) = mono; // d/dW_i
            for (auto [k, e] : supp) {
                double d = rule.weights[i] * e * pw(i, k, e - 1);
                for (auto [k2, e2] : supp)
                    if (k2 != k) d *= pw(i, k2, e2);
                J(j, static_cast<long>(i) * n + k) = d;
            }
        }
    }
    return J;
}

SearchReport solve(const Rule& start, const MomentSystem& sys, const SearchConfig& config) {
    validate(config);
    if (start.n != sys.n || start.region != sys.region)
        throw std::invalid_argument("solve: start rule does not match system");

    const double V = volume(sys.region, sys.n);
    const double tol_abs = config.residual_tol_rel * V;

    Rule rule = start;
    std::vector<double> r = residuals(rule, sys);
    std::vector<double> history{norm2(r)};
    double lambda = 1e-3;          // LM damping, persistent across iterations
    double fallback_lambda = 1e-6; // GN fallback damping, persistent as well

    SearchReport rep;
    rep.seed = config.seed;
    rep.restarts_used = 0;

    int iter = 0;
    SearchOutcome outcome = SearchOutcome::max_iterations;
    for (; iter < config.max_iterations; ++iter) {
        if (max_abs(r) <= tol_abs) {
            outcome = SearchOutcome::success;
            break;
        }

        Eigen::MatrixXd J = jacobian(rule, sys);
        Eigen::VectorXd rv = Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<long>(r.size()));
        Eigen::VectorXd x = pack(rule);
        const double cur_norm = history.back();

        bool accepted = false;
        Rule cand = rule;
        std::vector<double> cand_r;

        auto try_step = [&](const Eigen::VectorXd& delta) {
            unpack(x + delta, cand);
            cand_r = residuals(cand, sys);
            return norm2(cand_r);
        };

        if (config.solver == Solver::gauss_newton_pinv) {
            Eigen::VectorXd full = pinv_solve(J, -rv, 1e-12);
            double nn = try_step(full);
            if (nn < cur_norm || max_abs(cand_r) <= tol_abs) {
                accepted = true;
                history.push_back(nn);
            } else {
                // step halving first, then damped fallback when the full step climbs
                for (double frac = 0.5; frac >= 1.0 / 16 && !accepted; frac /= 2) {
                    nn = try_step(frac * full);
                    if (nn < cur_norm || max_abs(cand_r) <= tol_abs) {
                        accepted = true;
                        history.push_back(nn);
                    }
                }
                for (double lam = fallback_lambda / 10; lam <= 1e8 && !accepted; lam *= 10.0) {
                    nn = try_step(lm_step(J, rv, lam));
                    if (nn < cur_norm || max_abs(cand_r) <= tol_abs) {
                        accepted = true;
                        history.push_back(nn);
                        fallback_lambda = std::max(lam, 1e-10);
                    }
                }
            }
        } else {
            while (lambda <= 1e10) {
                double nn = try_step(lm_step(J, rv, lambda));
                if (nn < cur_norm || max_abs(cand_r) <= tol_abs) {
                    accepted = true;
                    history.push_back(nn);
                    lambda = std::max(lambda / 10.0, 1e-14);
                    break;
                }
                lambda *= 10.0;
            }
        }

        if (!accepted) {
            outcome = SearchOutcome::stalled;
            break;
        }
        rule = cand;
        r = cand_r;

        if (first_stall_step(history, config.stall_window, config.stall_factor) >= 0) {
            if (max_abs(r) <= tol_abs) {
                outcome = SearchOutcome::success;
                ++iter;
            } else {
                outcome = SearchOutcome::stalled;
            }
            break;
        }
    }
    if (outcome == SearchOutcome::max_iterations && max_abs(r) <= tol_abs)
        outcome = SearchOutcome::success;

    rep.outcome = outcome;
    rep.iterations = {iter};
    rep.final_max_residual = max_abs(r);
    if (outcome == SearchOutcome::success) {
        rule.claimed_degree = sys.degree;
        rep.rule = rule;
    }
    return rep;
}

SearchReport search(const SearchConfig& config) {
    validate(config);
    MomentSystem sys = build_moment_system(config.region, config.n, config.degree, config.extras);

    SearchReport best;
    best.seed = config.seed;
    for (int restart = 0; restart < config.max_restarts; ++restart) {
        Rule start = initialize(config, restart);
        SearchReport rep = solve(start, sys, config);
        best.iterations.insert(best.iterations.end(), rep.iterations.begin(), rep.iterations.end());
        best.restarts_used = restart + 1;
        best.final_max_residual = std::min(best.final_max_residual, rep.final_max_residual);
        if (rep.outcome == SearchOutcome::success) {
            best.outcome = rep.outcome;
            best.final_max_residual = rep.final_max_residual;
            best.rule = std::move(rep.rule);
            best.rule->provenance = "search n=" + std::to_string(config.n) +
                                    " d=" + std::to_string(config.degree) +
                                    " N=" + std::to_string(config.N) +
                                    " seed=" + std::to_string(config.seed);
            return best;
        }
    }
    best.outcome = SearchOutcome::max_restarts;
    return best;
}

namespace {

SearchReport resolve_candidate(Rule cand, const MomentSystem& sys, const SearchConfig& config) {
    cand.claimed_degree = -1;
    return solve(cand, sys, config);
}

} // namespace

SearchReport prune_and_retry(const SearchReport& report, const SearchConfig& config) {
    if (report.outcome != SearchOutcome::success || !report.rule)
        throw std::invalid_argument("prune_and_retry: input report must be a success");
    validate(config);

    MomentSystem sys = build_moment_system(config.region, config.n, config.degree, config.extras);
    const double V = volume(config.region, config.n);

    SearchReport best = report;
    bool reduced = true;
    while (reduced && best.rule->point_count() > 1) {
        reduced = false;
        const Rule& rule = *best.rule;
        const int N = rule.point_count(), n = rule.n;

        // 1: drop low-weight points
        const double wtol = config.prune_weight_tol_rel * V / N;
        Rule dropped;
        dropped.region = rule.region;
        dropped.n = n;
        dropped.provenance = rule.provenance + " pruned";
        for (int i = 0; i < N; ++i) {
            if (std::abs(rule.weights[i]) < wtol) continue;
            dropped.points.insert(dropped.points.end(), rule.point(i), rule.point(i) + n);
            dropped.weights.push_back(rule.weights[i]);
        }
        if (dropped.point_count() < N && dropped.point_count() >= 1) {
            SearchReport rep = resolve_candidate(dropped, sys, config);
            if (rep.outcome == SearchOutcome::success) {
                rep.rule->provenance = dropped.provenance;
                best = rep;
                reduced = true;
                continue;
            }
        }

        // 2: merge the closest pair if under the merge distance
        double rms = 0.0;
        for (int i = 0; i < N; ++i) rms += point_radius(rule, i) * point_radius(rule, i);
        rms = std::sqrt(rms / N);
        const double mtol = config.merge_distance_rel * (rms > 0 ? rms : 1.0);
        int mi = -1, mj = -1;
        double mind = mtol;
        for (int i = 0; i < N; ++i)
            for (int j = i + 1; j < N; ++j) {
                double d2 = 0.0;
                for (int k = 0; k < n; ++k) {
                    double d = rule.point(i)[k] - rule.point(j)[k];
                    d2 += d * d;
                }
                double d = std::sqrt(d2);
                if (d < mind) {
                    mind = d;
                    mi = i;
                    mj = j;
                }
            }
        if (mi >= 0 && std::abs(rule.weights[mi] + rule.weights[mj]) > 1e-300) {
            Rule merged;
            merged.region = rule.region;
            merged.n = n;
            merged.provenance = rule.provenance + " merged";
            const double wsum = rule.weights[mi] + rule.weights[mj];
            for (int i = 0; i < N; ++i) {
                if (i == mj) continue;
                if (i == mi) {
                    for (int k = 0; k < n; ++k)
                        merged.points.push_back((rule.weights[mi] * rule.point(mi)[k] +
                                                 rule.weights[mj] * rule.point(mj)[k]) /
                                                wsum);
                    merged.weights.push_back(wsum);
                } else {
                    merged.points.insert(merged.points.end(), rule.point(i), rule.point(i) + n);
                    merged.weights.push_back(rule.weights[i]);
                }
            }
            SearchReport rep = resolve_candidate(merged, sys, config);
            if (rep.outcome == SearchOutcome::success) {
                rep.rule->provenance = merged.provenance;
                best = rep;
                reduced = true;
                continue;
            }
        }

        // 3: plain restart with one point fewer
        if (N > 1) {
            SearchConfig fewer = config;
            fewer.N = N - 1;
            fewer.seed = splitmix64(config.seed ^ static_cast<std::uint64_t>(N));
            SearchReport rep = search(fewer);
            if (rep.outcome == SearchOutcome::success) {
                best = rep;
                reduced = true;
            }
        }
    }
    return best;
}

SearchReport binary_search_N(Region region, int n, int d, int N_hi, SearchConfig config) {
    config.region = region;
    config.n = n;
    config.degree = d;
    const long long lo_bound = effective_bound(n, d);
    if (N_hi < lo_bound)
        throw std::invalid_argument("binary_search_N: N_hi below the effective lower bound");

    auto attempt = [&](int N) {
        SearchConfig c = config;
        c.N = N;
        c.seed = splitmix64(config.seed ^ (0x5eedull + static_cast<std::uint64_t>(N)));
        return search(c);
    };

    SearchReport hi_rep = attempt(N_hi);
    hi_rep.seed = config.seed;
    if (hi_rep.outcome != SearchOutcome::success) return hi_rep;

    int low = static_cast<int>(lo_bound), high = N_hi;
    SearchReport best = std::move(hi_rep);
    while (low < high) {
        int mid = low + (high - low) / 2;
        SearchReport rep = attempt(mid);
        if (rep.outcome == SearchOutcome::success) {
            best = std::move(rep);
            best.seed = config.seed;
            high = mid;
        } else {
            low = mid + 1;
        }
    }
    return best;
}

SearchReport transfer_rule(const Rule& source, Region target, SearchConfig config) {
    Rule src = source.region == Region::GaussianProb ? convert_gaussian(source) : source;
    if (target == Region::GaussianProb)
        throw std::invalid_argument("transfer_rule: transfer to ExpR2 and convert instead");
    if (src.claimed_degree < 0)
        throw std::invalid_argument("transfer_rule: source rule must carry its degree");
    if (!verify(src, src.claimed_degree, 1e-8).pass)
        throw std::invalid_argument("transfer_rule: source rule does not verify at its degree");

    config.region = target;
    config.n = src.n;
    config.degree = src.claimed_degree;
    config.N = src.point_count();

    const double Vs = volume(src.region, src.n);
    const double Vt = volume(target, src.n);

    Rule start = src;
    start.region = target;
    start.provenance = src.provenance + " -> " + region_name(target);
    double trace = 0.0;
    for (int i = 0; i < start.point_count(); ++i) {
        start.weights[i] *= Vt / Vs;
        trace += start.weights[i] * point_radius(src, i) * point_radius(src, i);
    }
    const double s = std::sqrt(second_moment_trace_target(target, src.n) / trace);
    for (double& x : start.points) x *= s;

    MomentSystem sys = build_moment_system(target, src.n, src.claimed_degree, config.extras);
    SearchReport rep = solve(start, sys, config);
    if (rep.rule) rep.rule->provenance = start.provenance;
    return rep;
}

} // namespace cubature
