#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "cubature/moments.hpp"
#include "cubature/types.hpp"

namespace cubature {

enum class Solver { gauss_newton_pinv, levenberg_marquardt };

/// Knobs for one search campaign.  residual_tol_rel scales the success
/// threshold by the region volume; the stall rule fails a solve whose
/// residual 2-norm improves by at most stall_factor over any stall_window
/// consecutive accepted steps.
struct SearchConfig {
    Region region = Region::ExpR2;
    int n = 2;
    int degree = 2;
    int N = 1;
    int extras = 0;
    std::uint64_t seed = 0;
    int max_restarts = 20;
    Solver solver = Solver::gauss_newton_pinv;
    double residual_tol_rel = 1e-11;
    int stall_window = 7;
    double stall_factor = 0.07;
    int max_iterations = 250;
    double prune_weight_tol_rel = 1e-8; // * V / N
    double merge_distance_rel = 1e-6;   // * rms point radius
};

enum class SearchOutcome { success, stalled, max_iterations, max_restarts };

std::string outcome_name(SearchOutcome o);

struct SearchReport {
    SearchOutcome outcome = SearchOutcome::max_restarts;
    int restarts_used = 0;
    std::vector<int> iterations; // per restart
    double final_max_residual = std::numeric_limits<double>::infinity();
    std::optional<Rule> rule;
    std::uint64_t seed = 0;
};

/// Seeded random start: i.i.d. normal points, weights e^{-|x|} rescaled so
/// they sum to V, then one global point scale fixing the second-moment trace.
/// Fully deterministic given (config.seed, restart_index), independent of
/// platform (no std::normal_distribution).
Rule initialize(const SearchConfig& config, int restart_index = 0);

/// Analytic Jacobian of the residual vector with respect to the unknown
/// vector (all coordinates point-major, then all weights): m x (n+1)N.
Eigen::MatrixXd jacobian(const Rule& rule, const MomentSystem& sys);

/// Zero-finding from a given start.  Gauss-Newton with a truncated-SVD
/// pseudoinverse step and Levenberg-Marquardt damping fallback, or plain LM.
SearchReport solve(const Rule& start, const MomentSystem& sys, const SearchConfig& config);

/// Restart loop: initialize + solve until success or max_restarts.
SearchReport search(const SearchConfig& config);

/// Economization after a success: drop low-weight points, merge near-coincident
/// pairs, retry with fewer points; returns the best (smallest-N) success found,
/// or the input if nothing smaller verifies.
SearchReport prune_and_retry(const SearchReport& report, const SearchConfig& config);

/// Bisect the point count between effective_bound(n, d) and N_hi.
SearchReport binary_search_N(Region region, int n, int d, int N_hi, SearchConfig config);

/// Re-target a verified rule at another region: renormalize weights to the
/// target volume, rescale points to the target second-moment trace, re-solve.
SearchReport transfer_rule(const Rule& source, Region target, SearchConfig config);

/// Index of the first step t with norms[t] >= norms[t - window] * (1 - factor)
/// (improvement of factor or less counts as a stall), or -1 if none.
int first_stall_step(const std::vector<double>& norms, int window, double factor);

} // namespace cubature
