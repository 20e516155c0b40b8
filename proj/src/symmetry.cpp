#include "cubature/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cubature/rule.hpp"

namespace cubature {

ShellDecomposition detect_shells(const Rule& rule, double radius_rel_tol, double weight_rel_tol) {
    const int N = rule.point_count();
    std::vector<double> radius(N);
    double rmax = 0.0, wmax = 0.0;
    for (int i = 0; i < N; ++i) {
        radius[i] = point_radius(rule, i);
        rmax = std::max(rmax, radius[i]);
        wmax = std::max(wmax, std::abs(rule.weights[i]));
    }

    ShellDecomposition dec;
    dec.radius_tol = radius_rel_tol * (rmax > 0 ? rmax : 1.0);
    dec.weight_tol = weight_rel_tol * (wmax > 0 ? wmax : 1.0);

    std::vector<int> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return radius[a] < radius[b]; });

    size_t pos = 0;
    while (pos < order.size()) {
        Shell shell;
        const double anchor = radius[order[pos]];
        double rsum = 0.0, wsum = 0.0, wlo = std::numeric_limits<double>::infinity(),
               whi = -std::numeric_limits<double>::infinity();
        while (pos < order.size() && radius[order[pos]] - anchor <= dec.radius_tol) {
            int idx = order[pos++];
            shell.members.push_back(idx);
            rsum += radius[idx];
            wsum += rule.weights[idx];
            wlo = std::min(wlo, rule.weights[idx]);
            whi = std::max(whi, rule.weights[idx]);
        }
        shell.radius = rsum / shell.members.size();
        shell.weight = wsum / shell.members.size();
        shell.uniform_weight = (whi - wlo) <= dec.weight_tol;
        dec.shells.push_back(std::move(shell));
    }
    return dec;
}

std::string shells_signature(const ShellDecomposition& d) {
    std::string s;
    for (size_t i = 0; i < d.shells.size(); ++i) {
        if (i) s += "+";
        s += std::to_string(d.shells[i].members.size());
    }
    return s;
}

Rule apply_orthogonal(const Rule& rule, const Eigen::MatrixXd& Q) {
    if (Q.rows() != rule.n || Q.cols() != rule.n)
        throw dimension_mismatch("apply_orthogonal: Q must be n x n");
    Rule out = rule;
    for (int i = 0; i < rule.point_count(); ++i) {
        Eigen::Map<const Eigen::RowVectorXd> x(rule.point(i), rule.n);
        Eigen::Map<Eigen::RowVectorXd> y(out.point(i), rule.n);
        y = x * Q;
    }
    return out;
}

Rule align_axes(const Rule& rule, const std::vector<int>& chosen) {
    const int n = rule.n;
    const int k = static_cast<int>(chosen.size());
    if (k < 1 || k > n) throw std::invalid_argument("align_axes: need 1..n chosen points");
    for (int idx : chosen)
        if (idx < 0 || idx >= rule.point_count())
            throw std::invalid_argument("align_axes: point index out of range");

    Eigen::MatrixXd At(n, k); // transpose of the chosen rows
    double amax = 0.0;
    for (int j = 0; j < k; ++j)
        for (int c = 0; c < n; ++c) {
            At(c, j) = rule.point(chosen[j])[c];
            amax = std::max(amax, std::abs(At(c, j)));
        }

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(At);
    Eigen::MatrixXd Q = qr.householderQ();
    Eigen::MatrixXd R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (int j = 0; j < k; ++j) {
        if (std::abs(R(j, j)) <= 1e-12 * std::max(amax, 1.0))
            throw std::invalid_argument("align_axes: chosen points are rank-deficient");
        if (R(j, j) < 0) Q.col(j) = -Q.col(j);
    }
    return apply_orthogonal(rule, Q);
}

std::vector<int> angular_order(const Rule& rule, const std::vector<int>& shell_members,
                               int first_index) {
    if (std::find(shell_members.begin(), shell_members.end(), first_index) == shell_members.end())
        throw std::invalid_argument("angular_order: first point must belong to the shell");
    const double r0 = point_radius(rule, first_index);
    if (!(r0 > 0)) throw std::invalid_argument("angular_order: first point at the origin");

    std::vector<std::pair<double, int>> rest;
    for (int idx : shell_members) {
        if (idx == first_index) continue;
        double dot = 0.0;
        for (int c = 0; c < rule.n; ++c) dot += rule.point(first_index)[c] * rule.point(idx)[c];
        double denom = r0 * point_radius(rule, idx);
        double cosang = denom > 0 ? std::clamp(dot / denom, -1.0, 1.0) : 1.0;
        rest.emplace_back(std::acos(cosang), idx);
    }
    std::stable_sort(rest.begin(), rest.end());
    std::vector<int> order{first_index};
    for (auto& [ang, idx] : rest) order.push_back(idx);
    return order;
}

Eigen::MatrixXd cayley_rotation(int n, const std::vector<double>& params) {
    if (static_cast<int>(params.size()) != n * (n - 1) / 2)
        throw std::invalid_argument("cayley_rotation: need n(n-1)/2 parameters");
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
    size_t t = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            S(i, j) = params[t];
            S(j, i) = -params[t];
            ++t;
        }
    Eigen::MatrixXd IpS = Eigen::MatrixXd::Identity(n, n) + S;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(IpS);
    if (!lu.isInvertible()) throw std::domain_error("cayley_rotation: I + S is singular");
    return (Eigen::MatrixXd::Identity(n, n) - S) * lu.inverse();
}

Rule orient_simplex(const Rule& rule, const std::vector<int>& shell_members,
                    SimplexVariant variant, double rel_tol) {
    const int n = rule.n;
    if (static_cast<int>(shell_members.size()) != n + 1)
        throw std::invalid_argument("orient_simplex: shell must have exactly n+1 points");
    if (variant == SimplexVariant::classical)
        throw std::invalid_argument("orient_simplex: target must be one of the simple variants");

    Eigen::MatrixXd X(n + 1, n);
    for (int i = 0; i <= n; ++i)
        for (int c = 0; c < n; ++c) X(i, c) = rule.point(shell_members[i])[c];

    const double r = X.rowwise().norm().mean();
    if (!(r > 0)) throw std::invalid_argument("orient_simplex: degenerate shell");
    const double tol = rel_tol * r;

    // regular-simplex test: common radius, near-zero centroid, equal edges
    for (int i = 0; i <= n; ++i)
        if (std::abs(X.row(i).norm() - r) > tol)
            throw std::invalid_argument("orient_simplex: shell radii are not equal");
    if (X.colwise().sum().norm() > (n + 1) * tol)
        throw std::invalid_argument("orient_simplex: shell is not centered");
    double edge = (X.row(0) - X.row(1)).norm();
    for (int i = 0; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            if (std::abs((X.row(i) - X.row(j)).norm() - edge) > 2 * tol)
                throw std::invalid_argument("orient_simplex: shell is not a regular simplex");

    double a = 0.0, b = 0.0;
    simplex_ab(n, variant, a, b);
    Eigen::MatrixXd T(n + 1, n);
    T.row(0).setOnes();
    for (int i = 1; i <= n; ++i)
        for (int c = 0; c < n; ++c) T(i, c) = (c == i - 1) ? a : b;
    T *= r / std::sqrt(static_cast<double>(n));

    Eigen::MatrixXd Q = X.colPivHouseholderQr().solve(T);
    if ((Q.transpose() * Q - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-6 ||
        (X * Q - T).cwiseAbs().maxCoeff() > 1e-6 * r)
        throw std::invalid_argument("orient_simplex: shell does not match the simplex template");
    return apply_orthogonal(rule, Q);
}

Rule project_to_shell(const Rule& rule, const std::vector<int>& indices,
                      std::optional<double> target_radius, double blend) {
    if (indices.empty()) throw std::invalid_argument("project_to_shell: empty selection");
    double wsum = 0.0, wrsum = 0.0, rsum = 0.0, wmean = 0.0;
    for (int idx : indices) {
        if (idx < 0 || idx >= rule.point_count())
            throw std::invalid_argument("project_to_shell: point index out of range");
        double r = point_radius(rule, idx);
        if (!(r > 0)) throw std::invalid_argument("project_to_shell: selected point at the origin");
        wsum += rule.weights[idx];
        wrsum += rule.weights[idx] * r;
        rsum += r;
        wmean += rule.weights[idx];
    }
    wmean /= indices.size();
    const double target = target_radius
                              ? *target_radius
                              : (std::abs(wsum) > 1e-300 ? wrsum / wsum : rsum / indices.size());

    Rule out = rule;
    for (int idx : indices) {
        const double r = point_radius(rule, idx);
        const double nr = (1.0 - blend) * r + blend * target;
        for (int c = 0; c < rule.n; ++c) out.point(idx)[c] = rule.point(idx)[c] * (nr / r);
        out.weights[idx] = wmean;
    }
    return out;
}

std::vector<int> linear_assignment(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    if (cost.cols() != n) throw std::invalid_argument("linear_assignment: cost must be square");
    if (!cost.allFinite()) throw std::invalid_argument("linear_assignment: costs must be finite");
    const double INF = std::numeric_limits<double>::infinity();

    // shortest augmenting path with potentials, 1-based
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, INF);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = 0;
            double delta = INF;
            for (int j = 1; j <= n; ++j)
                if (!used[j]) {
                    double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if (cur < minv[j]) {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if (minv[j] < delta) {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

namespace {

Eigen::MatrixXd principal_axis_frame(const Rule& rule) {
    const int n = rule.n;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < rule.point_count(); ++i) {
        Eigen::Map<const Eigen::VectorXd> x(rule.point(i), n);
        M += x * x.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    Eigen::MatrixXd Q(n, n);
    for (int c = 0; c < n; ++c) {
        Eigen::VectorXd col = es.eigenvectors().col(n - 1 - c); // descending variance
        int imax = 0;
        for (int r = 1; r < n; ++r)
            if (std::abs(col[r]) > std::abs(col[imax])) imax = r;
        if (col[imax] < 0) col = -col;
        Q.col(c) = col;
    }
    return Q;
}

double reflection_cost(const Rule& rule, int axis, std::vector<int>& sigma) {
    const int N = rule.point_count(), n = rule.n;
    Eigen::MatrixXd C(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double d2 = 0.0;
            for (int c = 0; c < n; ++c) {
                double xj = rule.point(j)[c];
                if (c == axis) xj = -xj;
                double d = rule.point(i)[c] - xj;
                d2 += d * d;
            }
            C(i, j) = d2;
        }
    sigma = linear_assignment(C);
    double total = 0.0;
    for (int i = 0; i < N; ++i) total += C(i, sigma[i]);
    return total;
}

} // namespace

Rule symmetrize_bilateral(const Rule& rule, std::optional<int> axis, int* chosen_axis) {
    const int n = rule.n, N = rule.point_count();
    Rule aligned = apply_orthogonal(rule, principal_axis_frame(rule));

    int best_axis = -1;
    std::vector<int> best_sigma;
    if (axis) {
        if (*axis < 0 || *axis >= n) throw std::invalid_argument("symmetrize_bilateral: bad axis");
        best_axis = *axis;
        reflection_cost(aligned, best_axis, best_sigma);
    } else {
        double best_cost = std::numeric_limits<double>::infinity();
        for (int a = 0; a < n; ++a) {
            std::vector<int> sigma;
            double c = reflection_cost(aligned, a, sigma);
            if (c < best_cost) {
                best_cost = c;
                best_axis = a;
                best_sigma = std::move(sigma);
            }
        }
    }
    if (chosen_axis) *chosen_axis = best_axis;

    // force the assignment into an involution (generically it already is one)
    std::vector<int> partner(N, -1);
    for (int i = 0; i < N; ++i) {
        if (partner[i] >= 0) continue;
        int j = best_sigma[i];
        if (partner[j] < 0 && (best_sigma[j] == i || j == i)) {
            partner[i] = j;
            partner[j] = i;
        }
    }
    for (int i = 0; i < N; ++i)
        if (partner[i] < 0) {
            int j = best_sigma[i];
            if (j >= 0 && partner[j] < 0)
                partner[i] = j, partner[j] = i;
            else
                partner[i] = i;
        }

    Rule out = aligned;
    std::vector<char> done(N, 0);
    for (int i = 0; i < N; ++i) {
        if (done[i]) continue;
        const int j = partner[i];
        for (int c = 0; c < n; ++c) {
            double xj = aligned.point(j)[c];
            double xi = aligned.point(i)[c];
            if (c == best_axis) {
                out.point(i)[c] = (xi - xj) / 2;
                if (j != i) out.point(j)[c] = (xj - xi) / 2;
            } else {
                out.point(i)[c] = (xi + xj) / 2;
                if (j != i) out.point(j)[c] = (xj + xi) / 2;
            }
        }
        const double w = (aligned.weights[i] + aligned.weights[j]) / 2;
        out.weights[i] = w;
        out.weights[j] = w;
        done[i] = done[j] = 1;
    }
    out.provenance = rule.provenance + " symmetrized";
    return out;
}

} // namespace cubature
