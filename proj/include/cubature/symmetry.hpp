#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "cubature/catalog.hpp"
#include "cubature/types.hpp"

namespace cubature {

struct Shell {
    double radius = 0.0;
    std::vector<int> members;
    bool uniform_weight = false;
    double weight = 0.0; // mean member weight
};

struct ShellDecomposition {
    std::vector<Shell> shells; // disjoint, cover all points, radius ascending
    double radius_tol = 0.0;
    double weight_tol = 0.0;
};

/// Greedy grouping of radius-sorted points; tolerances are relative to the
/// largest radius / largest |weight|.
ShellDecomposition detect_shells(const Rule& rule, double radius_rel_tol = 1e-9,
                                 double weight_rel_tol = 1e-9);

/// "1+56+126"-style shell size summary.
std::string shells_signature(const ShellDecomposition& d);

/// Right-multiply all points by the orthogonal QR factor of the chosen rows'
/// transpose, so chosen row j ends with zeros beyond column j (and a
/// nonnegative diagonal).  Radii, pairwise distances and moment residuals are
/// preserved.
Rule align_axes(const Rule& rule, const std::vector<int>& chosen);

/// Shell members ordered by increasing angular distance from the given first
/// point (ties by index); the first point leads.
std::vector<int> angular_order(const Rule& rule, const std::vector<int>& shell_members,
                               int first_index);

/// Cayley transform Q = (I - S)(I + S)^{-1} of the skew-symmetric matrix
/// assembled from n(n-1)/2 parameters (upper triangle, row-major).
Eigen::MatrixXd cayley_rotation(int n, const std::vector<double>& params);

Rule apply_orthogonal(const Rule& rule, const Eigen::MatrixXd& Q);

/// Rotate a regular-simplex shell of n+1 points onto the canonical simplex
/// presentation (first member to the all-positive diagonal, the others into
/// axis planes).  The two simple variants are the two valid presentations.
Rule orient_simplex(const Rule& rule, const std::vector<int>& shell_members,
                    SimplexVariant variant = SimplexVariant::simple_a, double rel_tol = 1e-7);

/// Radially project the selected points to a common radius (default: their
/// weight-averaged radius; blend < 1 moves them only part way) and give them
/// their mean weight.  A re-search seed, not a valid rule.
Rule project_to_shell(const Rule& rule, const std::vector<int>& indices,
                      std::optional<double> target_radius = {}, double blend = 1.0);

/// Exact minimum-cost perfect assignment (shortest augmenting path with
/// potentials); returns column assigned to each row.
std::vector<int> linear_assignment(const Eigen::MatrixXd& cost);

/// Principal-axis alignment followed by reflection pairing via linear
/// assignment; each matched pair is replaced by its exact mirror pair with
/// averaged weights.  axis (in the aligned frame) defaults to the one with
/// the smallest assignment cost; chosen_axis reports it.
Rule symmetrize_bilateral(const Rule& rule, std::optional<int> axis = {},
                          int* chosen_axis = nullptr);

} // namespace cubature
