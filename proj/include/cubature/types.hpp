#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cubature {

/// Integration region / weight function of a rule.
///
/// GaussianProb is the probabilists' convention (weight (2pi)^{-n/2} e^{-x'x/2},
/// total mass 1).  Its moments are always obtained through the ExpR2
/// conversion (points / sqrt(2), weights * pi^{n/2}), never from a separate
/// closed form.
enum class Region {
    GaussianProb, // entire space, (2pi)^{-n/2} exp(-x'x/2)
    ExpR2,        // entire space, exp(-x'x)
    ExpR,         // entire space, exp(-sqrt(x'x))
    Ball          // unit ball x'x <= 1, weight 1
};

std::string region_name(Region r);   // "Gaussian", "ExpR2", "ExpR", "Ball"
std::string region_tag(Region r);    // "gauss", "er2", "er1", "ball"
Region parse_region_tag(const std::string& tag);

/// Exponent vector of a monomial x1^a1 ... xn^an.
struct MultiIndex {
    std::vector<int> e;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> exps) : e(std::move(exps)) {}

    int size() const { return static_cast<int>(e.size()); }
    int total_degree() const {
        int s = 0;
        for (int v : e) s += v;
        return s;
    }
    bool all_even() const {
        for (int v : e)
            if (v % 2 != 0) return false;
        return true;
    }
    bool operator==(const MultiIndex& o) const { return e == o.e; }
    std::string to_string() const;
};

/// A cubature rule: N weighted points in n dimensions.
/// Points are stored row-major (point i occupies points[i*n .. i*n+n-1]).
/// claimed_degree is -1 when unknown.
template <class R>
struct RuleT {
    Region region = Region::ExpR2;
    int n = 0;
    std::vector<R> points;
    std::vector<R> weights;
    int claimed_degree = -1;
    std::string provenance;

    int point_count() const { return static_cast<int>(weights.size()); }
    R* point(int i) { return points.data() + static_cast<size_t>(i) * n; }
    const R* point(int i) const { return points.data() + static_cast<size_t>(i) * n; }
};

using Rule = RuleT<double>;

struct dimension_mismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace cubature
