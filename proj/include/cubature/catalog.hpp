#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cubature/expr.hpp"
#include "cubature/types.hpp"

namespace cubature {

/// Orbit notation used by the rule tables: a base point plus closures.
/// sign_groups lists slots whose signs flip jointly (a group of one slot is a
/// plain +/- slot); perm_from >= 0 applies the all-permutations closure to the
/// suffix base[perm_from..]; global_negate adds the negated copy of every
/// point.  Expansion order: signs, permutations, global negation, then exact
/// deduplication.
struct GeneratorPattern {
    std::vector<double> base;
    int perm_from = -1;
    std::vector<std::vector<int>> sign_groups;
    bool global_negate = false;
    double weight = 0.0;
};

std::vector<std::pair<std::vector<double>, double>> expand_generator(const GeneratorPattern& p);

enum class SimplexVariant { classical, simple_a, simple_b };

/// Degree-2 rule with n+1 equally weighted points at the vertices of a
/// regular simplex, scaled so the degree-0 and degree-2 constraints hold.
Rule simplex_rule(Region region, int n, SimplexVariant variant);

/// Row of the full (a,b) simplex point matrix before region scaling
/// (first row all ones, then a on the diagonal and b elsewhere).
void simplex_ab(int n, SimplexVariant variant, double& a, double& b);

struct CatalogEntry {
    std::string id;     // e.g. "e5r2-22-4", "s4-15-4"
    std::string family; // e.g. "5-22-4", "4-16-4b"
    Region region;
    int n = 0;
    int degree = 0;
    int expected_points = 0;
    bool closed_form = false; // false for rules stored as printed decimals
};

const std::vector<CatalogEntry>& catalog_entries();
const CatalogEntry* catalog_find(const std::string& id);

Rule build_catalog_rule(const std::string& id);
RuleT<Real> build_catalog_rule_ext(const std::string& id, int digits);

/// Rule family by (family key, region), e.g. ("5-22-4", Region::Ball).
/// Throws if the pair was not published.
Rule build_family_rule(const std::string& family, Region region);

/// Named closed-form constants of a catalog rule with any pi power removed
/// (coordinates, radii, weight coefficients).  Empty for decimal-table rules.
std::vector<std::pair<std::string, Expr>> catalog_constants(const std::string& id);

} // namespace cubature
