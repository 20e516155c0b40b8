#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cubature/real.hpp"
#include "cubature/types.hpp"

namespace cubature {

struct rule_parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Rule interchange format: '#' comment lines, then one header line
/// "<region-tag> <n> <N> <degree>" (degree -1 when unknown), then N lines of
/// n coordinates followed by the weight.  Doubles are written with 17
/// significant digits so files round-trip exactly; extended rules carry their
/// stated digit count.
void write_rule_file(std::ostream& os, const Rule& rule, int sig_digits = 17,
                     const std::vector<std::string>& comments = {});
void write_rule_file(std::ostream& os, const RuleT<Real>& rule, int sig_digits = 32,
                     const std::vector<std::string>& comments = {});

Rule read_rule_file(std::istream& is);
RuleT<Real> read_rule_file_ext(std::istream& is, int digits);

Rule read_rule_path(const std::string& path);
void write_rule_path(const std::string& path, const Rule& rule, int sig_digits = 17,
                     const std::vector<std::string>& comments = {});

} // namespace cubature
