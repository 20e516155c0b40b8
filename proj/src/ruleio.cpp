#include "cubature/ruleio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cubature {

namespace {

std::string fmt_double(double v, int sig_digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", sig_digits, v);
    return buf;
}

struct HeaderFields {
    Region region;
    int n, N, degree;
};

HeaderFields parse_header(const std::string& line) {
    std::istringstream ss(line);
    std::string tag;
    long n = 0, N = 0, degree = 0;
    if (!(ss >> tag >> n >> N >> degree))
        throw rule_parse_error("rule file: bad header line '" + line + "'");
    std::string extra;
    if (ss >> extra) throw rule_parse_error("rule file: trailing tokens in header");
    Region region;
    try {
        region = parse_region_tag(tag);
    } catch (const std::invalid_argument& e) {
        throw rule_parse_error(e.what());
    }
    if (n < 1 || n > 64 || N < 1 || degree < -1)
        throw rule_parse_error("rule file: header out of range");
    return {region, static_cast<int>(n), static_cast<int>(N), static_cast<int>(degree)};
}

std::string next_data_line(std::istream& is, std::string& provenance) {
    std::string line;
    while (std::getline(is, line)) {
        size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue;
        if (line[pos] == '#') {
            if (provenance.empty() && line.size() > pos + 1) {
                std::string c = line.substr(pos + 1);
                size_t s = c.find_first_not_of(" \t");
                if (s != std::string::npos) provenance = c.substr(s);
            }
            continue;
        }
        return line.substr(pos);
    }
    return {};
}

template <class R, class Parse>
RuleT<R> read_generic(std::istream& is, Parse parse_value) {
    std::string provenance;
    std::string header = next_data_line(is, provenance);
    if (header.empty()) throw rule_parse_error("rule file: missing header");
    HeaderFields h = parse_header(header);

    RuleT<R> rule;
    rule.region = h.region;
    rule.n = h.n;
    rule.claimed_degree = h.degree;
    rule.provenance = provenance;
    rule.points.reserve(static_cast<size_t>(h.N) * h.n);
    rule.weights.reserve(h.N);

    for (int i = 0; i < h.N; ++i) {
        std::string line = next_data_line(is, provenance);
        if (line.empty())
            throw rule_parse_error("rule file: expected " + std::to_string(h.N) +
                                   " point lines, found " + std::to_string(i));
        std::istringstream ss(line);
        std::string tok;
        std::vector<std::string> toks;
        while (ss >> tok) toks.push_back(tok);
        if (static_cast<int>(toks.size()) != h.n + 1)
            throw rule_parse_error("rule file: line " + std::to_string(i + 1) + " has " +
                                   std::to_string(toks.size()) + " fields, expected " +
                                   std::to_string(h.n + 1));
        for (int k = 0; k < h.n; ++k) rule.points.push_back(parse_value(toks[k]));
        rule.weights.push_back(parse_value(toks[h.n]));
    }
    std::string tail = next_data_line(is, provenance);
    if (!tail.empty()) throw rule_parse_error("rule file: trailing data after point list");
    return rule;
}

} // namespace

void write_rule_file(std::ostream& os, const Rule& rule, int sig_digits,
                     const std::vector<std::string>& comments) {
    for (const auto& c : comments) os << "# " << c << "\n";
    if (comments.empty() && !rule.provenance.empty()) os << "# " << rule.provenance << "\n";
    os << region_tag(rule.region) << " " << rule.n << " " << rule.point_count() << " "
       << rule.claimed_degree << "\n";
    for (int i = 0; i < rule.point_count(); ++i) {
        for (int k = 0; k < rule.n; ++k) os << fmt_double(rule.point(i)[k], sig_digits) << " ";
        os << fmt_double(rule.weights[i], sig_digits) << "\n";
    }
}

void write_rule_file(std::ostream& os, const RuleT<Real>& rule, int sig_digits,
                     const std::vector<std::string>& comments) {
    for (const auto& c : comments) os << "# " << c << "\n";
    if (comments.empty() && !rule.provenance.empty()) os << "# " << rule.provenance << "\n";
    os << region_tag(rule.region) << " " << rule.n << " " << rule.point_count() << " "
       << rule.claimed_degree << "\n";
    for (int i = 0; i < rule.point_count(); ++i) {
        for (int k = 0; k < rule.n; ++k) os << rule.point(i)[k].to_string(sig_digits) << " ";
        os << rule.weights[i].to_string(sig_digits) << "\n";
    }
}

Rule read_rule_file(std::istream& is) {
    Rule rule = read_generic<double>(is, [](const std::string& tok) {
        size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            throw rule_parse_error("rule file: cannot parse number '" + tok + "'");
        }
        if (used != tok.size() || !std::isfinite(v))
            throw rule_parse_error("rule file: cannot parse number '" + tok + "'");
        return v;
    });
    return rule;
}

RuleT<Real> read_rule_file_ext(std::istream& is, int digits) {
    const mpfr_prec_t prec = Real::bits_for_digits(digits);
    return read_generic<Real>(is, [&](const std::string& tok) {
        Real v = Real::from_string(tok, prec);
        if (!v.is_finite()) throw rule_parse_error("rule file: non-finite value '" + tok + "'");
        return v;
    });
}

Rule read_rule_path(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw rule_parse_error("cannot open rule file '" + path + "'");
    return read_rule_file(f);
}

void write_rule_path(const std::string& path, const Rule& rule, int sig_digits,
                     const std::vector<std::string>& comments) {
    std::ofstream f(path);
    if (!f) throw rule_parse_error("cannot write rule file '" + path + "'");
    write_rule_file(f, rule, sig_digits, comments);
}

} // namespace cubature
