// Command-line front end: list / verify / eval / search / canon / refine /
// convert / bounds over the rule catalog and rule files.
// Exit codes: 0 success or pass, 1 verification/search failure, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "cubature/catalog.hpp"
#include "cubature/moments.hpp"
#include "cubature/refine.hpp"
#include "cubature/rule.hpp"
#include "cubature/ruleio.hpp"
#include "cubature/search.hpp"
#include "cubature/symmetry.hpp"

using nlohmann::json;
using namespace cubature;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

Rule load_rule(const std::string& ident) {
    if (catalog_find(ident)) return build_catalog_rule(ident);
    return read_rule_path(ident);
}

void emit_rule(const Rule& rule, const std::string& out_path, int digits,
               const std::vector<std::string>& comments) {
    if (out_path.empty() || out_path == "-")
        write_rule_file(std::cout, rule, digits, comments);
    else
        write_rule_path(out_path, rule, digits, comments);
}

std::function<double(std::span<const double>)> make_integrand(const std::string& name,
                                                              const std::string& exponents) {
    if (name == "one") return [](std::span<const double>) { return 1.0; };
    if (name == "cos-sum")
        return [](std::span<const double> x) {
            double s = 0.0;
            for (double v : x) s += v;
            return std::cos(s);
        };
    if (name == "monomial") {
        std::vector<int> e;
        std::stringstream ss(exponents);
        std::string tok;
        while (std::getline(ss, tok, ',')) e.push_back(std::stoi(tok));
        if (e.empty()) throw CLI::ValidationError("--exponents", "monomial needs --exponents a,b,...");
        return [e](std::span<const double> x) {
            if (x.size() != e.size())
                throw std::invalid_argument("monomial exponent count != rule dimension");
            double v = 1.0;
            for (size_t k = 0; k < e.size(); ++k)
                for (int t = 0; t < e[k]; ++t) v *= x[k];
            return v;
        };
    }
    throw CLI::ValidationError("--f", "unknown integrand '" + name + "' (one, cos-sum, monomial)");
}

std::vector<int> parse_indices(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    return out;
}

int cmd_list(const std::string& region_filter, bool as_json) {
    json arr = json::array();
    for (const auto& e : catalog_entries()) {
        if (!region_filter.empty() && region_tag(e.region) != region_filter) continue;
        Rule r = build_catalog_rule(e.id);
        auto dec = detect_shells(r, 1e-7, 1e-7);
        std::string quality = quality_of(r);
        if (as_json) {
            arr.push_back({{"id", e.id},
                           {"region", region_name(e.region)},
                           {"n", e.n},
                           {"N", e.expected_points},
                           {"degree", e.degree},
                           {"quality", quality},
                           {"shells", shells_signature(dec)},
                           {"closed_form", e.closed_form}});
        } else {
            std::cout << e.id << " " << region_name(e.region) << " n=" << e.n
                      << " N=" << e.expected_points << " d=" << e.degree << " " << quality << " "
                      << shells_signature(dec) << "\n";
        }
    }
    if (as_json) std::cout << arr.dump(2) << "\n";
    return kExitPass;
}

int cmd_bounds(int n, int d) {
    std::cout << "stroud=" << stroud_bound(n, d) << "\n";
    if (d >= 1 && d % 2 == 1) std::cout << "moller=" << moller_bound(n, d) << "\n";
    std::cout << "effective=" << effective_bound(n, d) << "\n";
    return kExitPass;
}

int cmd_verify(const std::string& ident, std::optional<int> degree, double tol, double boundary_tol,
               int d_max, bool as_json) {
    Rule rule = load_rule(ident);
    int d = degree.value_or(rule.claimed_degree);
    if (d < 0) throw CLI::ValidationError("--degree", "rule has no claimed degree; pass --degree");

    VerificationReport rep = verify(rule, d, tol);
    int detected = detected_degree(rule, tol, d_max);
    double stability = stability_factor(rule);
    std::string quality = quality_of(rule, boundary_tol);

    if (as_json) {
        json j{{"input", ident},
               {"region", region_name(rule.region)},
               {"n", rule.n},
               {"N", rule.point_count()},
               {"degree_checked", rep.degree_checked},
               {"max_abs_residual", rep.max_abs_residual},
               {"worst_constraint", rep.worst_constraint.to_string()},
               {"tolerance", rep.tolerance_used},
               {"pass", rep.pass},
               {"detected_degree", detected},
               {"stability", stability},
               {"quality", quality}};
        std::cout << j.dump(2) << "\n";
    } else {
        char buf[160];
        std::snprintf(buf, sizeof buf, "degree %d, quality %s, stability %.3f", detected,
                      quality.c_str(), stability);
        std::cout << ident << ": " << buf << "\n";
        std::snprintf(buf, sizeof buf, "max residual %.3e (tolerance %.3e) at degree %d: %s",
                      rep.max_abs_residual, rep.tolerance_used, rep.degree_checked,
                      rep.pass ? "pass" : "FAIL");
        std::cout << buf << "\n";
    }
    return rep.pass ? kExitPass : kExitFail;
}

int cmd_eval(const std::string& ident, const std::string& fname, const std::string& exponents) {
    Rule rule = load_rule(ident);
    auto f = make_integrand(fname, exponents);
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12f", evaluate(rule, f));
    std::cout << buf << "\n";
    return kExitPass;
}

int cmd_search(SearchConfig config, bool auto_N, int N_hi, bool prune, const std::string& out,
               int out_digits, bool as_json) {
    SearchReport rep;
    if (auto_N)
        rep = binary_search_N(config.region, config.n, config.degree, N_hi, config);
    else
        rep = search(config);
    if (prune && rep.outcome == SearchOutcome::success) rep = prune_and_retry(rep, config);

    if (as_json) {
        json j{{"outcome", outcome_name(rep.outcome)},
               {"restarts_used", rep.restarts_used},
               {"iterations", rep.iterations},
               {"final_max_residual", rep.final_max_residual},
               {"seed", rep.seed}};
        if (rep.rule) j["N"] = rep.rule->point_count();
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "outcome: " << outcome_name(rep.outcome) << " (restarts " << rep.restarts_used
                  << ", max residual " << rep.final_max_residual << ")\n";
    }
    if (rep.outcome != SearchOutcome::success) return kExitFail;
    emit_rule(*rep.rule, out, out_digits, {rep.rule->provenance});
    return kExitPass;
}

int cmd_canon(const std::string& ident, const std::string& align_csv, bool simplex,
              const std::string& simplex_variant, bool symmetrize, std::optional<int> axis,
              const std::string& project_csv, std::optional<double> project_radius, double blend,
              const std::string& out, int out_digits) {
    Rule rule = load_rule(ident);
    Rule result = rule;
    if (!align_csv.empty()) {
        result = align_axes(rule, parse_indices(align_csv));
    } else if (simplex) {
        auto dec = detect_shells(rule, 1e-7, 1e-7);
        const Shell* target = nullptr;
        for (const auto& s : dec.shells)
            if (static_cast<int>(s.members.size()) == rule.n + 1 && s.radius > 0) {
                target = &s;
                break;
            }
        if (!target) throw std::invalid_argument("canon: no shell with n+1 points found");
        SimplexVariant v =
            simplex_variant == "b" ? SimplexVariant::simple_b : SimplexVariant::simple_a;
        result = orient_simplex(rule, target->members, v);
    } else if (symmetrize) {
        int chosen = -1;
        result = symmetrize_bilateral(rule, axis, &chosen);
        std::cerr << "symmetrized about axis " << chosen << "\n";
    } else if (!project_csv.empty()) {
        result = project_to_shell(rule, parse_indices(project_csv), project_radius, blend);
    } else {
        throw CLI::ValidationError("canon", "pick one of --align/--simplex/--symmetrize/--project");
    }
    emit_rule(result, out, out_digits, {result.provenance});
    return kExitPass;
}

int cmd_refine(const std::string& ident, std::optional<int> degree, int digits,
               const std::string& out, int out_digits) {
    Rule rule = load_rule(ident);
    int d = degree.value_or(rule.claimed_degree);
    if (d < 0) throw CLI::ValidationError("--degree", "rule has no claimed degree; pass --degree");
    ExtendedRule ext = refine_rule(rule, d, digits);
    std::cout << "max residual " << ext.max_residual.to_string(3) << " at " << ext.working_digits
              << " digits\n";
    std::vector<std::string> comments{rule.provenance.empty() ? ident : rule.provenance};
    if (out.empty() || out == "-")
        write_rule_file(std::cout, ext.rule, out_digits, comments);
    else {
        std::ofstream f(out);
        if (!f) throw rule_parse_error("cannot write '" + out + "'");
        write_rule_file(f, ext.rule, out_digits, comments);
    }
    return kExitPass;
}

int cmd_convert(const std::string& ident, const std::string& to, const std::string& out,
                int out_digits) {
    Rule rule = load_rule(ident);
    Rule result = to == "gauss" ? convert_from_gaussian(rule) : convert_gaussian(rule);
    emit_rule(result, out, out_digits, {result.provenance});
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cubature rules for Gaussian-weighted, exponential-weighted and unit-ball integrals"};
    app.require_subcommand(1);

    // list
    auto* list = app.add_subcommand("list", "list the built-in rule catalog");
    std::string list_region;
    bool list_json = false;
    list->add_option("--region", list_region, "filter by region tag (er2, er1, ball)");
    list->add_flag("--json", list_json, "JSON output");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "print point-count lower bounds");
    int b_n = 1, b_d = 0;
    bounds->add_option("--n", b_n, "dimension")->required();
    bounds->add_option("--degree", b_d, "degree")->required();

    // verify
    auto* ver = app.add_subcommand("verify", "check a rule against its moment constraints");
    std::string v_spec;
    int v_degree = -2, v_dmax = 20;
    double v_tol = 1e-11, v_boundary = 1e-9;
    bool v_json = false;
    ver->add_option("rule", v_spec, "catalog id or rule file")->required();
    ver->add_option("--degree", v_degree, "degree to verify (default: claimed)");
    ver->add_option("--tol", v_tol, "relative tolerance (default 1e-11)");
    ver->add_option("--boundary-tol", v_boundary, "ball boundary classification tolerance");
    ver->add_option("--max-degree", v_dmax, "cap for degree detection");
    ver->add_flag("--json", v_json, "JSON report");

    // eval
    auto* ev = app.add_subcommand("eval", "evaluate an integrand with a rule");
    std::string e_spec, e_f = "one", e_expo;
    ev->add_option("rule", e_spec, "catalog id or rule file")->required();
    ev->add_option("--f", e_f, "integrand: one | cos-sum | monomial");
    ev->add_option("--exponents", e_expo, "monomial exponents a,b,...");

    // search
    auto* se = app.add_subcommand("search", "direct search for a new rule");
    std::string s_region = "er2", s_out, s_solver = "gn";
    SearchConfig cfg;
    bool s_autoN = false, s_prune = false, s_json = false, s_paper_digits = false;
    int s_max = 0;
    se->add_option("--region", s_region, "er2 | er1 | ball | gauss")->required();
    se->add_option("--n", cfg.n, "dimension")->required();
    se->add_option("--degree", cfg.degree, "target degree")->required();
    se->add_option("--N", cfg.N, "point count");
    se->add_flag("--auto-N", s_autoN, "bisect the point count");
    se->add_option("--max", s_max, "upper point count for --auto-N");
    se->add_option("--seed", cfg.seed, "RNG seed");
    se->add_option("--restarts", cfg.max_restarts, "restarts per point count");
    se->add_option("--extras", cfg.extras, "extra degree-(d+1) axis constraints");
    se->add_option("--solver", s_solver, "gn | lm");
    se->add_option("--tol", cfg.residual_tol_rel, "success tolerance (relative to V)");
    se->add_option("--max-iterations", cfg.max_iterations, "iteration cap per solve");
    se->add_option("--stall-window", cfg.stall_window,
                   "steps in the stall test (a solve fails once the residual norm improves by "
                   "at most stall-factor over this many consecutive steps)");
    se->add_option("--stall-factor", cfg.stall_factor, "stall improvement threshold (default 0.07)");
    se->add_flag("--prune", s_prune, "prune/merge/retry after success");
    se->add_option("--out", s_out, "output rule file (default stdout)");
    se->add_flag("--paper-digits", s_paper_digits, "write 15 significant digits instead of 17");
    se->add_flag("--json", s_json, "JSON report");

    // canon
    auto* ca = app.add_subcommand("canon", "canonicalize a rule's orientation");
    std::string c_spec, c_align, c_project, c_out, c_variant = "a";
    bool c_simplex = false, c_symmetrize = false, c_paper_digits = false;
    int c_axis = -1;
    double c_radius = -1, c_blend = 1.0;
    ca->add_option("rule", c_spec, "catalog id or rule file")->required();
    ca->add_option("--align", c_align, "comma-separated point indices to align");
    ca->add_flag("--simplex", c_simplex, "orient the first (n+1)-point shell as a simplex");
    ca->add_option("--simplex-variant", c_variant, "a | b");
    ca->add_flag("--symmetrize", c_symmetrize, "impose bilateral symmetry");
    ca->add_option("--axis", c_axis, "reflection axis for --symmetrize");
    ca->add_option("--project", c_project, "comma-separated indices to project to one shell");
    ca->add_option("--radius", c_radius, "target radius for --project");
    ca->add_option("--blend", c_blend, "projection blend factor (default 1)");
    ca->add_option("--out", c_out, "output rule file (default stdout)");
    ca->add_flag("--paper-digits", c_paper_digits, "write 15 significant digits instead of 17");

    // refine
    auto* re = app.add_subcommand("refine", "extended-precision Newton polish");
    std::string r_spec, r_out;
    int r_degree = -2, r_digits = 64, r_outdigits = 32;
    re->add_option("rule", r_spec, "catalog id or rule file")->required();
    re->add_option("--degree", r_degree, "degree (default: claimed)");
    re->add_option("--digits", r_digits, "working decimal digits (raised to 32*d+10)");
    re->add_option("--print-digits", r_outdigits, "listing digits (default 32)");
    re->add_option("--out", r_out, "output rule file (default stdout)");

    // convert
    auto* co = app.add_subcommand("convert", "switch between Gaussian and ExpR2 conventions");
    std::string co_spec, co_to, co_out;
    bool co_paper_digits = false;
    co->add_option("rule", co_spec, "catalog id or rule file")->required();
    co->add_option("--to", co_to, "gauss | er2")->required()->check(CLI::IsMember({"gauss", "er2"}));
    co->add_option("--out", co_out, "output rule file (default stdout)");
    co->add_flag("--paper-digits", co_paper_digits, "write 15 significant digits instead of 17");

    try {
        app.parse(argc, argv);

        if (*list) return cmd_list(list_region, list_json);
        if (*bounds) return cmd_bounds(b_n, b_d);
        if (*ver)
            return cmd_verify(v_spec, v_degree == -2 ? std::nullopt : std::optional<int>(v_degree),
                              v_tol, v_boundary, v_dmax, v_json);
        if (*ev) return cmd_eval(e_spec, e_f, e_expo);
        if (*se) {
            if (s_region == "gauss") {
                // Gaussian rules are searched in the ExpR2 convention and converted
                cfg.region = Region::ExpR2;
            } else {
                cfg.region = parse_region_tag(s_region);
            }
            cfg.solver = s_solver == "lm" ? Solver::levenberg_marquardt : Solver::gauss_newton_pinv;
            if (s_autoN && s_max <= 0)
                throw CLI::ValidationError("--max", "--auto-N needs --max");
            if (!s_autoN && se->count("--N") == 0)
                throw CLI::ValidationError("--N", "pass --N or --auto-N with --max");
            int digits = s_paper_digits ? 15 : 17;
            if (s_region == "gauss") {
                // run in ExpR2, convert on success
                SearchReport rep = s_autoN
                                       ? binary_search_N(cfg.region, cfg.n, cfg.degree, s_max, cfg)
                                       : search(cfg);
                if (s_prune && rep.outcome == SearchOutcome::success)
                    rep = prune_and_retry(rep, cfg);
                if (s_json) {
                    json j{{"outcome", outcome_name(rep.outcome)},
                           {"restarts_used", rep.restarts_used},
                           {"final_max_residual", rep.final_max_residual},
                           {"seed", rep.seed}};
                    std::cout << j.dump(2) << "\n";
                } else {
                    std::cout << "outcome: " << outcome_name(rep.outcome) << "\n";
                }
                if (rep.outcome != SearchOutcome::success) return kExitFail;
                Rule g = convert_from_gaussian(*rep.rule);
                emit_rule(g, s_out, digits, {g.provenance});
                return kExitPass;
            }
            return cmd_search(cfg, s_autoN, s_max, s_prune, s_out, digits, s_json);
        }
        if (*ca)
            return cmd_canon(c_spec, c_align, c_simplex, c_variant, c_symmetrize,
                             ca->count("--axis") ? std::optional<int>(c_axis) : std::nullopt,
                             c_project,
                             ca->count("--radius") ? std::optional<double>(c_radius) : std::nullopt,
                             c_blend, c_out, c_paper_digits ? 15 : 17);
        if (*re)
            return cmd_refine(r_spec, r_degree == -2 ? std::nullopt : std::optional<int>(r_degree),
                              r_digits, r_out, r_outdigits);
        if (*co) return cmd_convert(co_spec, co_to, co_out, co_paper_digits ? 15 : 17);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const rule_parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitUsage;
}
