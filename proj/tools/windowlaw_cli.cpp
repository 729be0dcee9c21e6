// Command-line front end: tables, diagnostics and simulations over the
// window-sum laboratory, with CSV/JSON emission.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "windowlaw/bounds.hpp"
#include "windowlaw/moments.hpp"
#include "windowlaw/norming.hpp"
#include "windowlaw/simulate.hpp"
#include "windowlaw/slowly_varying.hpp"

using nlohmann::json;
using namespace windowlaw;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNoConverge = 3;
constexpr int kExitAssertion = 4;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("WINDOWLAW_SEED"))
        return std::strtoull(env, nullptr, 10);
    return 0;
}

// "lo:hi:log" or "lo:hi:lin" (optionally ":count"), or a comma list.
std::vector<double> parse_grid(const std::string& text, int default_count = 64) {
    std::vector<double> out;
    if (text.find(':') == std::string::npos) {
        std::istringstream is(text);
        std::string item;
        while (std::getline(is, item, ',')) out.push_back(std::strtod(item.c_str(), nullptr));
        return out;
    }
    std::vector<std::string> parts;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ':')) parts.push_back(item);
    if (parts.size() < 3) throw CLI::ValidationError("grid", "expected lo:hi:scale[:count]");
    const double lo = std::strtod(parts[0].c_str(), nullptr);
    const double hi = std::strtod(parts[1].c_str(), nullptr);
    const bool logscale = parts[2] == "log";
    if (!logscale && parts[2] != "lin")
        throw CLI::ValidationError("grid", "scale must be 'log' or 'lin'");
    const int count = parts.size() > 3 ? std::atoi(parts[3].c_str()) : default_count;
    if (count < 2 || lo <= 0 || hi <= lo)
        throw CLI::ValidationError("grid", "need 0 < lo < hi and count >= 2");
    for (int i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / (count - 1);
        out.push_back(logscale ? lo * std::pow(hi / lo, t) : lo + t * (hi - lo));
    }
    return out;
}

// Artifact goes to --output when given (summary on stdout), otherwise to
// stdout (summary on stderr).
struct Emitter {
    std::string path;

    void artifact(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open output file: " + path);
        os << text;
    }
    void summary(const std::string& line) const {
        (path.empty() ? std::cerr : std::cout) << line << "\n";
    }
};

// Scalar-report rendering: JSON object, or a two-line CSV (header + values)
// with structured members (arrays, nested objects) omitted.
std::string object_artifact(const json& j, const std::string& format) {
    if (format != "csv") return j.dump(2) + "\n";
    std::string head, row;
    bool first = true;
    for (const auto& [key, value] : j.items()) {
        if (value.is_structured()) continue;
        if (!first) {
            head += ',';
            row += ',';
        }
        first = false;
        head += key;
        row += value.is_string() ? value.get<std::string>() : value.dump();
    }
    return head + "\n" + row + "\n";
}

std::string spec_help =
    "slowly varying family: logpow(p=..), iterlog(m=..), lpoll(p=..,q=..), "
    "loglogpow(q=..), expsqrtlog, explogbeta(beta=..,gamma=..)";
std::string dist_help =
    "distribution: normal(sigma=..), rademacher, uniformsym(a=..), "
    "twopoint(v=..,prob=..), logtail(a=..,cut=..[,power=..]), zero";

struct CommonOpts {
    std::string spec_text = "logpow(p=1)";
    std::string dist_text = "normal(sigma=1)";
    std::string output;
    std::string format = "csv";
};

void add_output_opts(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("-o,--output", o.output, "write the artifact to this file");
    cmd->add_option("--format", o.format, "artifact format")
        ->check(CLI::IsMember({"csv", "json"}));
}

int cmd_norming_table(const CommonOpts& o, const std::string& grid_text) {
    const SlowlyVaryingSpec spec = parse_sv_spec(o.spec_text);
    const std::vector<double> grid = parse_grid(grid_text);
    const std::int64_t lo = n_min(spec);
    std::ostringstream csv;
    csv << "n,a_n,d_n,f_n,b61,normalizer\n";
    json jrows = json::array();
    std::size_t rows = 0;
    for (double g : grid) {
        const std::int64_t n = std::max<std::int64_t>(static_cast<std::int64_t>(std::llround(g)), lo);
        const WindowSchedulePoint p = schedule_point(spec, n);
        csv << p.n << ',' << p.a_n << ',' << fmt(p.d_n) << ',' << fmt(p.f_n) << ','
            << fmt(p.b_theorem61) << ',' << fmt(p.normalizer) << '\n';
        jrows.push_back(json{{"n", p.n},
                             {"a_n", p.a_n},
                             {"d_n", p.d_n},
                             {"f_n", p.f_n},
                             {"b61", p.b_theorem61},
                             {"normalizer", p.normalizer}});
        ++rows;
    }
    Emitter{o.output}.artifact(o.format == "json" ? jrows.dump(2) + "\n" : csv.str());
    Emitter{o.output}.summary("norming-table: " + std::to_string(rows) + " rows for " +
                              to_string(spec));
    return kExitOk;
}

int cmd_subsequence(const CommonOpts& o, double c, std::int64_t k_max, std::int64_t k_start) {
    SubsequenceSpec sub{parse_sv_spec(o.spec_text), c, k_start};
    const SubsequenceDiagnostics diag = subsequence_diagnostics(sub, k_max);
    std::ostringstream csv;
    csv << "k,n_k,d_over_log_k,step_ratio,disjoint\n";
    json jrows = json::array();
    for (std::size_t i = 0; i < diag.k.size(); ++i) {
        csv << diag.k[i] << ',' << diag.n_k[i] << ',' << fmt(diag.d_over_log_k[i]) << ','
            << fmt(diag.step_ratio[i]) << ',' << (diag.disjoint[i] ? 1 : 0) << '\n';
        jrows.push_back(json{{"k", diag.k[i]},
                             {"n_k", diag.n_k[i]},
                             {"d_over_log_k", diag.d_over_log_k[i]},
                             {"step_ratio", diag.step_ratio[i]},
                             {"disjoint", static_cast<bool>(diag.disjoint[i])}});
    }
    json jout{{"rows", jrows},
              {"first_disjoint_k", diag.first_disjoint_k},
              {"overlap_persists", diag.overlap_persists}};
    Emitter{o.output}.artifact(o.format == "json" ? jout.dump(2) + "\n" : csv.str());
    Emitter{o.output}.summary(
        "subsequence: " + std::to_string(diag.k.size()) + " checkpoints, disjoint from k=" +
        std::to_string(diag.first_disjoint_k) +
        (diag.overlap_persists ? " (overlap persists)" : ""));
    return kExitOk;
}

int cmd_conjugate(const CommonOpts& o, const std::string& grid_text) {
    const SlowlyVaryingSpec spec = parse_sv_spec(o.spec_text);
    std::ostringstream csv;
    csv << "x,conjugate,residual,iterations\n";
    json jrows = json::array();
    for (double x : parse_grid(grid_text, 16)) {
        const DeBruijnResult r = de_bruijn_conjugate(spec, x);
        csv << fmt(x) << ',' << fmt(r.value) << ',' << fmt(r.residual) << ',' << r.iterations
            << '\n';
        jrows.push_back(json{{"x", x},
                             {"conjugate", r.value},
                             {"residual", r.residual},
                             {"iterations", r.iterations}});
    }
    Emitter{o.output}.artifact(o.format == "json" ? jrows.dump(2) + "\n" : csv.str());
    Emitter{o.output}.summary("conjugate: " + to_string(spec));
    return kExitOk;
}

int cmd_moment_check(const CommonOpts& o, const std::string& mode_text, bool closed_form) {
    const SlowlyVaryingSpec spec = parse_sv_spec(o.spec_text);
    const DistributionSpec dist = parse_dist(o.dist_text);
    const ConditionMode mode =
        mode_text == "b" ? ConditionMode::BInverse : ConditionMode::FInverse;
    const MomentVerdict v = closed_form ? corollary_condition(spec, dist, mode)
                                        : moment_condition(spec, dist, mode);
    json j{{"condition", to_string(v.condition)},
           {"estimate", std::isfinite(v.estimate) ? json(v.estimate) : json(nullptr)},
           {"verdict", to_string(v.verdict)},
           {"method", to_string(v.method)},
           {"error_bound", std::isfinite(v.error_bound) ? json(v.error_bound) : json(nullptr)}};
    Emitter{o.output}.artifact(object_artifact(j, o.format));
    Emitter{o.output}.summary("moment-check: " + to_string(v.verdict) + " via " +
                              to_string(v.method));
    return kExitOk;
}

int cmd_simulate(const CommonOpts& o, double c, std::int64_t n_total, std::uint64_t seed,
                 int replicates, const std::string& mode_text, const std::string& state_path) {
    StreamConfig cfg;
    cfg.spec = parse_sv_spec(o.spec_text);
    cfg.dist = parse_dist(o.dist_text);
    cfg.c = c;
    cfg.n_total = n_total;
    cfg.seed = seed;
    cfg.replicates = replicates;
    cfg.mode = mode_text == "dense" ? SimMode::DenseMax : SimMode::CheckpointsOnly;

    std::ostringstream csv;
    csv << "k,n_k,a,d,R,running_max\n";
    double overall_max = -HUGE_VAL;
    json jreps = json::array();
    for (int rep = 0; rep < replicates; ++rep) {
        const SimulationResult res =
            run_windows(cfg, rep, replicates == 1 ? state_path : std::string{});
        for (const CheckpointRecord& cp : res.checkpoints)
            csv << cp.k << ',' << cp.n << ',' << cp.a << ',' << fmt(cp.d) << ',' << fmt(cp.r)
                << ',' << fmt(cp.running_max) << '\n';
        overall_max = std::max(overall_max, res.running_max);
        json jr{{"replicate", rep},
                {"running_max", res.running_max},
                {"running_min", res.running_min},
                {"checkpoints", res.checkpoints.size()},
                {"wall_seconds", res.wall_seconds}};
        if (res.dense_max) jr["dense_max"] = *res.dense_max;
        jreps.push_back(jr);
    }
    if (o.format == "json")
        Emitter{o.output}.artifact(json{{"replicates", jreps}}.dump(2) + "\n");
    else
        Emitter{o.output}.artifact(csv.str());
    Emitter{o.output}.summary("simulate: max over replicates " + fmt(overall_max));
    return kExitOk;
}

int cmd_er_rho(const CommonOpts& o, double c) {
    const RateFunctionModel model(parse_dist(o.dist_text));
    const double rho = er_rho(model, c);
    const bool saturated =
        std::isfinite(model.x_max()) && cramer_rate(model, model.x_max()) <= 1.0 / c;
    json j{{"rho", rho}, {"c", c}, {"saturated", saturated}};
    Emitter{o.output}.artifact(object_artifact(j, o.format));
    Emitter{o.output}.summary("er-rho: " + fmt(rho));
    return kExitOk;
}

int cmd_bounds_check(const CommonOpts& o, double c, double alpha, std::int64_t k_max,
                     const BoundParams& params, double d_n) {
    SubsequenceSpec sub{parse_sv_spec(o.spec_text), c, 1};
    const BorelCantelliReport bc = borel_cantelli_diagnostic(sub, alpha, k_max);
    json j{{"alpha", bc.alpha},
           {"k_max", bc.k_max},
           {"partial_quarter", bc.partial_quarter},
           {"partial_half", bc.partial_half},
           {"partial_full", bc.partial_full},
           {"slope", bc.slope},
           {"decay_exponent", bc.decay_exponent},
           {"verdict", to_string(bc.verdict)},
           {"upper_bound", upper_bound_34(params, d_n)},
           {"lower_bound", lower_bound_36(params, d_n)},
           {"d_n", d_n}};
    Emitter{o.output}.artifact(object_artifact(j, o.format));
    Emitter{o.output}.summary("bounds-check: " + to_string(bc.verdict) +
                              " (decay exponent " + fmt(bc.decay_exponent) + ")");
    return kExitOk;
}

int cmd_khj_sweep(const CommonOpts& o, int n_hi) {
    const DistributionSpec dist = parse_dist(o.dist_text);
    json points = json::array();
    int violations = 0;
    double min_slack = HUGE_VAL;
    int count = 0;
    for (int n = 2; n <= n_hi; ++n) {
        for (double x = 0.5; x <= n; x += 0.5) {
            for (double y = 0.5; y <= n; y += 0.5) {
                const KhjReport r = khj_check(n, x, y, dist);
                min_slack = std::min(min_slack, r.slack);
                ++count;
                if (!r.holds) {
                    ++violations;
                    points.push_back(json{{"kind", "khj"}, {"n", n}, {"x", x}, {"y", y},
                                          {"lhs", r.lhs},
                                          {"rhs", r.sum_tails + r.four_p_sq}});
                }
            }
        }
        if (dist.symmetric()) {
            for (double x = 0; x <= n; x += 1.0) {
                const LevyReport r = levy_check(n, x, dist);
                ++count;
                if (!r.holds) {
                    ++violations;
                    points.push_back(json{{"kind", "levy"}, {"n", n}, {"x", x},
                                          {"lhs", r.lhs}, {"rhs", r.rhs}});
                }
            }
        }
    }
    json j{{"grid_points", count},
           {"violations", violations},
           {"min_slack", min_slack},
           {"failures", points}};
    Emitter{o.output}.artifact(object_artifact(j, o.format));
    Emitter{o.output}.summary("khj-sweep: " + std::to_string(count) + " points, " +
                              std::to_string(violations) + " violations");
    return violations == 0 ? kExitOk : kExitAssertion;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for normalized sliding-window sums"};
    app.set_config("--config", "", "flat key=value configuration file");
    app.require_subcommand(1);

    CommonOpts o;
    std::string grid = "16:1000000:log";
    double c = 2.0, alpha = 1.0, d_n = 10.0;
    std::int64_t k_max = 10000, k_start = 1, n_total = 1000000;
    std::uint64_t seed = default_seed();
    int replicates = 1, khj_n = 10;
    std::string mode = "f", sim_mode = "checkpoints", state_path;
    bool closed_form = false;
    BoundParams params;

    auto* nt = app.add_subcommand("norming-table",
                                  "window length, norming exponent and normalizer per n");
    nt->add_option("--spec", o.spec_text, spec_help);
    nt->add_option("--n", grid, "grid lo:hi:log|lin[:count] or comma list");
    add_output_opts(nt, o);

    auto* ss = app.add_subcommand("subsequence", "checkpoint subsequence diagnostics");
    ss->add_option("--spec", o.spec_text, spec_help);
    ss->add_option("--c", c, "spacing parameter (> 1 for disjoint windows)");
    ss->add_option("--k-max", k_max, "largest checkpoint index")->check(CLI::PositiveNumber);
    ss->add_option("--k-start", k_start, "first checkpoint index");
    add_output_opts(ss, o);

    auto* cj = app.add_subcommand("conjugate", "asymptotic-inverse conjugate values");
    cj->add_option("--spec", o.spec_text, spec_help);
    cj->add_option("--x", grid, "evaluation grid");
    add_output_opts(cj, o);

    auto* mc = app.add_subcommand("moment-check", "moment-condition classification");
    mc->add_option("--spec", o.spec_text, spec_help);
    mc->add_option("--dist", o.dist_text, dist_help);
    mc->add_option("--mode", mode, "condition: f (window-length) or b (single-truncation)")
        ->check(CLI::IsMember({"f", "b"}));
    mc->add_flag("--closed-form", closed_form, "use the per-family closed-form weight");
    add_output_opts(mc, o);

    auto* sim = app.add_subcommand("simulate", "normalized window sums along checkpoints");
    sim->add_option("--spec", o.spec_text, spec_help);
    sim->add_option("--dist", o.dist_text, dist_help);
    sim->add_option("--c", c, "checkpoint spacing (> 1)");
    sim->add_option("--n-total", n_total, "stream length")->check(CLI::PositiveNumber);
    sim->add_option("--seed", seed, "stream seed (default from WINDOWLAW_SEED)");
    sim->add_option("--replicates", replicates, "independent replicates")
        ->check(CLI::PositiveNumber);
    sim->add_option("--mode", sim_mode, "checkpoints or dense")
        ->check(CLI::IsMember({"checkpoints", "dense"}));
    sim->add_option("--state", state_path, "resumable state file (single replicate)");
    add_output_opts(sim, o);

    auto* er = app.add_subcommand("er-rho", "rate-threshold inversion rho(c)");
    er->add_option("--dist", o.dist_text, dist_help);
    er->add_option("--c", c, "window scale")->check(CLI::PositiveNumber);
    add_output_opts(er, o);

    auto* bc = app.add_subcommand("bounds-check",
                                  "exponential bounds and series convergence diagnostic");
    bc->add_option("--spec", o.spec_text, spec_help);
    bc->add_option("--c", c, "checkpoint spacing");
    bc->add_option("--alpha", alpha, "series exponent multiplier");
    bc->add_option("--k-max", k_max, "diagnostic length")->check(CLI::PositiveNumber);
    bc->add_option("--d-n", d_n, "exponent argument for the bound evaluations");
    bc->add_option("--sigma", params.sigma, "summand standard deviation");
    bc->add_option("--delta", params.delta, "slack in (0,1)");
    bc->add_option("--epsilon", params.epsilon, "level multiplier");
    bc->add_option("--gamma", params.gamma, "lower-bound slack");
    add_output_opts(bc, o);

    auto* kh = app.add_subcommand("khj-sweep", "exhaustive inequality verification");
    kh->add_option("--n", khj_n, "largest number of summands")->check(CLI::Range(2, 22));
    kh->add_option("--dist", o.dist_text, dist_help);
    add_output_opts(kh, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (nt->parsed()) return cmd_norming_table(o, grid);
        if (ss->parsed()) return cmd_subsequence(o, c, k_max, k_start);
        if (cj->parsed()) return cmd_conjugate(o, grid);
        if (mc->parsed()) return cmd_moment_check(o, mode, closed_form);
        if (sim->parsed()) return cmd_simulate(o, c, n_total, seed, replicates, sim_mode, state_path);
        if (er->parsed()) return cmd_er_rho(o, c);
        if (bc->parsed()) return cmd_bounds_check(o, c, alpha, k_max, params, d_n);
        if (kh->parsed()) {
            if (kh->count("--dist") == 0) o.dist_text = "rademacher";
            return cmd_khj_sweep(o, khj_n);
        }
    } catch (const NonConvergenceError& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return kExitNoConverge;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConverge;
    }
    return kExitUsage;
}
