#include "cli.hpp"

#include "suite.hpp"
#include "supmax/construction.hpp"
#include "supmax/discrete.hpp"
#include "supmax/errors.hpp"
#include "supmax/jump_target.hpp"
#include "supmax/simulation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

namespace supmax::cli {

namespace {

using json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt_prob(double p) {
    if (std::isnan(p)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", p);
    return buf;
}

std::string fmt_num(double x) {
    if (std::isnan(x)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

// JSON numbers carry the same digits as the CSV.
json prob_json(double p) { return std::isnan(p) ? json(nullptr) : json(std::stod(fmt_prob(p))); }
json num_json(double x) { return std::isnan(x) ? json(nullptr) : json(std::stod(fmt_num(x))); }

struct Common {
    std::string format = "csv";
    std::string out_path;
    unsigned threads = 0;
    std::string config_path;
};

struct FamilyArgs {
    std::optional<double> const_a;
    std::optional<std::string> affine_b;
    std::optional<std::string> table;
    double mu = 1.0;
    double sigma2 = 1.0;
};

void add_family_options(CLI::App* cmd, FamilyArgs& f) {
    auto* c = cmd->add_option("--const-a", f.const_a, "Constant jump target h = a");
    auto* b = cmd->add_option("--affine-b", f.affine_b, "Affine jump target h(y) = b + y; 'auto' picks 16 sigma2 / (9 mu)");
    auto* t = cmd->add_option("--table", f.table, "Tabulated jump target: file of 'y h' pairs");
    c->excludes(b)->excludes(t);
    b->excludes(t);
    cmd->add_option("--mu", f.mu, "Drift rate mu")->capture_default_str();
    cmd->add_option("--sigma2", f.sigma2, "Variance rate sigma2")->capture_default_str();
}

std::vector<JumpTargetFn::Knot> read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open table file: " + path);
    std::vector<JumpTargetFn::Knot> knots;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        for (char& ch : line)
            if (ch == ',') ch = ' ';
        std::istringstream ls(line);
        double y = 0.0;
        double h = 0.0;
        if (!(ls >> y)) continue;
        if (!(ls >> h)) throw UsageError("table line needs two numbers: " + line);
        knots.push_back({y, h});
    }
    return knots;
}

BigJumpSpec make_spec(const FamilyArgs& f) {
    if (f.const_a) return BigJumpSpec(f.mu, f.sigma2, JumpTargetFn::constant(*f.const_a));
    if (f.affine_b) {
        double b = 0.0;
        if (*f.affine_b == "auto") {
            detail::require(f.mu > 0.0 && f.sigma2 > 0.0, "mu and sigma2 must be > 0");
            b = example2_b_star(f.mu, f.sigma2);
        } else {
            try {
                std::size_t used = 0;
                b = std::stod(*f.affine_b, &used);
                if (used != f.affine_b->size()) throw std::invalid_argument("trailing");
            } catch (const std::logic_error&) {
                throw UsageError("--affine-b expects a number or 'auto'");
            }
        }
        return BigJumpSpec(f.mu, f.sigma2, JumpTargetFn::affine(b));
    }
    if (f.table) return BigJumpSpec(f.mu, f.sigma2, JumpTargetFn::tabulated(read_table(*f.table)));
    throw UsageError("one of --const-a, --affine-b, --table is required");
}

const char* kTailHeader =
    "family,mu,sigma2,h_param,gamma,a,n,successes,p_hat,ci_low,ci_high,analytic,upper_bound,lower_bound_prop2";

void write_tail_rows(std::ostream& os, const std::string& format, const BigJumpSpec& spec,
                     const std::vector<TailEstimate>& rows) {
    const double param = spec.h().parameter().value_or(std::nan(""));
    const double gamma = spec.gamma();
    if (format == "csv") os << kTailHeader << '\n';
    for (const auto& e : rows) {
        const double analytic = e.analytic.value_or(std::nan(""));
        const double upper = bound_tail(gamma, e.level_a);
        const double lower = uniform_lower_bound(gamma, e.level_a);
        if (format == "csv") {
            os << spec.h().family_name() << ',' << fmt_num(spec.mu()) << ',' << fmt_num(spec.sigma2()) << ','
               << fmt_num(param) << ',' << fmt_num(gamma) << ',' << fmt_num(e.level_a) << ',' << e.trials << ','
               << e.successes << ',' << fmt_prob(e.p_hat) << ',' << fmt_prob(e.ci_low) << ','
               << fmt_prob(e.ci_high) << ',' << fmt_prob(analytic) << ',' << fmt_prob(upper) << ','
               << fmt_prob(lower) << '\n';
        } else {
            json j;
            j["schema_version"] = 1;
            j["family"] = std::string(spec.h().family_name());
            j["mu"] = num_json(spec.mu());
            j["sigma2"] = num_json(spec.sigma2());
            j["h_param"] = num_json(param);
            j["gamma"] = num_json(gamma);
            j["a"] = num_json(e.level_a);
            j["n"] = e.trials;
            j["successes"] = e.successes;
            j["p_hat"] = prob_json(e.p_hat);
            j["ci_low"] = prob_json(e.ci_low);
            j["ci_high"] = prob_json(e.ci_high);
            j["analytic"] = prob_json(analytic);
            j["upper_bound"] = prob_json(upper);
            j["lower_bound_prop2"] = prob_json(lower);
            os << j.dump() << '\n';
        }
    }
}

// Generic one-record table: keys become CSV columns.
void write_record(std::ostream& os, const std::string& format,
                  const std::vector<std::pair<std::string, std::string>>& cells, const json& record) {
    if (format == "csv") {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i].first;
        os << '\n';
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i].second;
        os << '\n';
    } else {
        json j;
        j["schema_version"] = 1;
        for (const auto& [k, v] : record.items()) j[k] = v;
        os << j.dump() << '\n';
    }
}

std::uint64_t parse_seed(const std::string& text, const std::string& source) {
    try {
        std::size_t used = 0;
        if (!text.empty() && text[0] == '-') throw std::invalid_argument("negative");
        const auto v = std::stoull(text, &used, 0);
        if (used != text.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::logic_error&) {
        throw UsageError(source + ": not a 64-bit unsigned seed: " + text);
    }
}

// Config values are spliced in as --key=value right after the subcommand name.
// Keys the user passed on the command line are dropped from the file, so flags
// win wherever they appear.
std::vector<std::string> splice_config(const std::vector<std::string>& args,
                                       const std::vector<std::string>& subcommands) {
    std::optional<std::string> config;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) config = args[i].substr(9);
    }
    if (!config) return args;
    std::ifstream in(*config);
    if (!in) throw UsageError("cannot open config file: " + *config);
    std::vector<std::string> given;
    for (const auto& a : args)
        if (a.size() > 2 && a.rfind("--", 0) == 0) given.push_back(a.substr(2, a.find('=') - 2));
    std::vector<std::string> injected;
    for (const auto& [k, v] : parse_config(in)) {
        if (k == "config") throw UsageError("config files cannot include other config files");
        if (std::find(given.begin(), given.end(), k) != given.end()) continue;
        injected.push_back("--" + k + "=" + v);
    }
    std::vector<std::string> out;
    bool placed = false;
    for (const auto& a : args) {
        out.push_back(a);
        if (!placed && std::find(subcommands.begin(), subcommands.end(), a) != subcommands.end()) {
            out.insert(out.end(), injected.begin(), injected.end());
            placed = true;
        }
    }
    if (!placed) out.insert(out.begin(), injected.begin(), injected.end());
    return out;
}

} // namespace

std::vector<std::pair<std::string, std::string>> parse_config(std::istream& in) {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.rfind("--", 0) == 0) key.erase(0, 2);
        if (key.empty()) throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
        pairs.emplace_back(std::move(key), std::move(value));
    }
    return pairs;
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Extremal supermartingale constructions: bounds, exact simulation, verification"};
    app.name("supmax");
    app.require_subcommand(1);
    app.fallthrough();
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    Common common;
    app.add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--out", common.out_path, "Write results to FILE instead of standard output");
    app.add_option("--threads", common.threads, "Worker threads, 0 = all cores (results do not depend on it)")
        ->capture_default_str();
    app.add_option("--config", common.config_path, "Flat key=value file; command-line flags win");

    std::string seed_text;
    auto add_seed = [&](CLI::App* cmd) {
        return cmd->add_option("--seed", seed_text, "Master seed (default: $SUPMAX_SEED, else 0)");
    };

    // bound
    double b_gamma = 0.0;
    double b_a = 0.0;
    bool b_discrete = false;
    bool b_uniform = false;
    auto* bound = app.add_subcommand("bound", "Tail bound 1/(1 + gamma a)");
    bound->add_option("--gamma", b_gamma, "gamma = mu / sigma2")->required();
    bound->add_option("--a", b_a, "Level a")->required();
    bound->add_flag("--discrete", b_discrete, "Discrete-time setting (same bound)");
    bound->add_flag("--with-uniform", b_uniform, "Add the uniform lower bound 1/(5(1 + a gamma))");

    // simulate
    FamilyArgs s_family;
    std::vector<double> s_levels;
    std::uint64_t s_n = 100000;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo tail P{Y* >= a} of one construction");
    add_family_options(simulate, s_family);
    simulate->add_option("--a", s_levels, "Level a (repeatable; default 1)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    simulate->add_option("--n", s_n, "Replicates")->capture_default_str();
    auto* s_seed = add_seed(simulate);

    // sweep
    FamilyArgs w_family;
    double w_min = 0.0;
    double w_max = 100.0;
    std::size_t w_points = 21;
    bool w_log = false;
    std::uint64_t w_n = 100000;
    auto* sweep = app.add_subcommand("sweep", "Tail estimates over a grid of levels from one sample");
    add_family_options(sweep, w_family);
    sweep->add_option("--a-min", w_min, "Smallest level")->capture_default_str();
    sweep->add_option("--a-max", w_max, "Largest level")->capture_default_str();
    sweep->add_option("--points", w_points, "Number of levels")->capture_default_str();
    sweep->add_flag("--log", w_log, "Geometric spacing (needs a-min > 0)");
    sweep->add_option("--n", w_n, "Replicates")->capture_default_str();
    auto* w_seed = add_seed(sweep);

    // discrete
    double d_gamma = 1.0;
    double d_a = 1.0;
    double d_eps = 0.05;
    std::optional<double> d_mu;
    std::uint64_t d_n = 100000;
    auto* discrete = app.add_subcommand("discrete", "Sampled chain that nearly attains the discrete-time bound");
    discrete->add_option("--gamma", d_gamma, "gamma")->capture_default_str();
    discrete->add_option("--a", d_a, "Level a")->capture_default_str();
    discrete->add_option("--eps", d_eps, "Allowed gap below 1/(1 + gamma a)")->capture_default_str();
    discrete->add_option("--mu-tilde", d_mu, "Use this mu_tilde instead of choosing it from eps");
    discrete->add_option("--n", d_n, "Replicates")->capture_default_str();
    auto* d_seed = add_seed(discrete);

    // kingman
    double k_p = 0.45;
    std::uint64_t k_n = 100000;
    std::uint64_t k_cap = 100000000;
    auto* kingman = app.add_subcommand("kingman", "Mean supremum of a +-1 random walk against 1/(2 gamma)");
    kingman->add_option("--p-up", k_p, "Up-step probability, < 1/2")->capture_default_str();
    kingman->add_option("--n", k_n, "Replicates")->capture_default_str();
    kingman->add_option("--steps-cap", k_cap, "Per-replicate step limit")->capture_default_str();
    auto* k_seed = add_seed(kingman);

    // verify
    std::string v_suite = "smoke";
    bool v_bug = false;
    auto* verify = app.add_subcommand("verify", "Run the acceptance checks; exit 0 iff all pass");
    verify->add_option("--suite", v_suite, "smoke or full")
        ->check(CLI::IsMember({"smoke", "full"}))
        ->capture_default_str();
    auto* v_seed = add_seed(verify);
    verify->add_flag("--inject-bug", v_bug, "Flip the jump size (negative control)")->group("");

    std::vector<std::string> args;
    try {
        args = splice_config(raw_args, {"bound", "simulate", "sweep", "discrete", "kingman", "verify"});
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    auto seed_of = [&](CLI::Option* opt) -> std::uint64_t {
        if (opt->count() > 0) return parse_seed(seed_text, "--seed");
        if (const char* env = std::getenv("SUPMAX_SEED"); env && *env) return parse_seed(env, "SUPMAX_SEED");
        return 0;
    };

    std::ofstream file;
    std::ostream* os = &out;
    try {
        if (!common.out_path.empty()) {
            file.open(common.out_path);
            if (!file) throw UsageError("cannot open output file: " + common.out_path);
            os = &file;
        }
        const std::string& format = common.format;

        if (bound->parsed()) {
            const double upper = bound_tail(b_gamma, b_a);
            std::vector<std::pair<std::string, std::string>> cells{
                {"gamma", fmt_num(b_gamma)},
                {"a", fmt_num(b_a)},
                {"setting", b_discrete ? "discrete" : "continuous"},
                {"upper_bound", fmt_prob(upper)}};
            json rec{{"gamma", num_json(b_gamma)},
                     {"a", num_json(b_a)},
                     {"setting", b_discrete ? "discrete" : "continuous"},
                     {"upper_bound", prob_json(upper)}};
            if (b_uniform) {
                const double lower = uniform_lower_bound(b_gamma, b_a);
                cells.emplace_back("lower_bound_prop2", fmt_prob(lower));
                rec["lower_bound_prop2"] = prob_json(lower);
            }
            write_record(*os, format, cells, rec);
            return kOk;
        }

        if (simulate->parsed()) {
            const BigJumpSpec spec = make_spec(s_family);
            detail::require(s_n >= 1, "n must be >= 1");
            if (s_levels.empty()) s_levels.push_back(1.0);
            const JumpSampler sampler(spec);
            const auto rows = estimate_tails(sampler, s_levels, s_n, RngPolicy{seed_of(s_seed)}, common.threads);
            write_tail_rows(*os, format, spec, rows);
            return kOk;
        }

        if (sweep->parsed()) {
            const BigJumpSpec spec = make_spec(w_family);
            detail::require(w_points >= 1, "points must be >= 1");
            detail::require(w_min >= 0.0 && w_max >= w_min, "need 0 <= a-min <= a-max");
            detail::require(!w_log || w_min > 0.0, "--log needs a-min > 0");
            detail::require(w_n >= 1, "n must be >= 1");
            std::vector<double> levels(w_points);
            for (std::size_t k = 0; k < w_points; ++k) {
                const double f = w_points == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(w_points - 1);
                levels[k] = w_log ? w_min * std::pow(w_max / w_min, f) : w_min + (w_max - w_min) * f;
            }
            levels.back() = w_max;
            const JumpSampler sampler(spec);
            const auto rows = estimate_tails(sampler, levels, w_n, RngPolicy{seed_of(w_seed)}, common.threads);
            write_tail_rows(*os, format, spec, rows);
            return kOk;
        }

        if (discrete->parsed()) {
            detail::require(d_n >= 1, "n must be >= 1");
            const double mu = d_mu ? *d_mu : choose_mu_for_eps(d_gamma, d_a, d_eps);
            const auto params = make_discrete_params(d_gamma, d_a, mu);
            const SampledChain chain(params);
            const auto est = estimate_chain_hit(chain, d_n, RngPolicy{seed_of(d_seed)}, common.threads);
            const double target = sampled_hit_bound(d_gamma, d_a, mu);
            const double bound = bound_tail(d_gamma, d_a);
            std::vector<std::pair<std::string, std::string>> cells{
                {"gamma", fmt_num(d_gamma)},
                {"a", fmt_num(d_a)},
                {"eps", d_mu ? "" : fmt_num(d_eps)},
                {"mu_tilde", fmt_num(params.mu_tilde)},
                {"sigma2_tilde", fmt_num(params.sigma2_tilde)},
                {"a_tilde", fmt_num(params.a_tilde)},
                {"target", fmt_prob(target)},
                {"upper_bound", fmt_prob(bound)},
                {"n", std::to_string(est.trials)},
                {"successes", std::to_string(est.successes)},
                {"p_hat", fmt_prob(est.p_hat)},
                {"ci_low", fmt_prob(est.ci_low)},
                {"ci_high", fmt_prob(est.ci_high)}};
            json rec{{"gamma", num_json(d_gamma)},
                     {"a", num_json(d_a)},
                     {"eps", d_mu ? json(nullptr) : num_json(d_eps)},
                     {"mu_tilde", num_json(params.mu_tilde)},
                     {"sigma2_tilde", num_json(params.sigma2_tilde)},
                     {"a_tilde", num_json(params.a_tilde)},
                     {"target", prob_json(target)},
                     {"upper_bound", prob_json(bound)},
                     {"n", est.trials},
                     {"successes", est.successes},
                     {"p_hat", prob_json(est.p_hat)},
                     {"ci_low", prob_json(est.ci_low)},
                     {"ci_high", prob_json(est.ci_high)}};
            write_record(*os, format, cells, rec);
            return kOk;
        }

        if (kingman->parsed()) {
            const auto res = random_walk_sup(k_p, k_cap, k_n, RngPolicy{seed_of(k_seed)}, common.threads);
            const auto& m = res.mean_sup;
            const double exact = k_p / (1.0 - 2.0 * k_p);
            std::vector<std::pair<std::string, std::string>> cells{
                {"p_up", fmt_num(k_p)},
                {"gamma", fmt_num(res.gamma_implied)},
                {"n", std::to_string(m.n)},
                {"mean_sup", fmt_num(m.mean)},
                {"se", fmt_num(m.se)},
                {"ci_low", fmt_num(m.ci_low)},
                {"ci_high", fmt_num(m.ci_high)},
                {"exact_mean", fmt_num(exact)},
                {"kingman_bound", fmt_num(res.kingman_bound)},
                {"truncated", std::to_string(res.truncated)}};
            json rec{{"p_up", num_json(k_p)},
                     {"gamma", num_json(res.gamma_implied)},
                     {"n", m.n},
                     {"mean_sup", num_json(m.mean)},
                     {"se", num_json(m.se)},
                     {"ci_low", num_json(m.ci_low)},
                     {"ci_high", num_json(m.ci_high)},
                     {"exact_mean", num_json(exact)},
                     {"kingman_bound", num_json(res.kingman_bound)},
                     {"truncated", res.truncated}};
            write_record(*os, format, cells, rec);
            return kOk;
        }

        if (verify->parsed()) {
            suite::Options opts;
            opts.kind = v_suite == "full" ? suite::Kind::Full : suite::Kind::Smoke;
            opts.seed = seed_of(v_seed);
            opts.threads = common.threads;
            opts.inject_bug = v_bug;
            const auto records = suite::run_suite(opts);
            *os << suite::render_jsonl(records, opts);
            return suite::overall(records) == Verdict::Pass ? kOk : kVerificationFailed;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const InfeasibleParameters& e) {
        err << "infeasible parameters: " << e.what() << '\n';
        return kInfeasible;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    }
    return kUsage;
}

} // namespace supmax::cli
