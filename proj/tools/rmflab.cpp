// rmflab: simulation and verification lab for partial sums of random
// multiplicative functions and the associated critical chaos measures.
//
// Every subcommand writes <out>.summary.json (full config echo + results)
// and, where per-trial data exists, <out>.trials.csv. Identical configs
// produce identical output bytes. Worker count: --threads flag, overridden
// by the RMF_LAB_THREADS environment variable.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rmf/concentration.hpp"
#include "rmf/coupling.hpp"
#include "rmf/dickman.hpp"
#include "rmf/euler.hpp"
#include "rmf/experiments.hpp"
#include "rmf/primes.hpp"
#include "rmf/sampler.hpp"
#include "rmf/spectral.hpp"
#include "rmf/stats.hpp"
#include "rmf/truncation.hpp"
#include "rmf/util.hpp"

using json = nlohmann::ordered_json;
using namespace rmf;

namespace {

constexpr const char* kVersion = "rmflab 0.1.0";

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CsvWriter {
    std::ofstream out;
    explicit CsvWriter(const std::string& path) : out(path) {
        if (!out) throw std::runtime_error("cannot open " + path);
    }
    void header(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
        out << "\n";
    }
    void row(const std::vector<double>& vals) {
        for (std::size_t i = 0; i < vals.size(); ++i) out << (i ? "," : "") << fmt17(vals[i]);
        out << "\n";
    }
};

struct PhiSpec {
    std::string name = "unit";
    std::vector<double> breaks;
    std::vector<double> re, im;

    StepFunction build() const {
        if (name == "unit") return StepFunction::unit_indicator();
        if (name == "custom") {
            if (breaks.size() < 2 || re.size() + 1 != breaks.size() ||
                (!im.empty() && im.size() != re.size()))
                throw CLI::ValidationError(
                    "--phi custom needs --phi-breaks (m+1 values, first 0), --phi-re "
                    "(m values) and optionally --phi-im");
            std::vector<cplx> vals(re.size());
            for (std::size_t i = 0; i < vals.size(); ++i)
                vals[i] = {re[i], im.empty() ? 0.0 : im[i]};
            return StepFunction(breaks, vals);
        }
        throw CLI::ValidationError("--phi must be 'unit' or 'custom'");
    }
    json to_json() const {
        json j;
        j["name"] = name;
        if (name == "custom") {
            j["breaks"] = breaks;
            j["re"] = re;
            j["im"] = im;
        }
        return j;
    }
};

void add_phi_options(CLI::App* cmd, PhiSpec& phi) {
    cmd->add_option("--phi", phi.name, "step function: unit | custom");
    cmd->add_option("--phi-breaks", phi.breaks, "breakpoints, first must be 0");
    cmd->add_option("--phi-re", phi.re, "piece values, real parts");
    cmd->add_option("--phi-im", phi.im, "piece values, imaginary parts");
}

Model parse_model(const std::string& m) {
    if (m == "steinhaus") return Model::steinhaus;
    if (m == "gaussian") return Model::gaussian_analog;
    throw CLI::ValidationError("--model must be steinhaus | gaussian");
}

Twist parse_twist(const std::string& t) {
    if (t == "one") return Twist::one;
    if (t == "moebius") return Twist::moebius;
    if (t == "moebius2") return Twist::moebius_squared;
    throw CLI::ValidationError("--twist must be one | moebius | moebius2");
}

void write_summary(const std::string& out_base, const std::string& command, const json& config,
                   const json& results, const std::vector<std::string>& verdicts) {
    json j;
    j["version"] = kVersion;
    j["command"] = command;
    j["config"] = config;
    j["results"] = results;
    if (!verdicts.empty()) j["verdicts"] = verdicts;
    std::ofstream f(out_base + ".summary.json");
    if (!f) throw std::runtime_error("cannot open " + out_base + ".summary.json");
    f << j.dump(2) << "\n";
}

void print_verdicts(const std::vector<std::string>& verdicts) {
    for (const auto& v : verdicts) std::cout << v << "\n";
}

std::string verdict_line(bool pass, const std::string& what) {
    return std::string(pass ? "[PASS] " : "[FAIL] ") + what;
}

const FactorTable& shared_table(std::uint64_t limit) {
    static std::map<std::uint64_t, FactorTable> cache;
    auto it = cache.find(limit);
    if (it == cache.end()) it = cache.emplace(limit, FactorTable::build(limit)).first;
    return it->second;
}

json mean_se_json(const MeanSe& m) {
    json j;
    j["mean"] = m.mean;
    j["se"] = m.se;
    j["n"] = m.n;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kVersion) +
                 " - random multiplicative function and critical chaos laboratory"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads,
                   "worker threads (default: cores; RMF_LAB_THREADS overrides)");
    std::string config_path;
    app.add_option("--config", config_path,
                   "JSON file of long-option values, applied before explicit flags");

    std::uint64_t seed = 1;
    std::size_t trials = 200;
    std::string out = "rmflab_out";
    std::string model_name = "steinhaus";
    std::string twist_name = "one";

    const auto add_common = [&](CLI::App* cmd, bool with_trials = true) {
        cmd->add_option("--seed", seed, "master seed");
        if (with_trials) cmd->add_option("--trials", trials, "Monte Carlo trials");
        cmd->add_option("--out", out, "output basename");
        cmd->add_option("--model", model_name, "steinhaus | gaussian");
        return cmd;
    };

    double ss_x = 1e4;
    PhiSpec ss_phi;
    auto* ss = add_common(app.add_subcommand(
        "simulate-sum", "ensemble of S_x = (log log x)^{1/4} x^{-1/2} sum alpha(n) Phi(n/x)"));
    ss->add_option("--x", ss_x, "sum length");
    add_phi_options(ss, ss_phi);

    double tr_x = 1e4, tr_eps = 0.1, tr_delta = 0.05;
    PhiSpec tr_phi;
    auto* tr =
        add_common(app.add_subcommand("truncate", "full vs truncated sums over an ensemble"));
    tr->add_option("--x", tr_x, "sum length");
    tr->add_option("--eps", tr_eps, "cut exponent");
    tr->add_option("--delta", tr_delta, "band width exponent");
    add_phi_options(tr, tr_phi);

    double br_x = 1e4, br_eps = 0.1, br_delta = 0.05, br_tmax = 50.0;
    PhiSpec br_phi;
    auto* br = add_common(app.add_subcommand(
        "bracket", "bracket process T_{x,eps,delta} vs C_{eps,delta} * V-proxy reference"));
    br->add_option("--x", br_x, "sum length");
    br->add_option("--eps", br_eps, "cut exponent");
    br->add_option("--delta", br_delta, "band width exponent");
    br->add_option("--t-max", br_tmax, "V-proxy frequency cutoff");
    add_phi_options(br, br_phi);

    double cm_y = 1e4;
    std::vector<double> cm_us{0.0, 1.0, 2.0};
    std::vector<double> cm_interval{-0.5, 0.5};
    auto* cm = add_common(app.add_subcommand(
        "chaos-measure", "samples of m_{y,u}(I) per shift u with pairwise KS distances"));
    cm->add_option("--y", cm_y, "prime cutoff");
    cm->add_option("--u", cm_us, "shift parameters");
    cm->add_option("--interval", cm_interval, "interval endpoints: lo hi")->expected(2);

    std::vector<double> mm_ys{1e2, 1e3, 1e4};
    double mm_u = 1.0, mm_l = 1.0;
    std::vector<double> mm_interval{-0.5, 0.5};
    auto* mm = add_common(app.add_subcommand(
        "modified-moment", "E[|nu_{y,0}(I)-nu_{y,u}(I)|^2 e^{-L nu_{y,0}(I)}] across y"));
    mm->add_option("--y", mm_ys, "prime cutoffs");
    mm->add_option("--u", mm_u, "shift parameter");
    mm->add_option("--L", mm_l, "damping strength");
    mm->add_option("--interval", mm_interval, "interval endpoints: lo hi")->expected(2);
    mm->add_option("--twist", twist_name, "one | moebius | moebius2");

    std::vector<double> cr_ys{1e2, 1e3, 1e4};
    double cr_u1 = 1.0, cr_u2 = 2.0;
    auto* cr = add_common(app.add_subcommand(
        "coupling-report", "residual-field sups and marginal checks for the phase coupling"));
    cr->add_option("--y", cr_ys, "prime cutoffs");
    cr->add_option("--u1", cr_u1, "first shift");
    cr->add_option("--u2", cr_u2, "second shift");

    double vp_y = 50.0, vp_r = 0.2, vp_tol = 1e-3;
    PhiSpec vp_phi;
    auto* vp = add_common(
        app.add_subcommand("verify-plancherel",
                           "exact time-side integral against the frequency side"),
        false);
    vp->add_option("--y", vp_y, "prime cutoff");
    vp->add_option("--r", vp_r, "weight exponent in dt/t^{1+r}");
    vp->add_option("--tol", vp_tol, "relative tolerance on top of the tail slack");
    add_phi_options(vp, vp_phi);

    bool dk_check = false;
    double dk_eps = 0.2;
    auto* dk = add_common(app.add_subcommand("dickman", "Dickman rho diagnostics"), false);
    dk->add_flag("--check", dk_check, "run the residual/Laplace/bracket-constant checks");
    dk->add_option("--eps", dk_eps, "epsilon for the bracket-constant extrapolation");

    double ts_y = 1e6;
    std::vector<double> ts_ts{0.0, 0.5, 1.0};
    auto* ts = add_common(
        app.add_subcommand("tshift",
                           "shifted smooth Dirichlet sums against the Laplace asymptote"),
        false);
    ts->add_option("--y", ts_y, "prime cutoff");
    ts->add_option("--t", ts_ts, "shift values");

    double cd_y = 1e3, cd_u1 = 1.0, cd_u2 = 2.0;
    auto* cd = add_common(app.add_subcommand(
        "chaining-demo", "chaining tail bound against the residual-field MC sup tail"));
    cd->add_option("--y", cd_y, "prime cutoff");
    cd->add_option("--u1", cd_u1, "first shift");
    cd->add_option("--u2", cd_u2, "second shift");

    double an_x = 1e6, an_y = 100.0, an_z = 1000.0, an_window = 0.0;
    auto* an =
        add_common(app.add_subcommand("anatomy", "smooth/rough counting and Mertens sums"),
                   false);
    an->add_option("--x", an_x, "range");
    an->add_option("--y", an_y, "smoothness bound");
    an->add_option("--z", an_z, "upper smoothness bound for interval counts");
    an->add_option("--window", an_window, "interval length (default max(x/16, yz))");

    std::vector<double> mt_xs{1e4, 1e5, 1e6};
    double mt_q = 0.5;
    auto* mt = add_common(app.add_subcommand(
        "moment-trend", "E|sum alpha|^{2q} against the Harper envelope over an x grid"));
    mt->add_option("--x", mt_xs, "sum lengths");
    mt->add_option("--q", mt_q, "moment exponent, 0 < q <= 1");

    std::vector<double> lt_xs{1e4, 1e5};
    double lt_eps = 0.1, lt_delta = 0.05, lt_tmax = 50.0, lt_yref = 0.0;
    auto* lt = add_common(app.add_subcommand(
        "limit-test", "KS of truncated sums against the sqrt(C V) G reference across x"));
    lt->add_option("--x", lt_xs, "sum lengths");
    lt->add_option("--eps", lt_eps, "cut exponent");
    lt->add_option("--delta", lt_delta, "band width exponent");
    lt->add_option("--t-max", lt_tmax, "V-proxy frequency cutoff");
    lt->add_option("--y-ref", lt_yref, "reference y (default exp((log x)^0.9))");

    // expand --config into injected long options ahead of explicit flags
    std::vector<std::string> args(argv + 1, argv + argc);
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] != "--config") continue;
        std::ifstream f(args[i + 1]);
        if (!f) {
            std::cerr << "cannot open config " << args[i + 1] << "\n";
            return 2;
        }
        json cfg = json::parse(f);
        std::vector<std::string> injected;
        for (auto& [k, v] : cfg.items()) {
            injected.push_back("--" + k);
            if (v.is_array()) {
                for (auto& e : v)
                    injected.push_back(e.is_string() ? e.get<std::string>() : e.dump());
            } else if (v.is_string()) {
                injected.push_back(v.get<std::string>());
            } else {
                injected.push_back(v.dump());
            }
        }
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                   args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        // the subcommand name must stay first
        args.insert(args.begin() + 1, injected.begin(), injected.end());
        break;
    }

    try {
        std::vector<const char*> cargs;
        cargs.push_back(argv[0]);
        for (auto& s : args) cargs.push_back(s.c_str());
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (threads > 0 && !std::getenv("RMF_LAB_THREADS")) {
        static std::string env = "RMF_LAB_THREADS=" + std::to_string(threads);
        putenv(env.data());
    }

    try {
        const Model model = parse_model(model_name);
        std::vector<std::string> verdicts;

        if (ss->parsed()) {
            const StepFunction phi = ss_phi.build();
            json config{{"x", ss_x},           {"seed", seed},
                        {"trials", trials},    {"model", model_name},
                        {"phi", ss_phi.to_json()}};
            const auto limit =
                static_cast<std::uint64_t>(std::max(1.0, phi.support_bound()) * ss_x) + 1;
            const auto& table = shared_table(limit);
            std::vector<cplx> sums(trials);
            parallel_for(trials, [&](std::size_t i) {
                PhaseAssignment a(model, trial_seed(seed, i));
                sums[i] = full_sum(a, table, phi, ss_x);
            });
            CsvWriter csv(out + ".trials.csv");
            csv.header({"trial", "seed", "re_s", "im_s", "abs_s"});
            std::vector<double> sq(trials);
            for (std::size_t i = 0; i < trials; ++i) {
                sq[i] = std::norm(sums[i]);
                csv.row({static_cast<double>(i), static_cast<double>(trial_seed(seed, i)),
                         sums[i].real(), sums[i].imag(), std::abs(sums[i])});
            }
            json results;
            results["mean_sq"] = mean_se_json(mean_se(sq));
            write_summary(out, "simulate-sum", config, results, verdicts);
        } else if (tr->parsed()) {
            const StepFunction phi = tr_phi.build();
            json config{{"x", tr_x},           {"eps", tr_eps},       {"delta", tr_delta},
                        {"seed", seed},        {"trials", trials},    {"model", model_name},
                        {"phi", tr_phi.to_json()}};
            CltEnsembleConfig cfg;
            cfg.model = model;
            cfg.seed = seed;
            cfg.x = tr_x;
            cfg.eps = tr_eps;
            cfg.delta = tr_delta;
            cfg.trials = trials;
            const auto limit =
                static_cast<std::uint64_t>(std::max(1.0, phi.support_bound()) * tr_x) + 1;
            const auto e = run_clt_ensemble(shared_table(limit), phi, cfg);
            CsvWriter csv(out + ".trials.csv");
            csv.header(
                {"trial", "seed", "re_full", "im_full", "re_trunc", "im_trunc", "abs_diff"});
            std::vector<double> diff(trials);
            for (std::size_t i = 0; i < trials; ++i) {
                diff[i] = std::abs(e.s_full[i] - e.s_trunc[i]);
                csv.row({static_cast<double>(i), static_cast<double>(e.seeds[i]),
                         e.s_full[i].real(), e.s_full[i].imag(), e.s_trunc[i].real(),
                         e.s_trunc[i].imag(), diff[i]});
            }
            json results;
            results["mean_abs_discarded"] = mean_se_json(mean_se(diff));
            write_summary(out, "truncate", config, results, verdicts);
        } else if (br->parsed()) {
            const StepFunction phi = br_phi.build();
            json config{{"x", br_x},       {"eps", br_eps},    {"delta", br_delta},
                        {"t_max", br_tmax}, {"seed", seed},     {"trials", trials},
                        {"model", model_name}, {"phi", br_phi.to_json()}};
            const DickmanTable rho = DickmanTable::build();
            const auto limit =
                static_cast<std::uint64_t>(std::max(1.0, phi.support_bound()) * br_x) + 1;
            const auto rows =
                bracket_convergence_report(model, seed, shared_table(limit), phi, rho, br_eps,
                                           br_delta, {br_x}, trials, br_tmax);
            json results;
            results["x"] = rows[0].x;
            results["y_ref"] = rows[0].y_ref;
            results["c_eps_delta"] = rows[0].c_eps_delta;
            results["ks"] = rows[0].ks;
            results["ks_scaled"] = rows[0].ks_scaled;
            results["critical_scaled"] = rows[0].critical_scaled;
            write_summary(out, "bracket", config, results, verdicts);
        } else if (cm->parsed()) {
            const double cm_lo = cm_interval.at(0), cm_hi = cm_interval.at(1);
            json config{{"y", cm_y},        {"u", cm_us},      {"interval", cm_interval},
                        {"seed", seed},     {"trials", trials}, {"model", model_name}};
            const auto& table = shared_table(static_cast<std::uint64_t>(cm_y) + 1);
            std::vector<std::vector<double>> samples(cm_us.size(), std::vector<double>(trials));
            for (std::size_t ui = 0; ui < cm_us.size(); ++ui) {
                const auto params = ShiftParams::make(cm_y, cm_us[ui]);
                GridOptions gopts;
                gopts.want_log_a = false;
                gopts.want_field = false;
                gopts.want_m_normalizer = false;
                parallel_for(trials, [&](std::size_t i) {
                    // independent seed stream per u: pairwise KS stays a clean
                    // two-sample comparison
                    PhaseAssignment a(model, trial_seed(prf(seed, ui, 17), i));
                    const EulerGrid g =
                        EulerGrid::build(a, table, Twist::one, params, cm_lo, cm_hi, 0.0, gopts);
                    samples[ui][i] = measure_m_interval(g, cm_lo, cm_hi);
                });
            }
            CsvWriter csv(out + ".trials.csv");
            std::vector<std::string> cols{"trial"};
            for (double u : cm_us) cols.push_back("m_u" + fmt17(u));
            csv.header(cols);
            for (std::size_t i = 0; i < trials; ++i) {
                std::vector<double> row{static_cast<double>(i)};
                for (std::size_t ui = 0; ui < cm_us.size(); ++ui) row.push_back(samples[ui][i]);
                csv.row(row);
            }
            json results;
            const double band = self_split_null_band(samples[0], 300, prf(seed, 5, 1));
            results["null_band_scaled_95"] = band;
            json pair = json::array();
            for (std::size_t i = 0; i < cm_us.size(); ++i)
                for (std::size_t j = i + 1; j < cm_us.size(); ++j) {
                    const double d = ks_two_sample(samples[i], samples[j]);
                    const double scaled = ks_scaled(d, trials, trials);
                    pair.push_back(json{{"u1", cm_us[i]},
                                        {"u2", cm_us[j]},
                                        {"ks", d},
                                        {"ks_scaled", scaled},
                                        {"within_null_band", scaled <= band}});
                    verdicts.push_back(verdict_line(
                        scaled <= band, "chaos-measure KS(u=" + fmt17(cm_us[i]) +
                                            ", u=" + fmt17(cm_us[j]) + ") within null band"));
                }
            results["pairwise"] = pair;
            write_summary(out, "chaos-measure", config, results, verdicts);
            print_verdicts(verdicts);
        } else if (mm->parsed()) {
            json config{{"y", mm_ys},   {"u", mm_u},        {"L", mm_l},
                        {"interval", mm_interval}, {"seed", seed},     {"trials", trials},
                        {"model", model_name},     {"twist", twist_name}};
            const Twist twist = parse_twist(twist_name);
            std::uint64_t max_y = 0;
            for (double y : mm_ys) max_y = std::max(max_y, static_cast<std::uint64_t>(y));
            const auto& table = shared_table(max_y + 1);
            json rows = json::array();
            for (double y : mm_ys) {
                const auto r = modified_second_moment(model, twist, table, seed, y, mm_u, mm_l,
                                                      mm_interval.at(0), mm_interval.at(1),
                                                      trials);
                rows.push_back(
                    json{{"y", y}, {"estimate", r.estimate.mean}, {"se", r.estimate.se}});
            }
            json results;
            results["rows"] = rows;
            write_summary(out, "modified-moment", config, results, verdicts);
        } else if (cr->parsed()) {
            json config{{"y", cr_ys},  {"u1", cr_u1},      {"u2", cr_u2},
                        {"seed", seed}, {"trials", trials}, {"model", model_name}};
            std::uint64_t max_y = 0;
            for (double y : cr_ys) max_y = std::max(max_y, static_cast<std::uint64_t>(y));
            const auto& table = shared_table(max_y + 1);
            json rows = json::array();
            double prev_median = -1.0;
            bool decreasing = true;
            for (double y : cr_ys) {
                std::vector<double> t0_grid;
                for (double v = -0.5; v <= 0.5001; v += 0.125) t0_grid.push_back(v);
                std::vector<ResidualFieldSampler> samplers;
                for (double t1 : {-0.4, 0.0, 0.4})
                    for (double t2 : {-0.4, 0.0, 0.4})
                        samplers.emplace_back(table, Twist::one, y, cr_u1, cr_u2, t1, t2);
                std::vector<double> sups(trials);
                parallel_for(trials, [&](std::size_t i) {
                    PhaseAssignment a(model, trial_seed(seed, i));
                    double s = 0.0;
                    for (const auto& sampler : samplers)
                        s = std::max(s, sampler.sup_abs(a, t0_grid));
                    sups[i] = s;
                });
                const double med = quantile_of(sups, 0.5);
                if (prev_median >= 0.0 && med >= prev_median) decreasing = false;
                prev_median = med;
                rows.push_back(json{{"y", y}, {"median_sup", med}});
            }
            verdicts.push_back(
                verdict_line(decreasing, "median sup |residual field| decreasing in y"));
            json results;
            results["rows"] = rows;
            write_summary(out, "coupling-report", config, results, verdicts);
            print_verdicts(verdicts);
        } else if (vp->parsed()) {
            const StepFunction phi = vp_phi.build();
            json config{{"y", vp_y},    {"r", vp_r},          {"tol", vp_tol},
                        {"seed", seed}, {"model", model_name}, {"phi", vp_phi.to_json()}};
            const auto& table = shared_table(static_cast<std::uint64_t>(vp_y) + 1);
            PhaseAssignment a(model, seed);
            PlancherelOptions opts;
            opts.r = vp_r;
            const auto res = plancherel_check(a, table, phi, vp_y, opts);
            const bool pass =
                std::abs(res.lhs - res.rhs) <= res.rhs_tail_bound + vp_tol * std::abs(res.rhs);
            verdicts.push_back(verdict_line(pass, "|lhs - rhs| <= tail slack + tol * |rhs|"));
            json results;
            results["lhs"] = res.lhs;
            results["rhs"] = res.rhs;
            results["rhs_tail_bound"] = res.rhs_tail_bound;
            results["lhs_tail_estimate"] = res.lhs_tail_estimate;
            results["rhs_t_used"] = res.rhs_t_used;
            results["lhs_t_used"] = res.lhs_t_used;
            write_summary(out, "verify-plancherel", config, results, verdicts);
            print_verdicts(verdicts);
        } else if (dk->parsed()) {
            json config{{"check", dk_check}, {"eps", dk_eps}};
            const DickmanTable rho = DickmanTable::build();
            json results;
            results["rho_2_error"] = rho.rho(2.0) - (1.0 - std::log(2.0));
            json lap = json::array();
            for (double t : {0.0, 1.0, 2.0})
                lap.push_back(json{{"t", t},
                                   {"table_side", rho.laplace_table_side(t)},
                                   {"formula_side", dickman_laplace(t)}});
            results["laplace"] = lap;
            if (dk_check) {
                CsvWriter csv(out + ".trials.csv");
                csv.header({"checkpoint", "t", "delay_residual"});
                double max_resid = 0.0;
                for (int i = 0; i < 100; ++i) {
                    const double t = 1.0 + (rho.v_max() - 1.0) * u01(prf(99, i, 0));
                    const double r = rho.delay_residual(t);
                    max_resid = std::max(max_resid, std::abs(r));
                    csv.row({static_cast<double>(i), t, r});
                }
                results["max_delay_residual"] = max_resid;
                std::vector<std::pair<double, double>> pts;
                for (double d : {0.02, 0.01, 0.005})
                    pts.emplace_back(d, bracket_constant_sum(rho, dk_eps, d));
                const double extrap = richardson_extrapolate(pts);
                const double target = 1.0 - rho.rho(1.0 / dk_eps);
                results["c_eps_extrapolated"] = extrap;
                results["c_eps_target"] = target;
                verdicts.push_back(verdict_line(std::abs(max_resid) < 1e-9,
                                                "delay residual < 1e-9 at 100 checkpoints"));
                verdicts.push_back(verdict_line(std::abs(extrap - target) < 1e-3,
                                                "lim_{delta->0} C_{eps,delta} = 1 - rho(1/eps)"));
            }
            write_summary(out, "dickman", config, results, verdicts);
            print_verdicts(verdicts);
        } else if (ts->parsed()) {
            json config{{"y", ts_y}, {"t", ts_ts}};
            json rows = json::array();
            for (double t : ts_ts) {
                const auto r = tshift_ratio(ts_y, t);
                rows.push_back(json{{"t", t},
                                    {"empirical", r.empirical},
                                    {"predicted", r.predicted},
                                    {"ratio", r.ratio}});
            }
            json results;
            results["rows"] = rows;
            write_summary(out, "tshift", config, results, verdicts);
        } else if (cd->parsed()) {
            json config{{"y", cd_y},   {"u1", cd_u1},      {"u2", cd_u2},
                        {"seed", seed}, {"trials", trials}, {"model", model_name}};
            const auto& table = shared_table(static_cast<std::uint64_t>(cd_y) + 1);
            const auto res = chaining_dominance(model, seed, table, cd_y, cd_u1, cd_u2, trials);
            json rows = json::array();
            for (const auto& r : res.rows)
                rows.push_back(json{{"x", r.x},
                                    {"empirical_tail", r.empirical_tail},
                                    {"chaining_bound", r.bound}});
            verdicts.push_back(
                verdict_line(res.dominated, "chaining tail dominates the MC sup tail"));
            json results;
            results["gamma1"] = res.gamma1;
            results["gamma2"] = res.gamma2;
            results["rows"] = rows;
            write_summary(out, "chaining-demo", config, results, verdicts);
            print_verdicts(verdicts);
        } else if (an->parsed()) {
            json config{{"x", an_x}, {"y", an_y}, {"z", an_z}, {"window", an_window}};
            const auto& table = shared_table(static_cast<std::uint64_t>(an_x * 1.25) + 16);
            const double h = an_window > 0.0 ? an_window : std::max(an_x / 16.0, an_y * an_z);
            json results;
            results["psi_x_y"] = table.count_smooth(an_x, an_y);
            results["mertens_sum"] = table.mertens_prime_sum(an_x);
            results["mertens_minus_loglog"] =
                table.mertens_prime_sum(an_x) - std::log(std::log(an_x));
            results["rough_smooth_window_count"] =
                table.count_rough_smooth_interval(an_x, an_x + h, an_y, an_z);
            results["window"] = h;
            write_summary(out, "anatomy", config, results, verdicts);
        } else if (mt->parsed()) {
            json config{{"x", mt_xs},  {"q", mt_q},        {"seed", seed},
                        {"trials", trials}, {"model", model_name}};
            double x_max = 0.0;
            for (double x : mt_xs) x_max = std::max(x_max, x);
            const auto rows = moment_trend(
                model, seed, shared_table(static_cast<std::uint64_t>(x_max) + 1), mt_xs, mt_q,
                trials);
            CsvWriter csv(out + ".trials.csv");
            csv.header({"x", "mean", "se", "predicted", "ratio", "trials"});
            json jrows = json::array();
            for (const auto& r : rows) {
                csv.row({r.x, r.mean, r.se, r.predicted, r.ratio, static_cast<double>(r.trials)});
                jrows.push_back(json{{"x", r.x},
                                     {"mean", r.mean},
                                     {"se", r.se},
                                     {"predicted", r.predicted},
                                     {"ratio", r.ratio}});
            }
            json results;
            results["rows"] = jrows;
            write_summary(out, "moment-trend", config, results, verdicts);
        } else if (lt->parsed()) {
            json config{{"x", lt_xs},       {"eps", lt_eps},   {"delta", lt_delta},
                        {"t_max", lt_tmax}, {"y_ref", lt_yref}, {"seed", seed},
                        {"trials", trials}, {"model", model_name}};
            const StepFunction phi = StepFunction::unit_indicator();
            const DickmanTable rho = DickmanTable::build();
            const double c_ed = bracket_constant_sum(rho, lt_eps, lt_delta);
            double x_max = 0.0;
            for (double x : lt_xs) x_max = std::max(x_max, x);
            const auto& table = shared_table(static_cast<std::uint64_t>(x_max) + 1);
            json jrows = json::array();
            double prev_ks = -1.0;
            bool decreasing = true;
            for (double x : lt_xs) {
                CltEnsembleConfig cfg;
                cfg.model = model;
                cfg.seed = prf(seed, static_cast<std::uint64_t>(x), 51);
                cfg.x = x;
                cfg.eps = lt_eps;
                cfg.delta = lt_delta;
                cfg.trials = trials;
                cfg.y_ref = lt_yref;
                cfg.vproxy_t_max = lt_tmax;
                const auto e = run_clt_ensemble(table, phi, cfg);
                const auto v =
                    v_proxy_ensemble(model, prf(seed, static_cast<std::uint64_t>(x), 52), table,
                                     phi, e.config.y_ref, trials, lt_tmax);
                const auto ref =
                    gaussian_reference(v, c_ed, prf(seed, static_cast<std::uint64_t>(x), 53));
                const auto res = limit_distribution_test(
                    e.s_trunc, ref, prf(seed, static_cast<std::uint64_t>(x), 54));
                if (prev_ks >= 0.0 && res.ks_abs >= prev_ks) decreasing = false;
                prev_ks = res.ks_abs;
                jrows.push_back(json{{"x", x},
                                     {"y_ref", e.config.y_ref},
                                     {"ks_abs", res.ks_abs},
                                     {"ks_abs_boot_lo", res.boot_abs.lo},
                                     {"ks_abs_boot_hi", res.boot_abs.hi},
                                     {"ks_re", res.ks_re},
                                     {"rotation_ks_scaled", res.rotation_ks_scaled},
                                     {"rotation_null_scaled", res.rotation_null_scaled}});
            }
            verdicts.push_back(verdict_line(decreasing, "KS(|S|) decreasing across x"));
            json results;
            results["c_eps_delta"] = c_ed;
            results["rows"] = jrows;
            write_summary(out, "limit-test", config, results, verdicts);
            print_verdicts(verdicts);
        }
    } catch (const std::exception& e) {
        json err;
        err["error"] = e.what();
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}
