#include "glbfed/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <variant>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "glbfed/analysis.hpp"
#include "glbfed/exact.hpp"
#include "glbfed/fluid.hpp"
#include "glbfed/params.hpp"
#include "glbfed/rng.hpp"
#include "glbfed/simulator.hpp"

namespace glbfed {

namespace {

constexpr const char* kCsvVersion = "# glbfed-csv v1\n";

// key=value defaults appended as --key=value tokens; keys already given as
// flags are left alone, so flags override the file
void append_config_defaults(std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return;
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot read config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const std::string t = CLI::detail::trim_copy(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ValidationError(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string flag = "--" + CLI::detail::trim_copy(t.substr(0, eq));
        bool given = false;
        for (const auto& a : args) given = given || a == flag || a.rfind(flag + "=", 0) == 0;
        if (!given) args.push_back(flag + "=" + CLI::detail::trim_copy(t.substr(eq + 1)));
    }
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct CommonFlags {
    double lambda = 0.0;
    double mu = 1.0;
    double nu_s = 0.01;
    double nu_c = 0.01;
    int n = 1;
};

struct SimFlags {
    double t_end = 0.0;
    double warmup = -1.0;
    int reps = 20;
    std::uint64_t seed = 1;
};

struct ModFlags {
    bool modulated = false;
    double nu_g = 1e-5;
    double nu_b = 1e-5;
    double nu_sg = 0.0015;
    double nu_cg = 0.0005;
    double nu_sb = 0.0005;
    double nu_cb = 0.0015;
};

void add_rate_flags(CLI::App* cmd, CommonFlags& f, bool lambda_required) {
    auto* lam = cmd->add_option("--lambda", f.lambda, "per-datacenter arrival rate");
    if (lambda_required) lam->required();
    cmd->add_option("--mu", f.mu, "service rate");
    cmd->add_option("--nu-s", f.nu_s, "cloudy->sunny rate");
    cmd->add_option("--nu-c", f.nu_c, "sunny->cloudy rate");
}

void add_sim_flags(CLI::App* cmd, SimFlags& f) {
    cmd->add_option("--t-end", f.t_end, "horizon (0: 100x warmup)");
    cmd->add_option("--warmup", f.warmup, "time excluded from averages (<0: auto)");
    cmd->add_option("--reps", f.reps, "independent replications");
    cmd->add_option("--seed", f.seed, "RNG seed")->envname("GLBFED_SEED");
}

void add_mod_flags(CLI::App* cmd, ModFlags& f) {
    cmd->add_flag("--modulated", f.modulated, "common two-state weather modulator");
    cmd->add_option("--nu-g", f.nu_g, "modulator B->G rate");
    cmd->add_option("--nu-b", f.nu_b, "modulator G->B rate");
    cmd->add_option("--nu-sg", f.nu_sg, "cloudy->sunny rate in good weather");
    cmd->add_option("--nu-cg", f.nu_cg, "sunny->cloudy rate in good weather");
    cmd->add_option("--nu-sb", f.nu_sb, "cloudy->sunny rate in bad weather");
    cmd->add_option("--nu-cb", f.nu_cb, "sunny->cloudy rate in bad weather");
}

void write_simulate_header(std::ostream& out, bool weighted) {
    out << "n,rho,mean_bs_frac,ci,mean_s_frac,mean_j_frac";
    if (weighted) out << ",weighted_bs_frac,weighted_ci";
    out << ",events\n";
}

void write_simulate_row(std::ostream& out, int n, double rho, const sim::StationaryEstimate& est,
                        bool weighted) {
    out << n << ',' << fmt(rho) << ',' << fmt(est.mean_bs_frac) << ',' << fmt(est.ci_halfwidth_bs)
        << ',' << fmt(est.mean_s_frac) << ',' << fmt(est.mean_j_frac);
    if (weighted) out << ',' << fmt(est.weighted_bs_frac) << ',' << fmt(est.ci_halfwidth_weighted_bs);
    out << ',' << est.events << '\n';
}

// ---- fluid ----------------------------------------------------------------

struct FluidArgs {
    CommonFlags rates;
    double t_end = 0.0;
    double dt = 0.0;
    double out_dt = -1.0;
    double j0 = 0.0, s0 = 0.0, bs0 = 0.0;
};

void run_fluid(const FluidArgs& a, std::ostream& out) {
    const FederationParams p(a.rates.lambda, a.rates.mu, a.rates.nu_s, a.rates.nu_c);
    const double t_end =
        a.t_end > 0.0 ? a.t_end : 50.0 * std::max(1.0 / p.mu, 1.0 / (p.nu_s + p.nu_c));
    const double dt = a.dt > 0.0 ? a.dt : fluid::default_dt(p);
    const double record_dt = a.out_dt >= 0.0 ? a.out_dt : t_end / 1000.0;
    const auto traj = fluid::integrate({a.j0, a.s0, a.bs0}, p, t_end, dt, record_dt);
    const auto fp = fluid::fixed_point(p);

    out << kCsvVersion << "t,j,s,b_s\n";
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        out << fmt(traj.t[i]) << ',' << fmt(traj.x[i].j) << ',' << fmt(traj.x[i].s) << ','
            << fmt(traj.x[i].b_s) << '\n';
    }
    out << "# fixed_point," << fmt(fp.j_star) << ',' << fmt(fp.s_star) << ',' << fmt(fp.b_s_star)
        << ',' << fluid::regime_name(fp.regime) << '\n';
}

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
    CommonFlags rates;
    SimFlags simf;
    ModFlags mod;
    std::vector<double> init; // empty or (j, s, bs) counts
};

using ParamsVariant = std::variant<FederationParams, ModulatedParams>;

sim::SimConfig make_sim_config(const SimulateArgs& a, int n) {
    ParamsVariant v =
        a.mod.modulated
            ? ParamsVariant(ModulatedParams(a.rates.lambda, a.rates.mu, a.mod.nu_g, a.mod.nu_b,
                                            a.mod.nu_sg, a.mod.nu_cg, a.mod.nu_sb, a.mod.nu_cb, n))
            : ParamsVariant(FederationParams(a.rates.lambda, a.rates.mu, a.rates.nu_s,
                                             a.rates.nu_c, n));
    sim::SimConfig cfg{std::move(v)};
    cfg.t_end = a.simf.t_end;
    cfg.warmup = a.simf.warmup;
    cfg.replications = a.simf.reps;
    cfg.seed = a.simf.seed;
    if (!a.init.empty()) {
        if (a.init.size() != 3) throw ValidationError("--init takes J,S,B_S");
        cfg.initial_state = SystemState{static_cast<std::int64_t>(std::llround(a.init[0])),
                                        static_cast<int>(std::lround(a.init[1])),
                                        static_cast<int>(std::lround(a.init[2]))};
    }
    return cfg;
}

void run_simulate(const SimulateArgs& a, int n, std::ostream& out) {
    const sim::SimConfig cfg = make_sim_config(a, n);
    const auto est = sim::estimate_stationary(cfg);
    const double rho = a.rates.lambda / a.rates.mu;
    out << kCsvVersion;
    write_simulate_header(out, a.mod.modulated);
    write_simulate_row(out, n, rho, est, a.mod.modulated);
}

// ---- exact -----------------------------------------------------------------

struct ExactArgs {
    CommonFlags rates;
    int queue_cap = -1;
};

void run_exact(const ExactArgs& a, int n, std::ostream& out) {
    const FederationParams p(a.rates.lambda, a.rates.mu, a.rates.nu_s, a.rates.nu_c, n);
    const int cap = a.queue_cap >= 0 ? a.queue_cap : exact::default_queue_cap(p);
    const auto chain = exact::build(p, cap);
    const auto pi = exact::stationary(chain);
    out << kCsvVersion << "n,queue_cap,expected_bs_frac,residual\n";
    out << n << ',' << cap << ',' << fmt(exact::expected_bs_frac(chain, pi)) << ','
        << fmt(exact::residual_inf(chain, pi)) << '\n';
}

// ---- sweep -----------------------------------------------------------------

struct SweepArgs {
    std::string param;
    std::string engine;
    double from = 0.0;
    double to = 0.0;
    int steps = 0;
    bool log_grid = false;
    bool have_lambda = false;
    bool have_n = false;
    CommonFlags rates;
    SimFlags simf;
    int queue_cap = -1;
    double rate_sum = 0.002;
    double nu_g = 1e-5;
    double nu_b = 1e-5;
};

std::vector<double> make_grid(double from, double to, int steps, bool log_grid) {
    if (steps < 1) throw ValidationError("--steps must be >= 1");
    if (steps == 1) return {from};
    if (log_grid && (from <= 0.0 || to <= 0.0))
        throw ValidationError("--log grid needs positive endpoints");
    std::vector<double> grid(steps);
    for (int i = 0; i < steps; ++i) {
        const double f = static_cast<double>(i) / (steps - 1);
        grid[i] = log_grid ? from * std::pow(to / from, f) : from + f * (to - from);
    }
    return grid;
}

FederationParams ratio_params(const SweepArgs& a, double ratio, int n) {
    // rescale the renewable clock while keeping s* from the base rates
    const double s0 = a.rates.nu_s / (a.rates.nu_s + a.rates.nu_c);
    return FederationParams(a.rates.lambda, a.rates.mu, s0 * ratio * a.rates.mu,
                            (1.0 - s0) * ratio * a.rates.mu, n);
}

void run_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
    const auto grid = make_grid(a.from, a.to, a.steps, a.log_grid);
    const bool is_sim = a.engine == "sim";
    const bool is_exact = a.engine == "exact";

    if (a.param != "rho" && !a.have_lambda)
        throw ValidationError("--lambda is required unless sweeping rho");
    if ((is_sim || is_exact) && a.param != "n" && !a.have_n)
        throw ValidationError("--n is required for sim/exact engines");
    if (a.param == "eta" && is_exact)
        throw ValidationError("eta sweeps support engines fluid and sim only");
    if (a.param == "n" && !(is_sim || is_exact))
        throw ValidationError("n sweeps require engine sim or exact");

    out << kCsvVersion;
    const bool weighted = a.param == "eta" && is_sim;
    if (is_sim) {
        out << a.param << ',';
        write_simulate_header(out, weighted);
    } else if (is_exact) {
        out << a.param << ",n,queue_cap,expected_bs_frac,residual\n";
    } else if (a.param == "eta") {
        out << "eta,j_star,s_star,b_s_star,c_f,c_nf,relative_reduction\n";
    } else {
        out << a.param << ",j_star,s_star,b_s_star,regime,c_f,c_nf,relative_reduction\n";
    }

    bool warned_modulation = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = grid[i];
        int n = a.rates.n;
        FederationParams base(1e-3, 1.0, 0.01, 0.01); // placeholder, set per param below
        std::optional<ModulatedParams> mod;
        double rho = a.rates.lambda / a.rates.mu;
        switch (a.param[0]) {
            case 'r': // rho
                base = FederationParams(v * a.rates.mu, a.rates.mu, a.rates.nu_s, a.rates.nu_c,
                                        std::max(n, 1));
                rho = v;
                break;
            case 'n': // nu-ratio or n
                if (a.param == "n") {
                    n = static_cast<int>(std::llround(v));
                    base = FederationParams(a.rates.lambda, a.rates.mu, a.rates.nu_s, a.rates.nu_c,
                                            n);
                } else {
                    base = ratio_params(a, v, std::max(n, 1));
                }
                break;
            case 'e': // eta
                mod = analysis::correlated_sweep_params(v, rho, a.rates.mu, a.rate_sum, a.nu_g,
                                                        a.nu_b, std::max(n, 1));
                if (!warned_modulation && analysis::slow_modulation_ratio(*mod) > 0.01) {
                    err << "# warning: modulator is not well separated from the other rates; "
                           "the weighted-sum approximation may be off\n";
                    warned_modulation = true;
                }
                break;
            default:
                throw ValidationError("unknown sweep parameter: " + a.param);
        }

        if (is_sim) {
            sim::SimConfig cfg{mod ? ParamsVariant(*mod) : ParamsVariant(base)};
            cfg.t_end = a.simf.t_end;
            cfg.warmup = a.simf.warmup;
            cfg.replications = a.simf.reps;
            cfg.seed = derive_seed(a.simf.seed, i);
            const auto est = sim::estimate_stationary(cfg);
            out << fmt(v) << ',';
            write_simulate_row(out, mod ? mod->n : base.n, mod ? mod->rho() : base.rho(), est,
                               weighted);
        } else if (is_exact) {
            const int cap = a.queue_cap >= 0 ? a.queue_cap : exact::default_queue_cap(base);
            const auto chain = exact::build(base, cap);
            const auto pi = exact::stationary(chain);
            out << fmt(v) << ',' << base.n << ',' << cap << ','
                << fmt(exact::expected_bs_frac(chain, pi)) << ','
                << fmt(exact::residual_inf(chain, pi)) << '\n';
        } else if (mod) {
            const auto cr = analysis::modulated_costs(*mod);
            out << fmt(v) << ',' << fmt(cr.rho) << ',' << fmt(cr.s_star) << ','
                << fmt(cr.b_s_star) << ',' << fmt(cr.c_f) << ',' << fmt(cr.c_nf) << ','
                << fmt(cr.relative_reduction) << '\n';
        } else {
            const auto fp = fluid::fixed_point(base);
            const auto cr = analysis::costs(base);
            out << fmt(v) << ',' << fmt(fp.j_star) << ',' << fmt(fp.s_star) << ','
                << fmt(fp.b_s_star) << ',' << fluid::regime_name(fp.regime) << ',' << fmt(cr.c_f)
                << ',' << fmt(cr.c_nf) << ',' << fmt(cr.relative_reduction) << '\n';
        }
    }
}

// ---- figure ----------------------------------------------------------------

struct FigureArgs {
    std::string name;
    std::string out_dir;
    SimFlags simf{.t_end = 0.0, .warmup = -1.0, .reps = 20, .seed = 1};
    bool gnuplot = false;
    bool simulate = false;
    int sim_n = 200;
};

std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw ValidationError("cannot write " + path.string());
    f << kCsvVersion;
    return f;
}

void write_gnuplot(const std::filesystem::path& dir, const std::string& name,
                   const std::string& body) {
    std::ofstream g(dir / (name + ".gp"));
    g << "set datafile separator ','\nset key left\n" << body;
}

void run_figure(const FigureArgs& a, std::ostream&, std::ostream& err) {
    const std::filesystem::path dir(a.out_dir);
    std::filesystem::create_directories(dir);

    if (a.name == "fig2") {
        const double t_end = a.simf.t_end > 0.0 ? a.simf.t_end : 20000.0;
        const int ns[3] = {20, 100, 500};
        auto f = open_csv(dir / "fig2.csv");
        f << "rho,b_s_star,sim_mean_n20,ci20,sim_mean_n100,ci100,sim_mean_n500,ci500\n";
        for (int ri = 0; ri < 9; ++ri) {
            const double rho = 0.1 * (ri + 1);
            const FederationParams fp_params(rho, 1.0, 0.01, 0.01);
            f << fmt(rho) << ',' << fmt(fluid::fixed_point(fp_params).b_s_star);
            for (int ki = 0; ki < 3; ++ki) {
                sim::SimConfig cfg{FederationParams(rho, 1.0, 0.01, 0.01, ns[ki])};
                cfg.t_end = t_end;
                cfg.warmup = a.simf.warmup;
                cfg.replications = a.simf.reps;
                cfg.seed = derive_seed(a.simf.seed, 100 + ri * 10 + ki);
                const auto est = sim::estimate_stationary(cfg);
                f << ',' << fmt(est.mean_bs_frac) << ',' << fmt(est.ci_halfwidth_bs);
            }
            f << '\n';
        }
        err << "wrote " << (dir / "fig2.csv").string() << "\n";
        if (a.gnuplot)
            write_gnuplot(dir, "fig2",
                          "plot 'fig2.csv' using 1:2 with lines title 'b_s*', "
                          "'' using 1:3 with points title 'N=20', "
                          "'' using 1:5 with points title 'N=100', "
                          "'' using 1:7 with points title 'N=500'\n");
    } else if (a.name == "fig3") {
        auto f = open_csv(dir / "fig3.csv");
        f << "ratio,reduction_rho_0.5,reduction_rho_0.65\n";
        const auto grid = make_grid(1e-3, 1e3, 25, true);
        for (double r : grid) {
            const FederationParams p5(0.5, 1.0, 0.5 * r, 0.5 * r);
            const FederationParams p65(0.65, 1.0, 0.5 * r, 0.5 * r);
            f << fmt(r) << ',' << fmt(analysis::costs(p5).relative_reduction) << ','
              << fmt(analysis::costs(p65).relative_reduction) << '\n';
        }
        err << "wrote " << (dir / "fig3.csv").string() << "\n";
        if (a.gnuplot)
            write_gnuplot(dir, "fig3",
                          "set logscale x\nplot 'fig3.csv' using 1:2 with lines title 'rho=0.5', "
                          "'' using 1:3 with lines title 'rho=0.65'\n");
    } else if (a.name == "fig4") {
        auto f = open_csv(dir / "fig4.csv");
        f << "eta,reduction_rho_0.35,reduction_rho_0.5,reduction_rho_0.65";
        if (a.simulate)
            f << ",sim_reduction_rho_0.35,sim_reduction_rho_0.5,sim_reduction_rho_0.65";
        f << '\n';
        const double rhos[3] = {0.35, 0.5, 0.65};
        bool warned = false;
        for (int i = 0; i <= 20; ++i) {
            const double e = 0.05 * i;
            f << fmt(e);
            for (double rho : rhos) {
                const auto mp = analysis::correlated_sweep_params(e, rho);
                if (!warned && analysis::slow_modulation_ratio(mp) > 0.01) {
                    err << "# warning: modulator is not well separated from the other rates; "
                           "the weighted-sum approximation may be off\n";
                    warned = true;
                }
                f << ',' << fmt(analysis::modulated_costs(mp).relative_reduction);
            }
            if (a.simulate) {
                if (i % 5 == 0) {
                    for (int k = 0; k < 3; ++k) {
                        const auto mp =
                            analysis::correlated_sweep_params(e, rhos[k], 1.0, 0.002, 1e-5, 1e-5,
                                                              a.sim_n);
                        sim::SimConfig cfg{mp};
                        cfg.t_end = a.simf.t_end > 0.0 ? a.simf.t_end : 1e6;
                        cfg.warmup = a.simf.warmup >= 0.0 ? a.simf.warmup : 2e4;
                        cfg.replications = a.simf.reps > 0 ? std::min(a.simf.reps, 4) : 4;
                        cfg.seed = derive_seed(a.simf.seed, 400 + i * 8 + k);
                        const auto est = sim::estimate_stationary(cfg);
                        const auto cr = analysis::modulated_costs(mp);
                        const double c_f = mp.rho() - est.weighted_bs_frac;
                        f << ',' << fmt(cr.c_nf == 0.0 ? 1.0 : (cr.c_nf - c_f) / cr.c_nf);
                    }
                } else {
                    f << ",,,";
                }
            }
            f << '\n';
        }
        err << "wrote " << (dir / "fig4.csv").string() << "\n";
        if (a.gnuplot)
            write_gnuplot(dir, "fig4",
                          "plot 'fig4.csv' using 1:2 with lines title 'rho=0.35', "
                          "'' using 1:3 with lines title 'rho=0.5', "
                          "'' using 1:4 with lines title 'rho=0.65'\n");
    } else {
        throw ValidationError("unknown figure: " + a.name + " (expected fig2, fig3, or fig4)");
    }
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"federated micro-datacenter scheduling: simulator, exact solver, fluid engine"};
    if (argc > 0) app.name(argv[0]);
    app.require_subcommand(1);
    std::string config_path; // read by append_config_defaults before parsing
    const auto add_config_flag = [&config_path](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key=value defaults file (flags override)");
    };

    FluidArgs fl;
    auto* cmd_fluid = app.add_subcommand("fluid", "integrate the fluid trajectory");
    add_config_flag(cmd_fluid);
    add_rate_flags(cmd_fluid, fl.rates, true);
    cmd_fluid->add_option("--t-end", fl.t_end, "horizon (0: auto)");
    cmd_fluid->add_option("--dt", fl.dt, "Euler step (0: auto)");
    cmd_fluid->add_option("--out-dt", fl.out_dt, "output spacing (0: every step)");
    cmd_fluid->add_option("--j0", fl.j0, "initial j");
    cmd_fluid->add_option("--s0", fl.s0, "initial s");
    cmd_fluid->add_option("--bs0", fl.bs0, "initial b_s");

    SimulateArgs sa;
    auto* cmd_sim = app.add_subcommand("simulate", "stationary estimate from the event simulator");
    add_config_flag(cmd_sim);
    add_rate_flags(cmd_sim, sa.rates, true);
    cmd_sim->add_option("--n", sa.rates.n, "number of datacenters")->required();
    add_sim_flags(cmd_sim, sa.simf);
    add_mod_flags(cmd_sim, sa.mod);
    cmd_sim->add_option("--init", sa.init, "initial state J,S,B_S")->expected(3)->delimiter(',');

    ExactArgs ea;
    auto* cmd_exact = app.add_subcommand("exact", "stationary distribution of the truncated chain");
    add_config_flag(cmd_exact);
    add_rate_flags(cmd_exact, ea.rates, true);
    cmd_exact->add_option("--n", ea.rates.n, "number of datacenters")->required();
    cmd_exact->add_option("--queue-cap", ea.queue_cap, "queue truncation (<0: auto)");

    SweepArgs sw;
    auto* cmd_sweep = app.add_subcommand("sweep", "grid sweep of one parameter");
    add_config_flag(cmd_sweep);
    cmd_sweep->add_option("--param", sw.param, "rho | nu-ratio | eta | n")
        ->required()
        ->check(CLI::IsMember({"rho", "nu-ratio", "eta", "n"}));
    cmd_sweep->add_option("--engine", sw.engine, "fluid | sim | exact")
        ->required()
        ->check(CLI::IsMember({"fluid", "sim", "exact"}));
    cmd_sweep->add_option("--from", sw.from, "grid start")->required();
    cmd_sweep->add_option("--to", sw.to, "grid end")->required();
    cmd_sweep->add_option("--steps", sw.steps, "number of grid points")->required();
    cmd_sweep->add_flag("--log", sw.log_grid, "geometric grid");
    auto* sw_lambda = cmd_sweep->add_option("--lambda", sw.rates.lambda, "per-datacenter arrival rate");
    cmd_sweep->add_option("--mu", sw.rates.mu, "service rate");
    cmd_sweep->add_option("--nu-s", sw.rates.nu_s, "cloudy->sunny rate");
    cmd_sweep->add_option("--nu-c", sw.rates.nu_c, "sunny->cloudy rate");
    auto* sw_n = cmd_sweep->add_option("--n", sw.rates.n, "number of datacenters");
    add_sim_flags(cmd_sweep, sw.simf);
    cmd_sweep->add_option("--queue-cap", sw.queue_cap, "queue truncation (<0: auto)");
    cmd_sweep->add_option("--rate-sum", sw.rate_sum, "per-state renewable rate sum (eta sweeps)");
    cmd_sweep->add_option("--nu-g", sw.nu_g, "modulator B->G rate (eta sweeps)");
    cmd_sweep->add_option("--nu-b", sw.nu_b, "modulator G->B rate (eta sweeps)");

    FigureArgs fig;
    auto* cmd_fig = app.add_subcommand("figure", "reproduce a figure dataset");
    add_config_flag(cmd_fig);
    cmd_fig->add_option("name", fig.name, "fig2 | fig3 | fig4")->required();
    cmd_fig->add_option("--out", fig.out_dir, "output directory")->required();
    cmd_fig->add_option("--t-end", fig.simf.t_end, "simulation horizon override");
    cmd_fig->add_option("--warmup", fig.simf.warmup, "warmup override");
    cmd_fig->add_option("--reps", fig.simf.reps, "replications");
    cmd_fig->add_option("--seed", fig.simf.seed, "RNG seed")->envname("GLBFED_SEED");
    cmd_fig->add_flag("--gnuplot", fig.gnuplot, "also write a plot script");
    cmd_fig->add_flag("--simulate", fig.simulate, "fig4: add modulated-simulation columns");
    cmd_fig->add_option("--n", fig.sim_n, "fig4: fleet size for --simulate");

    try {
        std::vector<std::string> args;
        for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
        append_config_defaults(args);
        std::reverse(args.begin(), args.end()); // CLI11's vector overload wants reversed args
        app.parse(std::move(args));
        if (cmd_fluid->parsed()) run_fluid(fl, out);
        if (cmd_sim->parsed()) run_simulate(sa, sa.rates.n, out);
        if (cmd_exact->parsed()) run_exact(ea, ea.rates.n, out);
        if (cmd_sweep->parsed()) {
            sw.have_lambda = sw_lambda->count() > 0;
            sw.have_n = sw_n->count() > 0;
            run_sweep(sw, out, err);
        }
        if (cmd_fig->parsed()) run_figure(fig, out, err);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const HorizonTooShortError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const StateSpaceTooLargeError& e) {
        err << "error: " << e.what() << "\n";
        return 4;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace glbfed
