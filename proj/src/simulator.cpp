#include "glbfed/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "glbfed/stats.hpp"

namespace glbfed {
namespace sim {

namespace {

template <bool Modulated>
struct Dyn {
    int n;
    double mu;
    double n_lambda;
    double nus[2];
    double nuc[2];
    double leave[2]; // rate of leaving the current modulator state
    double pi_g;
};

Dyn<false> make_dyn(const FederationParams& p) {
    Dyn<false> d{};
    d.n = p.n;
    d.mu = p.mu;
    d.n_lambda = static_cast<double>(p.n) * p.lambda;
    d.nus[0] = p.nu_s;
    d.nuc[0] = p.nu_c;
    return d;
}

Dyn<true> make_dyn(const ModulatedParams& p) {
    Dyn<true> d{};
    d.n = p.n;
    d.mu = p.mu;
    d.n_lambda = static_cast<double>(p.n) * p.lambda;
    d.nus[0] = p.nu_sg;
    d.nuc[0] = p.nu_cg;
    d.nus[1] = p.nu_sb;
    d.nuc[1] = p.nu_cb;
    d.leave[0] = p.nu_b;
    d.leave[1] = p.nu_g;
    d.pi_g = p.pi_g();
    return d;
}

// One exponential race. Applies exactly one transition in place and returns
// the holding time. The subtraction cascade can leave rounding dust past the
// last positive rate (~2^-52 of the mass); the fallback applies an arrival,
// which is legal in every state.
template <bool Modulated>
inline double advance(const Dyn<Modulated>& d, std::int64_t& J, int& S, int& B, int& w, Rng& rng) {
    const std::int64_t busy = std::min<std::int64_t>(J, d.n);
    const double r_ds = d.mu * static_cast<double>(B);
    const double r_dc = d.mu * static_cast<double>(busy - B);
    const double r_sc = d.nuc[w] * static_cast<double>(S);
    const double r_cs = d.nus[w] * static_cast<double>(d.n - S);
    double total = d.n_lambda + r_ds + r_dc + r_sc + r_cs;
    if constexpr (Modulated) total += d.leave[w];
    const double h = rng.exponential(total);

    double u = rng.uniform() * total;
    if ((u -= d.n_lambda) < 0.0) {
        if (S > B) ++B; // a sunny idle server outranks every cloudy one
        ++J;
        return h;
    }
    if ((u -= r_ds) < 0.0) {
        if (J <= d.n) --B; // with a queue the freed server re-seizes instead
        --J;
        return h;
    }
    if ((u -= r_dc) < 0.0) {
        --J;
        return h;
    }
    if ((u -= r_sc) < 0.0) {
        if (rng.uniform() * static_cast<double>(S) < static_cast<double>(B)) --B;
        --S;
        return h;
    }
    if constexpr (Modulated) {
        if ((u -= r_cs) < 0.0) {
            if (rng.uniform() * static_cast<double>(d.n - S) < static_cast<double>(busy - B)) ++B;
            ++S;
            return h;
        }
        if (d.leave[w] > 0.0) {
            w ^= 1;
            return h;
        }
    } else {
        if (r_cs > 0.0) {
            if (rng.uniform() * static_cast<double>(d.n - S) < static_cast<double>(busy - B)) ++B;
            ++S;
            return h;
        }
    }
    if (S > B) ++B;
    ++J;
    return h;
}

template <bool Modulated>
SystemState draw_initial(const Dyn<Modulated>& d, double rho, double s_star, Rng& rng) {
    const std::int64_t jobs = std::llround(rho * d.n);
    int sunny = 0;
    for (int i = 0; i < d.n; ++i) sunny += rng.uniform() < s_star ? 1 : 0;
    const std::int64_t busy = std::min<std::int64_t>(jobs, d.n);
    const int busy_sunny = static_cast<int>(std::min<std::int64_t>(sunny, busy));
    return {jobs, sunny, busy_sunny};
}

struct RepResult {
    double bs;
    double s;
    double j;
    double busy;
    double weighted_bs;
    std::uint64_t events;
};

struct ResolvedConfig {
    double t_end;
    double warmup;
    int replications;
    std::uint64_t seed;
    std::optional<SystemState> initial_state;
};

template <bool Modulated, typename Params>
RepResult run_replication(const Params& p, const ResolvedConfig& rc, std::uint64_t stream) {
    const Dyn<Modulated> d = make_dyn(p);
    Rng rng(rc.seed, stream);

    int w = 0;
    if constexpr (Modulated) w = rng.uniform() < d.pi_g ? 0 : 1;

    SystemState init;
    if (rc.initial_state) {
        init = *rc.initial_state;
    } else {
        const double s_star = d.nus[w] / (d.nus[w] + d.nuc[w]);
        init = draw_initial(d, p.rho(), s_star, rng);
    }

    std::int64_t J = init.jobs;
    int S = init.sunny;
    int B = init.busy_sunny;

    const double t_end = rc.t_end;
    const double warmup = rc.warmup;
    double t = 0.0;
    double int_bs = 0.0, int_s = 0.0, int_j = 0.0, int_busy = 0.0;
    double t_g = 0.0, int_bs_g = 0.0;
    std::uint64_t events = 0;

    while (true) {
        const std::int64_t J0 = J;
        const int S0 = S, B0 = B, w0 = w;
        const double h = advance(d, J, S, B, w, rng);
        assert(is_valid_state({J, S, B}, d.n));
        const double tn = t + h;
        const double hi = std::min(tn, t_end);
        if (hi > warmup) {
            const double wdt = hi - std::max(t, warmup);
            const double busy0 = static_cast<double>(std::min<std::int64_t>(J0, d.n));
            int_bs += wdt * B0;
            int_s += wdt * S0;
            int_j += wdt * static_cast<double>(J0);
            int_busy += wdt * busy0;
            if constexpr (Modulated) {
                if (w0 == 0) {
                    t_g += wdt;
                    int_bs_g += wdt * B0;
                }
            }
        }
        if (tn >= t_end) break;
        if (tn > warmup) ++events;
        t = tn;
    }

    const double horizon = t_end - warmup;
    const double n = static_cast<double>(d.n);
    RepResult r{};
    r.bs = int_bs / (horizon * n);
    r.s = int_s / (horizon * n);
    r.j = int_j / (horizon * n);
    r.busy = int_busy / (horizon * n);
    r.weighted_bs = std::numeric_limits<double>::quiet_NaN();
    if constexpr (Modulated) {
        if (t_g > 0.0 && t_g < horizon) {
            const double avg_g = int_bs_g / (t_g * n);
            const double avg_b = (int_bs - int_bs_g) / ((horizon - t_g) * n);
            r.weighted_bs = d.pi_g * avg_g + (1.0 - d.pi_g) * avg_b;
        } else {
            r.weighted_bs = r.bs; // modulator never flipped inside the window
        }
    }
    r.events = events;
    return r;
}

const FederationParams* plain_params(const SimConfig& c) {
    return std::get_if<FederationParams>(&c.params);
}

int fleet_size(const SimConfig& c) {
    if (const auto* p = plain_params(c)) return p->n;
    return std::get<ModulatedParams>(c.params).n;
}

ResolvedConfig resolve(const SimConfig& c) {
    ResolvedConfig rc{};
    rc.replications = c.replications;
    if (rc.replications < 1) throw ValidationError("replications must be >= 1");
    rc.seed = c.seed;
    rc.warmup = c.warmup;
    if (rc.warmup < 0.0) {
        rc.warmup = plain_params(c) ? default_warmup(*plain_params(c))
                                    : default_warmup(std::get<ModulatedParams>(c.params));
    }
    rc.t_end = c.t_end > 0.0 ? c.t_end : 100.0 * rc.warmup;
    if (!(rc.warmup < rc.t_end)) throw ValidationError("warmup must be < t_end");
    if (c.initial_state) {
        validate_state(*c.initial_state, fleet_size(c));
        rc.initial_state = c.initial_state;
    }
    return rc;
}

std::vector<RepResult> run_all(const SimConfig& c, const ResolvedConfig& rc) {
    std::vector<RepResult> reps(rc.replications);
    auto run_one = [&](int r) {
        if (const auto* p = plain_params(c))
            reps[r] = run_replication<false>(*p, rc, static_cast<std::uint64_t>(r));
        else
            reps[r] = run_replication<true>(std::get<ModulatedParams>(c.params), rc,
                                            static_cast<std::uint64_t>(r));
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int workers = static_cast<int>(std::min<unsigned>(hw, rc.replications));
    if (workers <= 1) {
        for (int r = 0; r < rc.replications; ++r) run_one(r);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int k = 0; k < workers; ++k) {
            pool.emplace_back([&] {
                for (int r = next.fetch_add(1); r < rc.replications; r = next.fetch_add(1))
                    run_one(r);
            });
        }
        for (auto& th : pool) th.join();
    }

    for (int r = 0; r < rc.replications; ++r) {
        if (reps[r].events < kMinEventsPerReplication) {
            std::ostringstream msg;
            msg << "replication " << r << " saw " << reps[r].events << " events in (warmup, t_end]; need >= "
                << kMinEventsPerReplication;
            throw HorizonTooShortError(msg.str());
        }
    }
    return reps;
}

} // namespace

double default_warmup(const FederationParams& p) {
    return 10.0 * std::max(1.0 / p.mu, 1.0 / (p.nu_s + p.nu_c));
}

double default_warmup(const ModulatedParams& p) {
    const double slowest = std::max({1.0 / p.mu, 1.0 / (p.nu_sg + p.nu_cg),
                                     1.0 / (p.nu_sb + p.nu_cb), 1.0 / (p.nu_g + p.nu_b)});
    return 10.0 * slowest;
}

std::pair<SystemState, double> step(const SystemState& st, const FederationParams& p, Rng& rng) {
    validate_state(st, p.n);
    const Dyn<false> d = make_dyn(p);
    SystemState out = st;
    int w = 0;
    const double h = advance(d, out.jobs, out.sunny, out.busy_sunny, w, rng);
    return {out, h};
}

std::pair<ModulatedState, double> step_modulated(const ModulatedState& st, const ModulatedParams& p,
                                                 Rng& rng) {
    validate_state(st.sys, p.n);
    const Dyn<true> d = make_dyn(p);
    ModulatedState out = st;
    int w = out.weather == Weather::Good ? 0 : 1;
    const double h = advance(d, out.sys.jobs, out.sys.sunny, out.sys.busy_sunny, w, rng);
    out.weather = w == 0 ? Weather::Good : Weather::Bad;
    return {out, h};
}

StationaryEstimate estimate_stationary(const SimConfig& config) {
    const ResolvedConfig rc = resolve(config);
    const std::vector<RepResult> reps = run_all(config, rc);

    std::vector<double> bs, s, j, busy, wbs;
    bs.reserve(reps.size());
    s.reserve(reps.size());
    j.reserve(reps.size());
    busy.reserve(reps.size());
    const bool modulated = !plain_params(config);
    std::uint64_t events = 0;
    for (const auto& r : reps) {
        bs.push_back(r.bs);
        s.push_back(r.s);
        j.push_back(r.j);
        busy.push_back(r.busy);
        if (modulated) wbs.push_back(r.weighted_bs);
        events += r.events;
    }

    StationaryEstimate est{};
    const MeanCi m_bs = mean_ci(bs), m_s = mean_ci(s), m_j = mean_ci(j), m_busy = mean_ci(busy);
    est.mean_bs_frac = m_bs.mean;
    est.mean_s_frac = m_s.mean;
    est.mean_j_frac = m_j.mean;
    est.mean_busy_frac = m_busy.mean;
    est.ci_halfwidth_bs = m_bs.ci_halfwidth;
    est.ci_halfwidth_s = m_s.ci_halfwidth;
    est.ci_halfwidth_j = m_j.ci_halfwidth;
    est.ci_halfwidth_busy = m_busy.ci_halfwidth;
    if (modulated) {
        const MeanCi m_w = mean_ci(wbs);
        est.weighted_bs_frac = m_w.mean;
        est.ci_halfwidth_weighted_bs = m_w.ci_halfwidth;
    } else {
        est.weighted_bs_frac = std::numeric_limits<double>::quiet_NaN();
        est.ci_halfwidth_weighted_bs = std::numeric_limits<double>::quiet_NaN();
    }
    est.events = events;
    est.replications = rc.replications;
    return est;
}

std::vector<TracePoint> trace(const SimConfig& config, double sample_dt) {
    if (!(sample_dt > 0.0)) throw ValidationError("sample_dt must be > 0");
    SimConfig c = config;
    c.replications = 1;
    const ResolvedConfig rc = resolve(c);

    const bool modulated = !plain_params(config);
    Rng rng(rc.seed, 0);

    Dyn<true> dm{};
    Dyn<false> dp{};
    int n;
    double rho;
    int w = 0;
    if (modulated) {
        const auto& p = std::get<ModulatedParams>(config.params);
        dm = make_dyn(p);
        n = p.n;
        rho = p.rho();
        w = rng.uniform() < dm.pi_g ? 0 : 1;
    } else {
        const auto& p = std::get<FederationParams>(config.params);
        dp = make_dyn(p);
        n = p.n;
        rho = p.rho();
    }

    SystemState st;
    if (rc.initial_state) {
        st = *rc.initial_state;
    } else if (modulated) {
        const double s_star = dm.nus[w] / (dm.nus[w] + dm.nuc[w]);
        st = draw_initial(dm, rho, s_star, rng);
    } else {
        st = draw_initial(dp, rho, dp.nus[0] / (dp.nus[0] + dp.nuc[0]), rng);
    }

    std::vector<TracePoint> out;
    const double inv_n = 1.0 / static_cast<double>(n);
    const double t_end = rc.t_end;
    std::uint64_t events = 0;
    std::size_t k = 0; // next sample index; grid point k is at k * sample_dt
    double t = 0.0;
    while (true) {
        const SystemState st0 = st;
        double h;
        if (modulated)
            h = advance(dm, st.jobs, st.sunny, st.busy_sunny, w, rng);
        else
            h = advance(dp, st.jobs, st.sunny, st.busy_sunny, w, rng);
        assert(is_valid_state(st, n));
        const double tn = t + h;
        while (true) {
            const double tk = static_cast<double>(k) * sample_dt;
            if (tk > t_end || tk >= tn) break;
            out.push_back({tk, static_cast<double>(st0.jobs) * inv_n,
                           static_cast<double>(st0.sunny) * inv_n,
                           static_cast<double>(st0.busy_sunny) * inv_n});
            ++k;
        }
        if (tn >= t_end) {
            // state holds to the horizon; emit the remaining grid points
            for (double tk = static_cast<double>(k) * sample_dt; tk <= t_end;
                 tk = static_cast<double>(++k) * sample_dt) {
                out.push_back({tk, static_cast<double>(st0.jobs) * inv_n,
                               static_cast<double>(st0.sunny) * inv_n,
                               static_cast<double>(st0.busy_sunny) * inv_n});
            }
            break;
        }
        ++events;
        t = tn;
    }
    if (events < kMinEventsPerReplication) {
        std::ostringstream msg;
        msg << "trace saw " << events << " events before t_end; need >= " << kMinEventsPerReplication;
        throw HorizonTooShortError(msg.str());
    }
    return out;
}

} // namespace sim
} // namespace glbfed
