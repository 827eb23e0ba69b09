// Command-line frontend: reproducible variance-reduction curves, probe-state
// optimization, clock scenarios, stationary analysis, scaling tables and the
// Monte Carlo / quadrature cross-checks.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qfreq/clockloop.hpp"
#include "qfreq/oracle.hpp"

using json = nlohmann::json;

namespace {

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f)
        throw CLI::ValidationError("--out", "cannot open '" + out_path +
                                                "' for writing");
    f << content;
    if (!f) throw std::runtime_error("write to '" + out_path + "' failed");
}

std::vector<double> log_spaced(double lo, double hi, int points) {
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i)
        g[i] = points == 1 ? lo : lo * std::pow(hi / lo, double(i) / (points - 1));
    return g;
}

struct NoiseFlags {
    double alpha = 1.0;
    double gamma = 0.2;
    double beta = 0.001;
    double initial_variance = 0.167;
    std::string config_path;
};

// Noise flags shared by the dephasing subcommands; defaults reproduce the
// headline scenario. Also readable from a key=value config file.
void add_noise_flags(CLI::App* cmd, NoiseFlags* nf) {
    cmd->add_option("--alpha", nf->alpha, "OU stationary variance [Hz^2]")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--gamma", nf->gamma, "OU correlation rate [Hz]")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--beta", nf->beta, "white dephasing strength [Hz]")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--initial_variance,--init-var", nf->initial_variance,
                    "initial LO variance [Hz^2]")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--config", nf->config_path, "key=value config file");
}

// CLI11 only reads config files attached to the top-level app, so the
// per-subcommand noise config is loaded by hand. Flags given on the
// command line take precedence over file entries.
void apply_config_file(CLI::App* cmd, NoiseFlags* nf) {
    if (nf->config_path.empty()) return;
    std::ifstream f(nf->config_path);
    if (!f) throw CLI::FileError::Missing(nf->config_path);
    const auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string{}
                                      : s.substr(a, b - a + 1);
    };
    std::string line;
    while (std::getline(f, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (!trim(line).empty())
                throw CLI::ValidationError(
                    "--config", "expected key=value, got '" + trim(line) + "'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        double* target = nullptr;
        std::string flag;
        if (key == "alpha") {
            target = &nf->alpha;
            flag = "--alpha";
        } else if (key == "gamma") {
            target = &nf->gamma;
            flag = "--gamma";
        } else if (key == "beta") {
            target = &nf->beta;
            flag = "--beta";
        } else if (key == "initial_variance") {
            target = &nf->initial_variance;
            flag = "--initial_variance";
        } else {
            throw CLI::ValidationError("--config",
                                       "unknown key '" + key + "'");
        }
        std::size_t used = 0;
        const double parsed = std::stod(value, &used);
        if (used != value.size() || !(parsed >= 0.0))
            throw CLI::ValidationError(
                "--config", "bad value for '" + key + "': " + value);
        if (cmd->count(flag) == 0) *target = parsed;
    }
}

json state_to_json(const qfreq::SymmetricState& s) {
    json amps = json::array();
    for (int n = 0; n <= s.n_atoms; ++n)
        amps.push_back({{"re", s.amplitudes(n).real()},
                        {"im", s.amplitudes(n).imag()}});
    return {{"n_atoms", s.n_atoms}, {"amplitudes", amps}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Bayesian frequency-estimation strategies for N two-level atoms "
        "under collective dephasing"};
    app.require_subcommand(1);

    std::string out_path;
    unsigned long long seed = 0;
    unsigned threads = 0;
    app.add_option("--out", out_path, "output path (default: stdout)")
        ->capture_default_str();
    app.add_option("--seed", seed, "RNG seed")->capture_default_str();
    app.add_option("--threads", threads,
                   "worker threads (0 = machine parallelism)")
        ->capture_default_str();

    // rcurve
    auto* rcurve = app.add_subcommand(
        "rcurve", "decoherence-free variance reduction factor R(tau)");
    int rc_n = 5;
    std::string rc_family = "optimal";
    double tau_min = 0.01, tau_max = 1.5;
    int tau_points = 100;
    rcurve->add_option("--n", rc_n, "number of atoms")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    rcurve->add_option("--family", rc_family, "optimal|ghz|product|sine")
        ->capture_default_str();
    rcurve->add_option("--tau-min", tau_min, "smallest tau")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    rcurve->add_option("--tau-max", tau_max, "largest tau")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    rcurve->add_option("--tau-points", tau_points, "grid size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    // optimize
    auto* optimize = app.add_subcommand(
        "optimize", "optimal probe state at a single dimensionless time");
    int op_n = 5;
    double op_tau = 0.3;
    int op_restarts = 4, op_max_iters = 5000;
    double op_tol = 1e-12;
    optimize->add_option("--n", op_n, "number of atoms")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    optimize->add_option("--tau", op_tau, "dimensionless time")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    optimize->add_option("--restarts", op_restarts, "independent starts")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    optimize->add_option("--max-iters", op_max_iters, "iteration cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    optimize->add_option("--tol", op_tol, "cost-change tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    // clock
    auto* clock = app.add_subcommand(
        "clock", "variance reduction under LO noise and atomic dephasing");
    int ck_n = 5;
    std::string ck_family = "optimal";
    NoiseFlags ck_noise;
    double t_min = 0.05, t_max = 50.0;
    int t_points = 80;
    clock->add_option("--n", ck_n, "number of atoms")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    clock->add_option("--family", ck_family, "optimal|ghz|product|sine")
        ->capture_default_str();
    add_noise_flags(clock, &ck_noise);
    clock->add_option("--t-min", t_min, "smallest interrogation time [s]")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    clock->add_option("--t-max", t_max, "largest interrogation time [s]")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    clock->add_option("--t-points", t_points, "grid size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    // stationary
    auto* stationary = app.add_subcommand(
        "stationary", "smallest initial variance sustainable by feedback");
    int st_n = 5;
    std::string st_family = "optimal";
    NoiseFlags st_noise;
    stationary->add_option("--n", st_n, "number of atoms")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    stationary->add_option("--family", st_family, "optimal|ghz|product|sine")
        ->capture_default_str();
    add_noise_flags(stationary, &st_noise);

    // scaling
    auto* scaling = app.add_subcommand(
        "scaling", "best variance and optimal time as a function of N");
    std::string sc_n_list = "1,2,3,5,8,10";
    std::string sc_family = "optimal";
    std::string sc_mode = "decoherence_free_opt_tau";
    NoiseFlags sc_noise;
    scaling->add_option("--n-list", sc_n_list, "comma-separated atom numbers")
        ->capture_default_str();
    scaling->add_option("--family", sc_family, "optimal|ghz|product|sine")
        ->capture_default_str();
    scaling
        ->add_option("--mode", sc_mode, "decoherence_free_opt_tau|stationary")
        ->capture_default_str();
    add_noise_flags(scaling, &sc_noise);

    // oracle
    auto* oracle = app.add_subcommand(
        "oracle", "Monte Carlo cross-check of the dephasing closed forms");
    int or_n = 3;
    NoiseFlags or_noise;
    double or_t = 1.0;
    long long or_samples = 100000;
    oracle->add_option("--n", or_n, "number of atoms (GHZ probe)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_noise_flags(oracle, &or_noise);
    oracle->add_option("--t", or_t, "interrogation time [s]")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    oracle->add_option("--samples", or_samples, "trajectory count")
        ->check(CLI::Range(100ll, 100000000ll))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
        apply_config_file(clock, &ck_noise);
        apply_config_file(stationary, &st_noise);
        apply_config_file(scaling, &sc_noise);
        apply_config_file(oracle, &or_noise);
        qfreq::set_mc_threads(threads);
        std::ostringstream out;

        if (*rcurve) {
            const auto family = qfreq::family_from_string(rc_family);
            if (tau_max < tau_min)
                throw CLI::ValidationError("--tau-max",
                                           "must be >= --tau-min");
            qfreq::OptimizerConfig cfg;
            cfg.seed = seed;
            const auto rows = qfreq::r_curve(
                rc_n, log_spaced(tau_min, tau_max, tau_points), family, cfg);
            out << "N,tau,R,family\n";
            for (const auto& row : rows)
                out << rc_n << ',' << fmt12(row.tau) << ',' << fmt12(row.r)
                    << ',' << rc_family << '\n';
        } else if (*optimize) {
            qfreq::OptimizerConfig cfg;
            cfg.max_iterations = op_max_iters;
            cfg.cost_tolerance = op_tol;
            cfg.restarts = op_restarts;
            cfg.seed = seed;
            const auto res =
                qfreq::optimize_state(op_n, op_tau, 1.0, 1.0, 1.0, cfg);
            json j = state_to_json(res.state);
            j["tau"] = op_tau;
            j["variance_ratio"] = res.variance;
            j["iterations"] = res.iterations;
            j["converged"] = res.converged;
            out << j.dump(2) << '\n';
        } else if (*clock) {
            qfreq::ClockScenario s{
                {ck_noise.alpha, ck_noise.gamma, ck_noise.initial_variance},
                {ck_noise.beta},
                ck_n,
                qfreq::family_from_string(ck_family)};
            if (t_max < t_min)
                throw CLI::ValidationError("--t-max", "must be >= --t-min");
            const auto rows =
                qfreq::reduction_curve(s, log_spaced(t_min, t_max, t_points));
            out << "t_s,var_prior_Hz2,var_post_Hz2,ratio\n";
            for (const auto& row : rows)
                out << fmt12(row.t) << ',' << fmt12(row.var_prior) << ','
                    << fmt12(row.var_post) << ',' << fmt12(row.ratio) << '\n';
        } else if (*stationary) {
            const auto res = qfreq::stationary_variance(
                st_n, st_noise.alpha, st_noise.gamma, {st_noise.beta},
                qfreq::family_from_string(st_family));
            if (!res.found)
                throw std::runtime_error(
                    "no stationary point below alpha exists for this setup");
            out << "N,variance_Hz2,argmin_time_s\n";
            out << st_n << ',' << fmt12(res.variance) << ','
                << fmt12(res.time) << '\n';
        } else if (*scaling) {
            std::vector<int> ns;
            std::stringstream ss(sc_n_list);
            for (std::string item; std::getline(ss, item, ',');)
                ns.push_back(std::stoi(item));
            if (ns.empty())
                throw CLI::ValidationError("--n-list", "no atom numbers given");
            const auto mode =
                sc_mode == "stationary"
                    ? qfreq::ScalingMode::stationary
                    : (sc_mode == "decoherence_free_opt_tau"
                           ? qfreq::ScalingMode::decoherence_free_opt_tau
                           : throw CLI::ValidationError(
                                 "--mode", "unknown mode '" + sc_mode + "'"));
            const auto rows = qfreq::scaling_table(
                ns, qfreq::family_from_string(sc_family), mode, sc_noise.alpha,
                sc_noise.gamma, {sc_noise.beta});
            out << "N,variance_Hz2,argmin_time_s\n";
            for (const auto& row : rows)
                out << row.n_atoms << ',' << fmt12(row.variance) << ','
                    << fmt12(row.argmin_time) << '\n';
        } else if (*oracle) {
            const qfreq::OUParams ou{or_noise.alpha, or_noise.gamma,
                                     or_noise.initial_variance};
            const qfreq::WhiteNoiseParams wn{or_noise.beta};
            const auto state = qfreq::make_ghz(or_n);
            const double dt = std::min(1e-3 / ou.gamma, or_t / 1000.0);
            const int nn = or_n;

            json checks = json::array();
            auto push = [&checks](const std::string& name, double analytic,
                                  double mc, double stderr_v) {
                const bool pass = std::abs(mc - analytic) <= 3.0 * stderr_v;
                checks.push_back({{"name", name},
                                  {"analytic", analytic},
                                  {"mc", mc},
                                  {"std_error", stderr_v},
                                  {"pass", pass}});
            };

            const auto avg = qfreq::mc_average_state(state, ou, wn, or_t,
                                                     or_samples, dt, seed);
            const double eff = qfreq::effective_prior_variance(ou, wn, or_t);
            const double coh =
                0.5 * std::exp(-0.5 * nn * nn * or_t * or_t * eff);
            push("avg_state_coherence_re", coh, avg.value(0, nn).real(),
                 avg.stderr_re(0, nn));
            push("avg_state_coherence_im", 0.0, avg.value(0, nn).imag(),
                 avg.stderr_im(0, nn));
            push("avg_state_population", 0.5, avg.value(0, 0).real(),
                 avg.stderr_re(0, 0));

            const auto rp = qfreq::mc_rho_prime(state, ou, or_t, or_samples,
                                                dt, seed + 1);
            // Trajectory averages converge to the sampled-process kernel.
            const double k1 = qfreq::ou_k1_sampled(ou, or_t);
            const double k2 = qfreq::ou_k2(ou, or_t);
            const double coh_ou =
                0.5 * std::exp(-0.5 * nn * nn * or_t * or_t * k2);
            push("rho_prime_im", or_t * coh_ou * nn * k1,
                 rp.value(0, nn).imag(), rp.stderr_im(0, nn));
            push("rho_prime_re", 0.0, rp.value(0, nn).real(),
                 rp.stderr_re(0, nn));

            const auto kern =
                qfreq::mc_kernels(ou, or_t, or_samples, dt, seed + 2);
            push("kernel_k1", k1, kern.k1, kern.k1_stderr);
            push("kernel_k2", k2, kern.k2, kern.k2_stderr);

            bool all_pass = true;
            for (const auto& c : checks) all_pass &= c["pass"].get<bool>();
            json report = {{"samples", or_samples},
                           {"t_s", or_t},
                           {"checks", checks},
                           {"all_pass", all_pass}};
            out << report.dump(2) << '\n';
        }

        write_output(out_path, out.str());
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
}
