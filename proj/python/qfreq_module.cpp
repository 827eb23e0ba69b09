// Python bindings for the core operations: state constructors, the Bayesian
// estimation primitives, noise kernels, the probe-state optimizer, the clock
// scenarios and the Monte Carlo / quadrature oracles.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qfreq/clockloop.hpp"
#include "qfreq/oracle.hpp"

namespace py = pybind11;
using namespace qfreq;

namespace {

SymmetricState state_from_amplitudes(const Vector& amplitudes) {
    if (amplitudes.size() < 2)
        throw std::invalid_argument("need at least 2 amplitudes");
    SymmetricState s{int(amplitudes.size()) - 1, amplitudes};
    if (state_norm_error(s) > 1e-12)
        throw std::invalid_argument("amplitudes are not normalized");
    return s;
}

}  // namespace

PYBIND11_MODULE(_qfreq, m) {
    m.doc() =
        "Bayesian frequency estimation for N two-level atoms under "
        "collective dephasing";

    py::class_<SymmetricState>(m, "SymmetricState")
        .def(py::init(&state_from_amplitudes), py::arg("amplitudes"))
        .def_readonly("n_atoms", &SymmetricState::n_atoms)
        .def_readonly("amplitudes", &SymmetricState::amplitudes)
        .def("__repr__", [](const SymmetricState& s) {
            return "<SymmetricState N=" + std::to_string(s.n_atoms) + ">";
        });

    py::class_<Spectral>(m, "Spectral")
        .def_readonly("eigenvalues", &Spectral::eigenvalues)
        .def_readonly("eigenvectors", &Spectral::eigenvectors);

    py::class_<EstimationStrategy>(m, "EstimationStrategy")
        .def(py::init([](const Matrix& projectors,
                         const Eigen::VectorXd& estimates) {
                 return EstimationStrategy{projectors, estimates};
             }),
             py::arg("projectors"), py::arg("estimates"))
        .def_readonly("projectors", &EstimationStrategy::projectors)
        .def_readonly("estimates", &EstimationStrategy::estimates);

    // hilbert
    m.def("make_ghz", &make_ghz, py::arg("n_atoms"));
    m.def("make_product", &make_product, py::arg("n_atoms"));
    m.def("make_sine", &make_sine, py::arg("n_atoms"));
    m.def("to_density", &to_density, py::arg("state"));
    m.def("number_operator", &number_operator, py::arg("n_atoms"));
    m.def("eigh", &eigh, py::arg("matrix"), py::arg("hermiticity_tol") = 1e-10);

    // estimator
    m.def("average_state", &average_state, py::arg("rho"), py::arg("t"),
          py::arg("effective_variance"));
    m.def("rho_prime_gaussian", &rho_prime_gaussian, py::arg("rho_bar"),
          py::arg("h"), py::arg("t"), py::arg("weight"));
    m.def("solve_sld", &solve_sld, py::arg("rho_bar"), py::arg("rho_prime"),
          py::arg("rank_cutoff") = kDefaultRankCutoff);
    m.def("qfi", &qfi, py::arg("rho"), py::arg("h"), py::arg("t"),
          py::arg("rank_cutoff") = kDefaultRankCutoff);
    m.def("bayes_variance", &bayes_variance, py::arg("prior_variance"),
          py::arg("rho_bar"), py::arg("rho_prime"), py::arg("l"));
    m.def("variance_via_qfi", &variance_via_qfi, py::arg("prior_variance"),
          py::arg("rho_bar"), py::arg("h"), py::arg("t"));
    m.def("strategy_from_L", &strategy_from_L, py::arg("l"));

    // noise
    py::class_<OUParams>(m, "OUParams")
        .def(py::init([](double alpha, double gamma, double initial_variance) {
                 OUParams p{alpha, gamma, initial_variance};
                 check_params(p);
                 return p;
             }),
             py::arg("alpha"), py::arg("gamma"), py::arg("initial_variance"))
        .def_readonly("alpha", &OUParams::alpha)
        .def_readonly("gamma", &OUParams::gamma)
        .def_readonly("initial_variance", &OUParams::initial_variance);
    py::class_<WhiteNoiseParams>(m, "WhiteNoiseParams")
        .def(py::init([](double beta) {
                 WhiteNoiseParams p{beta};
                 check_params(p);
                 return p;
             }),
             py::arg("beta"))
        .def_readonly("beta", &WhiteNoiseParams::beta);
    m.def("ou_variance", &ou_variance, py::arg("params"), py::arg("t"));
    m.def("ou_k1", &ou_k1, py::arg("params"), py::arg("t"));
    m.def("ou_k1_sampled", &ou_k1_sampled, py::arg("params"), py::arg("t"));
    m.def("ou_k2", &ou_k2, py::arg("params"), py::arg("t"));
    m.def("white_k2", &white_k2, py::arg("params"), py::arg("t"));
    m.def("effective_prior_variance", &effective_prior_variance, py::arg("ou"),
          py::arg("wn"), py::arg("t"));
    m.def("sample_ou_path", &sample_ou_path, py::arg("params"),
          py::arg("t_end"), py::arg("dt"), py::arg("seed"));

    // optimizer
    py::enum_<StateFamily>(m, "StateFamily")
        .value("optimal", StateFamily::optimal)
        .value("ghz", StateFamily::ghz)
        .value("product", StateFamily::product)
        .value("sine", StateFamily::sine);
    py::class_<OptimizerConfig>(m, "OptimizerConfig")
        .def(py::init<>())
        .def_readwrite("max_iterations", &OptimizerConfig::max_iterations)
        .def_readwrite("cost_tolerance", &OptimizerConfig::cost_tolerance)
        .def_readwrite("seed", &OptimizerConfig::seed)
        .def_readwrite("restarts", &OptimizerConfig::restarts);
    py::class_<OptimizationResult>(m, "OptimizationResult")
        .def_readonly("state", &OptimizationResult::state)
        .def_readonly("variance", &OptimizationResult::variance)
        .def_readonly("iterations", &OptimizationResult::iterations)
        .def_readonly("converged", &OptimizationResult::converged)
        .def_readonly("cost_history", &OptimizationResult::cost_history);
    m.def("random_state", &random_state, py::arg("n_atoms"), py::arg("seed"));
    m.def("state_update_operator", &state_update_operator, py::arg("l"),
          py::arg("t"), py::arg("effective_variance"), py::arg("k1_weight"));
    m.def("state_cost", &state_cost, py::arg("state"), py::arg("t"),
          py::arg("prior_variance"), py::arg("effective_variance"),
          py::arg("k1_weight"));
    m.def(
        "iterate_once",
        [](const SymmetricState& s, double t, double prior, double ev,
           double k1w) {
            IterationStep step = iterate_once(s, t, prior, ev, k1w);
            return py::make_tuple(step.l, step.state, step.variance);
        },
        py::arg("state"), py::arg("t"), py::arg("prior_variance"),
        py::arg("effective_variance"), py::arg("k1_weight"));
    m.def(
        "optimize_state",
        [](int n_atoms, double t, double prior, double ev, double k1w,
           const OptimizerConfig& cfg) {
            return optimize_state(n_atoms, t, prior, ev, k1w, cfg);
        },
        py::arg("n_atoms"), py::arg("t"), py::arg("prior_variance"),
        py::arg("effective_variance"), py::arg("k1_weight"),
        py::arg("config") = OptimizerConfig{});
    m.def(
        "r_curve",
        [](int n_atoms, const std::vector<double>& taus, StateFamily family,
           const OptimizerConfig& cfg) {
            std::vector<std::pair<double, double>> out;
            for (const auto& p : r_curve(n_atoms, taus, family, cfg))
                out.emplace_back(p.tau, p.r);
            return out;
        },
        py::arg("n_atoms"), py::arg("taus"), py::arg("family"),
        py::arg("config") = OptimizerConfig{});

    // clockloop
    py::class_<ClockScenario>(m, "ClockScenario")
        .def(py::init([](const OUParams& ou, const WhiteNoiseParams& wn,
                         int n_atoms, StateFamily family) {
                 if (n_atoms < 1)
                     throw std::invalid_argument("n_atoms must be >= 1");
                 return ClockScenario{ou, wn, n_atoms, family};
             }),
             py::arg("ou"), py::arg("wn"), py::arg("n_atoms"),
             py::arg("family"))
        .def_readonly("ou", &ClockScenario::ou)
        .def_readonly("wn", &ClockScenario::wn)
        .def_readonly("n_atoms", &ClockScenario::n_atoms)
        .def_readonly("family", &ClockScenario::family);
    m.def(
        "variance_after_estimation",
        [](const ClockScenario& s, double t) {
            return variance_after_estimation(s, t);
        },
        py::arg("scenario"), py::arg("t"));
    m.def(
        "reduction_curve",
        [](const ClockScenario& s, const std::vector<double>& ts) {
            std::vector<std::tuple<double, double, double, double>> out;
            for (const auto& r : reduction_curve(s, ts))
                out.emplace_back(r.t, r.var_prior, r.var_post, r.ratio);
            return out;
        },
        py::arg("scenario"), py::arg("t_grid"));
    m.def(
        "stationary_variance",
        [](int n_atoms, double alpha, double gamma, const WhiteNoiseParams& wn,
           StateFamily family) {
            StationaryResult r =
                stationary_variance(n_atoms, alpha, gamma, wn, family);
            return py::make_tuple(r.variance, r.time, r.found);
        },
        py::arg("n_atoms"), py::arg("alpha"), py::arg("gamma"), py::arg("wn"),
        py::arg("family"));
    m.def(
        "scaling_table",
        [](const std::vector<int>& ns, StateFamily family, bool stationary,
           double alpha, double gamma, const WhiteNoiseParams& wn) {
            std::vector<std::tuple<int, double, double>> out;
            const auto mode = stationary
                                  ? ScalingMode::stationary
                                  : ScalingMode::decoherence_free_opt_tau;
            for (const auto& r :
                 scaling_table(ns, family, mode, alpha, gamma, wn))
                out.emplace_back(r.n_atoms, r.variance, r.argmin_time);
            return out;
        },
        py::arg("n_grid"), py::arg("family"), py::arg("stationary") = false,
        py::arg("alpha") = 1.0, py::arg("gamma") = 0.2,
        py::arg("wn") = WhiteNoiseParams{});

    // oracle
    py::class_<McMatrixEstimate>(m, "McMatrixEstimate")
        .def_readonly("value", &McMatrixEstimate::value)
        .def_readonly("stderr_re", &McMatrixEstimate::stderr_re)
        .def_readonly("stderr_im", &McMatrixEstimate::stderr_im)
        .def_readonly("samples", &McMatrixEstimate::samples);
    m.def("mc_average_state", &mc_average_state, py::arg("state"),
          py::arg("ou"), py::arg("wn"), py::arg("t"), py::arg("n_samples"),
          py::arg("dt"), py::arg("seed"));
    m.def("mc_rho_prime", &mc_rho_prime, py::arg("state"), py::arg("ou"),
          py::arg("t"), py::arg("n_samples"), py::arg("dt"), py::arg("seed"));
    m.def(
        "direct_cost",
        [](const SymmetricState& state, const EstimationStrategy& strategy,
           double prior_variance, double t, int quad_points) {
            return direct_cost(state, strategy, GaussianPriorSpec{prior_variance},
                               t, quad_points);
        },
        py::arg("state"), py::arg("strategy"), py::arg("prior_variance"),
        py::arg("t"), py::arg("quad_points") = 128);
    m.def("set_mc_threads", &set_mc_threads, py::arg("n"));
}
