#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/operators.h>
#include <pybind11/stl.h>

#include <filesystem>

#include "rotbath/birthdeath.hpp"
#include "rotbath/classical.hpp"
#include "rotbath/core.hpp"
#include "rotbath/kinetics.hpp"
#include "rotbath/runner.hpp"
#include "rotbath/scenario.hpp"
#include "rotbath/thermo.hpp"

namespace py = pybind11;
using namespace rotbath;

namespace {

InverseTemperature beta_of(double beta) { return InverseTemperature::from_double(beta); }

}  // namespace

PYBIND11_MODULE(_rotbath, m) {
    m.doc() = "Rotating-bath superradiance: rates, kinetics, birth-death processes and thermodynamics";

    py::register_exception<Error>(m, "RotbathError", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);
    py::register_exception<ScenarioSyntaxError>(m, "ScenarioSyntaxError", PyExc_ValueError);

    py::enum_<Statistics>(m, "Statistics").value("BOSE", Statistics::Bose).value("FERMI", Statistics::Fermi);
    py::enum_<Stability>(m, "Stability")
        .value("STABLE", Stability::Stable)
        .value("MARGINAL", Stability::Marginal)
        .value("SUPERRADIANT", Stability::Superradiant);
    py::enum_<RunStatus>(m, "RunStatus")
        .value("COMPLETED", RunStatus::Completed)
        .value("EXPONENTIAL_RUNAWAY", RunStatus::ExponentialRunaway)
        .value("RUNAWAY_TRUNCATION", RunStatus::RunawayTruncation);

    py::class_<CouplingSpectrum>(m, "CouplingSpectrum")
        .def("__call__", &CouplingSpectrum::operator(), py::arg("x"))
        .def_property_readonly("family", [](const CouplingSpectrum& s) { return to_string(s.family()); })
        .def_property_readonly("beta", [](const CouplingSpectrum& s) { return s.beta_ref().value(); });

    m.def("ohmic_spectrum",
          [](double A, double s, double xc, double beta) { return ohmic_spectrum(A, s, xc, beta_of(beta)); },
          py::arg("amplitude"), py::arg("exponent"), py::arg("cutoff"), py::arg("beta"));
    m.def("flat_spectrum", [](double level, double beta) { return flat_spectrum(level, beta_of(beta)); },
          py::arg("level"), py::arg("beta"));
    m.def("hawking_spectrum",
          [](std::function<double(double)> ff, double beta) { return hawking_spectrum(std::move(ff), beta_of(beta)); },
          py::arg("formfactor_sq"), py::arg("beta_hawking"));
    m.def("kms_extend",
          [](std::function<double(double)> pp, double beta) { return kms_extend(std::move(pp), beta_of(beta)); },
          py::arg("positive_part"), py::arg("beta"));
    m.def("kms_check",
          [](const CouplingSpectrum& s, double beta, std::vector<double> grid) {
              return kms_check(s, beta_of(beta), grid);
          },
          py::arg("spectrum"), py::arg("beta"), py::arg("grid"));
    m.def("log_grid", &log_grid, py::arg("lo"), py::arg("hi"), py::arg("n"));

    py::class_<Mode>(m, "Mode")
        .def(py::init<double, int, std::string, Statistics>(), py::arg("omega"), py::arg("m"),
             py::arg("alpha") = "0", py::arg("statistics") = Statistics::Bose)
        .def_property_readonly("omega", &Mode::omega)
        .def_property_readonly("m", &Mode::m)
        .def_property_readonly("alpha", &Mode::alpha)
        .def_property_readonly("statistics", &Mode::statistics)
        .def(py::self == py::self)
        .def(py::self < py::self)
        .def("__repr__", [](const Mode& mo) {
            return "Mode(omega=" + format_double(mo.omega()) + ", m=" + std::to_string(mo.m()) + ", alpha='" +
                   mo.alpha() + "', statistics=" + to_string(mo.statistics()) + ")";
        });

    py::class_<BathSpec>(m, "BathSpec")
        .def(py::init([](double beta, double omega_rot, CouplingSpectrum spec) {
                 return BathSpec(beta_of(beta), omega_rot, std::move(spec));
             }),
             py::arg("beta"), py::arg("omega_rot"), py::arg("spectrum"))
        .def_property_readonly("beta", [](const BathSpec& b) { return b.beta().value(); })
        .def_property_readonly("omega_rot", &BathSpec::omega_rot)
        .def_property_readonly("spectrum", &BathSpec::spectrum);

    py::class_<RateSet>(m, "RateSet")
        .def(py::init<>())
        .def_readwrite("gamma_down", &RateSet::gamma_down)
        .def_readwrite("gamma_up", &RateSet::gamma_up)
        .def_readwrite("beta_loc", &RateSet::beta_loc)
        .def_readwrite("classification", &RateSet::classification);

    m.def("rates", &rates, py::arg("bath"), py::arg("mode"));
    m.def("shifted_spectrum", &shifted_spectrum, py::arg("bath"), py::arg("mode"), py::arg("x"));
    m.def("local_beta", &local_beta, py::arg("bath"), py::arg("mode"));
    m.def("classify", py::overload_cast<const BathSpec&, const Mode&>(&classify), py::arg("bath"), py::arg("mode"));
    m.def("kms_check_rotating",
          [](const BathSpec& b, const Mode& mo, std::vector<double> grid) { return kms_check_rotating(b, mo, grid); },
          py::arg("bath"), py::arg("mode"), py::arg("grid"));

    py::class_<MeanTrajectory>(m, "MeanTrajectory")
        .def_readonly("times", &MeanTrajectory::times)
        .def_readonly("nbar", &MeanTrajectory::nbar)
        .def_readonly("status", &MeanTrajectory::status);
    m.def("closed_form_mean", &closed_form_mean, py::arg("rates"), py::arg("statistics"), py::arg("nbar0"),
          py::arg("t"));
    m.def("evolve_mean",
          [](const RateSet& r, const Mode& mo, double n0, std::vector<double> grid) {
              return evolve_mean(r, mo, n0, grid);
          },
          py::arg("rates"), py::arg("mode"), py::arg("nbar0"), py::arg("t_grid"));
    m.def("asymptotic_population", &asymptotic_population, py::arg("bath"), py::arg("mode"));
    m.def("relaxation_constant", &relaxation_constant, py::arg("rates"), py::arg("statistics"));

    py::class_<ModeDistribution>(m, "ModeDistribution")
        .def_readonly("probs", &ModeDistribution::probs)
        .def_readonly("time", &ModeDistribution::time)
        .def_property_readonly("mode", [](const ModeDistribution& d) { return d.mode; })
        .def("mean", &ModeDistribution::mean)
        .def("variance", &ModeDistribution::variance)
        .def("total", &ModeDistribution::total);
    m.def("point_distribution", &point_distribution, py::arg("mode"), py::arg("n0"), py::arg("cutoff") = 32);
    m.def("thermal_distribution", &thermal_distribution, py::arg("mode"), py::arg("mean"),
          py::arg("tail_tol") = 1e-16, py::arg("min_cutoff") = 32);
    m.def("evolve_distribution",
          [](const RateSet& r, double kappa, const ModeDistribution& init, std::vector<double> grid, double tail_tol) {
              DistributionOptions opts;
              opts.tail_tol = tail_tol;
              const auto run = evolve_distribution(r, NonlinearParams(kappa), init, grid, opts);
              return py::make_tuple(run.snapshots, run.status);
          },
          py::arg("rates"), py::arg("kappa"), py::arg("initial"), py::arg("t_grid"), py::arg("tail_tol") = 1e-10);

    py::class_<GillespieResult>(m, "GillespieResult")
        .def_readonly("times", &GillespieResult::times)
        .def_readonly("mean", &GillespieResult::mean)
        .def_readonly("variance", &GillespieResult::variance)
        .def_readonly("n_traj", &GillespieResult::n_traj)
        .def_readonly("rng", &GillespieResult::rng)
        .def("standard_error", &GillespieResult::standard_error);
    m.def("gillespie",
          [](const RateSet& r, Statistics st, double kappa, std::uint64_t n0, std::vector<double> checkpoints,
             std::size_t n_traj, std::uint64_t seed, unsigned threads) {
              GillespieOptions opts;
              opts.n_traj = n_traj;
              opts.seed = seed;
              opts.threads = threads;
              py::gil_scoped_release release;
              return gillespie(r, st, NonlinearParams(kappa), n0, checkpoints, opts);
          },
          py::arg("rates"), py::arg("statistics"), py::arg("kappa"), py::arg("n0"), py::arg("checkpoints"),
          py::arg("n_traj"), py::arg("seed"), py::arg("threads") = 1);
    m.def("saturation_fixed_point",
          [](const RateSet& r, double kappa) { return saturation_fixed_point(r, NonlinearParams(kappa)); },
          py::arg("rates"), py::arg("kappa"));
    m.def("meanfield_evolve",
          [](const RateSet& r, double kappa, double n0, std::vector<double> grid) {
              const auto traj = meanfield_evolve(r, NonlinearParams(kappa), n0, grid);
              return py::make_tuple(traj.times, traj.nbar, traj.status);
          },
          py::arg("rates"), py::arg("kappa"), py::arg("n0"), py::arg("t_grid"));

    m.def("entropy", py::overload_cast<const ModeDistribution&>(&entropy), py::arg("distribution"));
    m.def("entropy_production",
          [](const ModeDistribution& p, const RateSet& r, double kappa) {
              return entropy_production(p, r, NonlinearParams(kappa)).sigma;
          },
          py::arg("distribution"), py::arg("rates"), py::arg("kappa") = 0.0);
    m.def("bh_ledger",
          [](const std::vector<std::tuple<double, int, double>>& quanta, double omega_h, double t_h) {
              std::vector<Quantum> q;
              for (const auto& [w, mm, c] : quanta) q.push_back({w, mm, c});
              const auto e = bh_ledger(q, omega_h, t_h);
              return py::make_tuple(e.dM, e.dL, e.dA);
          },
          py::arg("quanta"), py::arg("omega_horizon"), py::arg("t_hawking"));

    m.def("shear_classify",
          [](double V, double v, double k) { return classical::to_string(classical::shear_classify({V, v, k})); },
          py::arg("V"), py::arg("v"), py::arg("k") = 1.0);
    m.def("energy_split",
          [](double V, double v) {
              const auto s = classical::energy_split({V, v, 1.0});
              return py::make_tuple(s.wave_fraction, s.dissipated_fraction);
          },
          py::arg("V"), py::arg("v"));

    m.def("check_scenario", [](const std::string& text) { return print_scenario(parse_scenario(text)); },
          py::arg("text"));
    m.def("run_scenario_file",
          [](const std::string& path, const std::string& out_dir, unsigned threads) {
              const Scenario s = read_scenario_file(path);
              RunContext ctx;
              ctx.out_dir = out_dir;
              ctx.threads = threads;
              const auto parent = std::filesystem::path(path).parent_path();
              ctx.base_dir = parent.empty() ? "." : parent.string();
              const auto report = run_scenario(s, ctx);
              return py::make_tuple(report.exit_code(), report.files);
          },
          py::arg("path"), py::arg("out_dir"), py::arg("threads") = 1);
    m.attr("__version__") = tool_version();
}
