#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "spinsim/runner.hpp"

namespace py = pybind11;
using namespace spinsim;

namespace {

py::dict ensemble_to_dict(const EnsembleResult& r) {
  py::dict d;
  d["time_us"] = r.time;
  d["names"] = r.observable_names;
  d["mean"] = r.mean;
  d["stderr"] = r.std_error;
  d["n_trials"] = r.n_trials;
  d["base_seed"] = r.base_seed;
  return d;
}

py::dict fit_to_dict(const CoherenceFit& fit) {
  py::dict d;
  d["t2_us"] = fit.t2;
  d["stretch"] = fit.stretch;
  d["residual"] = fit.residual;
  d["lower_bound"] = fit.lower_bound;
  d["amplitude"] = fit.amplitude;
  d["method"] = fit.method == FitMethod::Envelope1e ? "envelope_1e" : "stretched_exp_fit";
  return d;
}

DriveScheme scheme_from_name(const std::string& name) {
  if (name == "none") return DriveScheme::None;
  if (name == "linear") return DriveScheme::Linear;
  if (name == "orthogonal") return DriveScheme::Orthogonal;
  if (name == "phase_modulated") return DriveScheme::PhaseModulated;
  throw std::invalid_argument("unknown scheme: " + name);
}

}  // namespace

PYBIND11_MODULE(_spinsim, m) {
  m.doc() = "spin-1 color-center coherence and AC-magnetometry simulator";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<PhysicsGuardError>(m, "PhysicsGuardError");
  py::register_exception<NumericalError>(m, "NumericalError");

  m.attr("TWO_PI") = kTwoPi;
  m.def("mhz", &mhz, py::arg("f"), "(2 pi) x f MHz expressed in rad/us");

  // spin-1 algebra
  py::enum_<Spin1Op>(m, "Spin1Op")
      .value("Sx", Spin1Op::Sx)
      .value("Sy", Spin1Op::Sy)
      .value("Sz", Spin1Op::Sz)
      .value("Sz2", Spin1Op::Sz2)
      .value("SxSqMinusSySq", Spin1Op::SxSqMinusSySq);
  m.def("spin_operator", [](Spin1Op op) { return Matrix3c(spin_operator(op)); });
  m.def("expectation", &expectation, py::arg("state"), py::arg("op"));
  m.def("matrix_exponential", &matrix_exponential_skew, py::arg("h"), py::arg("dt"),
        "exp(-i h dt) for Hermitian h");

  // noise
  py::class_<OuProcess>(m, "OuProcess")
      .def(py::init<double, double, double, std::uint64_t>(), py::arg("tau"), py::arg("c"),
           py::arg("initial"), py::arg("seed"))
      .def_static("stationary", &OuProcess::stationary, py::arg("tau"), py::arg("c"),
                  py::arg("seed"))
      .def_static("from_dephasing", &OuProcess::from_dephasing, py::arg("t2_star"),
                  py::arg("tau"), py::arg("seed"))
      .def_static("amplitude_channel", &OuProcess::amplitude_channel, py::arg("omega1"),
                  py::arg("delta_rel"), py::arg("tau_omega"), py::arg("seed"))
      .def("step", &OuProcess::step, py::arg("dt"))
      .def_property_readonly("current", &OuProcess::current)
      .def_property_readonly("tau", &OuProcess::tau)
      .def_property_readonly("c", &OuProcess::c)
      .def_property_readonly("stationary_sigma", &OuProcess::stationary_sigma);
  m.def("derive_seed", &derive_seed, py::arg("base"), py::arg("trajectory"),
        py::arg("channel"));

  // Hamiltonians and effective models
  m.def(
      "h_lab",
      [](double d, double ex, double gamma_bz, double delta_e, double delta_bz) {
        return h_lab(StaticParams{d, ex, gamma_bz}, delta_e, delta_bz);
      },
      py::arg("d"), py::arg("ex"), py::arg("gamma_bz") = 0.0, py::arg("delta_e") = 0.0,
      py::arg("delta_bz") = 0.0);
  m.def(
      "h_rotating",
      [](double ex, const std::string& scheme, double omega1, double omega2, double g,
         double omega_ac, double delta_e, double delta_omega1, double t, bool rwa) {
        StaticParams p{0.0, ex, 0.0};
        DriveParams drive;
        drive.scheme = scheme_from_name(scheme);
        drive.omega1 = omega1;
        drive.omega2 = omega2;
        SignalParams sig{g, omega_ac};
        return h_rotating(p, drive, g > 0.0 ? &sig : nullptr,
                          NoiseValues{delta_e, delta_omega1}, t, rwa);
      },
      py::arg("ex"), py::arg("scheme"), py::arg("omega1") = 0.0, py::arg("omega2") = 0.0,
      py::arg("g") = 0.0, py::arg("omega_ac") = 0.0, py::arg("delta_e") = 0.0,
      py::arg("delta_omega1") = 0.0, py::arg("t") = 0.0, py::arg("rwa") = true);
  m.def("phase_modulation", &phase_modulation, py::arg("t"), py::arg("omega1"),
        py::arg("omega2"));
  m.def("gap_clock", &gap_clock, py::arg("ex"), py::arg("delta_e"));
  m.def("gap_linear", &gap_linear, py::arg("omega"), py::arg("delta_e"));
  m.def("gap_orthogonal", &gap_orthogonal, py::arg("omega"), py::arg("delta_e"));
  m.def("resonant_omega1", &resonant_omega1, py::arg("ex"), py::arg("omega_ac"),
        py::arg("ratio"));

  // dephasing comparison
  m.def(
      "dephasing_comparison",
      [](double ex, double omega1, double omega2, double t2_star, double tau_e,
         double delta_omega, double tau_omega, int n_trials, std::uint64_t base_seed,
         double t_end_none, double t_end_linear, double t_end_orthogonal,
         double t_end_phasemod, int n_threads) {
        DephasingParams p;
        p.ex = ex;
        p.omega1 = omega1;
        p.omega2 = omega2;
        p.noise = NoiseInputs{t2_star, tau_e, delta_omega, tau_omega};
        p.n_trials = n_trials;
        p.base_seed = base_seed;
        p.t_end_none = t_end_none;
        p.t_end_linear = t_end_linear;
        p.t_end_orthogonal = t_end_orthogonal;
        p.t_end_phasemod = t_end_phasemod;
        p.n_threads = n_threads;
        py::list out;
        for (const SchemeRun& run : dephasing_comparison(p)) {
          py::dict d;
          d["scheme"] = run.label;
          d["result"] = ensemble_to_dict(run.result);
          d["fit"] = fit_to_dict(run.fit);
          d["fit_stretched"] = fit_to_dict(run.stretched);
          d["mean_leakage"] = run.mean_leakage;
          out.append(d);
        }
        return out;
      },
      py::arg("ex") = mhz(24.0), py::arg("omega1") = mhz(10.0), py::arg("omega2") = mhz(1.0),
      py::arg("t2_star") = 3.0, py::arg("tau_e") = 20.0, py::arg("delta_omega") = 0.01,
      py::arg("tau_omega") = 500.0, py::arg("n_trials") = 500, py::arg("base_seed") = 1,
      py::arg("t_end_none") = 10.0, py::arg("t_end_linear") = 14.0,
      py::arg("t_end_orthogonal") = 30.0, py::arg("t_end_phasemod") = 110.0,
      py::arg("n_threads") = 0,
      py::call_guard<py::gil_scoped_release>());

  m.def(
      "ac_sensing_trace",
      [](double ex, double omega_ac, double g, double ratio, double t2_star, double tau_e,
         double delta_omega, double tau_omega, int n_trials, std::uint64_t base_seed,
         double t_end, const std::string& engine, int n_threads) {
        SensingParams p;
        p.ex = ex;
        p.omega_ac = omega_ac;
        p.g = g;
        p.ratio = ratio;
        p.noise = NoiseInputs{t2_star, tau_e, delta_omega, tau_omega};
        p.n_trials = n_trials;
        p.base_seed = base_seed;
        p.t_end = t_end;
        p.engine = engine == "three_level" ? SensingEngine::ThreeLevel
                                           : SensingEngine::TwoLevel;
        p.n_threads = n_threads;
        const SensingRun run = ac_sensing_trace(p);
        py::dict d;
        d["omega1"] = run.omega1;
        d["omega2"] = run.omega2;
        d["resonance_mismatch"] = run.resonance_mismatch;
        d["result"] = ensemble_to_dict(run.result);
        return d;
      },
      py::arg("ex") = mhz(110.0), py::arg("omega_ac") = mhz(5.0), py::arg("g") = mhz(0.1),
      py::arg("ratio") = 10.0, py::arg("t2_star") = 0.1, py::arg("tau_e") = 20.0,
      py::arg("delta_omega") = 0.005, py::arg("tau_omega") = 500.0,
      py::arg("n_trials") = 100, py::arg("base_seed") = 1, py::arg("t_end") = 60.0,
      py::arg("engine") = "two_level", py::arg("n_threads") = 0,
      py::call_guard<py::gil_scoped_release>());

  m.def(
      "ac_spectrum",
      [](double ex, double omega_ac, double g, double ratio, double t2_star, double tau_e,
         double delta_omega, double tau_omega, int n_trials, std::uint64_t base_seed,
         double t_probe, double span, int points, int n_threads) {
        SpectrumParams params;
        params.sensing.ex = ex;
        params.sensing.omega_ac = omega_ac;
        params.sensing.g = g;
        params.sensing.ratio = ratio;
        params.sensing.noise = NoiseInputs{t2_star, tau_e, delta_omega, tau_omega};
        params.sensing.n_trials = n_trials;
        params.sensing.base_seed = base_seed;
        params.sensing.n_threads = n_threads;
        params.t_probe = t_probe;
        params.span = span;
        params.points = points;
        const SpectrumResult spectrum = ac_spectrum(params);
        py::dict d;
        std::vector<double> w1, p0, se;
        for (const auto& row : spectrum.rows) {
          w1.push_back(row.omega1);
          p0.push_back(row.p0);
          se.push_back(row.std_error);
        }
        d["omega1"] = w1;
        d["p0"] = p0;
        d["stderr"] = se;
        d["omega1_nominal"] = spectrum.omega1_nominal;
        d["omega1_extremum"] = spectrum.omega1_extremum;
        d["linewidth_fwhm"] = spectrum.linewidth_fwhm;
        return d;
      },
      py::arg("ex") = mhz(110.0), py::arg("omega_ac") = mhz(5.0), py::arg("g") = mhz(0.1),
      py::arg("ratio") = 10.0, py::arg("t2_star") = 0.1, py::arg("tau_e") = 20.0,
      py::arg("delta_omega") = 0.005, py::arg("tau_omega") = 500.0,
      py::arg("n_trials") = 100, py::arg("base_seed") = 1, py::arg("t_probe") = 40.0,
      py::arg("span") = mhz(0.05), py::arg("points") = 17, py::arg("n_threads") = 0,
      py::call_guard<py::gil_scoped_release>());

  // config-driven execution, same engine as the CLI
  m.def(
      "run_config",
      [](const std::filesystem::path& path, const std::string& output_dir, int n_threads) {
        RunConfig config = load_config_any(path);
        if (!output_dir.empty()) config.output_dir = output_dir;
        if (n_threads > 0) {
          config.n_threads = n_threads;
          config.dephasing.n_threads = n_threads;
          config.sensing.n_threads = n_threads;
          config.spectrum.sensing.n_threads = n_threads;
        }
        const RunOutputs outputs = run_experiment(config);
        py::list files;
        for (const auto& f : outputs.csv_files) files.append(f.string());
        py::dict d;
        d["csv_files"] = files;
        d["summary_file"] = outputs.summary_file.string();
        return d;
      },
      py::arg("path"), py::arg("output_dir") = std::string(), py::arg("n_threads") = 0,
      py::call_guard<py::gil_scoped_release>());

  m.def("fit_coherence",
        [](const std::vector<double>& time, const std::vector<double>& trace,
           const std::string& method) {
          const FitMethod fm =
              method == "stretched_exp_fit" ? FitMethod::StretchedExp : FitMethod::Envelope1e;
          return fit_to_dict(fit_coherence(time, trace, fm));
        },
        py::arg("time"), py::arg("trace"), py::arg("method") = "envelope_1e");
}
