#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stlight/config.hpp"
#include "stlight/error.hpp"
#include "stlight/oracle.hpp"
#include "stlight/scenario.hpp"

namespace py = pybind11;
using namespace stlight;

namespace {

MediumModel medium_of(const std::string& config_text) { return build_medium(parse_config(config_text).medium); }

py::dict coefficients_dict(const Coefficients& c) {
  py::dict d;
  d["alpha_plus"] = c.alpha_plus;
  d["alpha_minus"] = c.alpha_minus;
  d["eta"] = c.eta;
  d["alpha_tilde"] = c.alpha_tilde;
  d["gamma2_prime"] = c.gamma2_prime;
  d["omega_sigma_sq"] = c.omega_sigma_sq;
  d["tau_rate"] = c.tau_rate;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Two-colour stationary light simulator";

  static py::exception<stlight::Error> exc(mod, "StlightError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const stlight::Error& e) {
      py::object err = py::reinterpret_borrow<py::object>(exc.ptr())(e.what());
      err.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(exc.ptr(), err.ptr());
    }
  });

  mod.def("list_presets", [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& p : list_presets()) out.emplace_back(p.name, p.description);
    return out;
  });
  mod.def("preset_config", &preset_config, py::arg("name"));
  mod.def("echo_config", [](const std::string& text) { return echo_config(parse_config(text)); },
          py::arg("text"), "Parse a config and return every effective value.");

  mod.def(
      "check_config",
      [](const std::string& text) {
        py::list out;
        for (const auto& c : check_config(parse_config(text))) {
          py::dict d;
          d["name"] = c.name;
          d["passed"] = c.passed;
          d["hard"] = c.hard;
          d["margin"] = c.margin;
          d["detail"] = c.detail;
          out.append(d);
        }
        return out;
      },
      py::arg("text"));

  mod.def(
      "run_summary",
      [](const std::string& text, const std::string& out_dir, int snapshot_every) {
        const auto cfg = parse_config(text);
        RunResult r;
        {
          py::gil_scoped_release release;
          r = execute(cfg);
          if (!out_dir.empty()) write_outputs(r, out_dir, snapshot_every > 0 ? snapshot_every : cfg.output.snapshot_every);
        }
        return r.summary.dump();
      },
      py::arg("text"), py::arg("out_dir") = "", py::arg("snapshot_every") = 0);

  // Closed forms. Control amplitudes are in units of Omega+(0), as in config files.
  mod.def(
      "group_velocity",
      [](double omega_plus, double omega_minus, const std::string& text) {
        const auto m = medium_of(text);
        return group_velocity(m, omega_plus * m.omega_plus0, omega_minus * m.omega_plus0);
      },
      py::arg("omega_plus"), py::arg("omega_minus"), py::arg("config") = "");
  mod.def(
      "spreading_rate",
      [](double omega_plus, double omega_minus, const std::string& text) {
        const auto m = medium_of(text);
        return spreading_rate(m, omega_plus * m.omega_plus0, omega_minus * m.omega_plus0);
      },
      py::arg("omega_plus"), py::arg("omega_minus"), py::arg("config") = "");
  mod.def(
      "coefficients",
      [](double omega_plus, double omega_minus, const std::string& text) {
        const auto m = medium_of(text);
        return coefficients_dict(coefficients(m, omega_plus * m.omega_plus0, omega_minus * m.omega_plus0));
      },
      py::arg("omega_plus"), py::arg("omega_minus"), py::arg("config") = "");
  mod.def(
      "conversion_probability",
      [](double hold_time, const std::string& text) {
        const auto c = parse_config(text);
        return conversion_probability(build_medium(c.medium), c.pulse, hold_time);
      },
      py::arg("hold_time"), py::arg("config") = "");

  mod.def("format_number", &format_number);
}
