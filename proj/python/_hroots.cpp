#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hroots/cli.hpp"
#include "hroots/engine.hpp"
#include "hroots/error.hpp"
#include "hroots/oracle.hpp"
#include "hroots/series.hpp"

namespace py = pybind11;
using namespace hroots;

namespace {

// Coefficients from Python: numbers (int, float, complex) or decimal strings,
// which are parsed at full precision instead of going through a double.
Polynomial to_polynomial(const py::sequence& coeffs, mp::Bits bits) {
  std::vector<mp::Complex> out;
  for (const auto& c : coeffs) {
    if (py::isinstance<py::str>(c)) {
      out.emplace_back(mp::Real::parse(c.cast<std::string>(), bits));
    } else if (py::isinstance<py::tuple>(c) && py::len(c) == 2) {
      auto t = c.cast<py::tuple>();
      auto part = [&](const py::handle& h) {
        return py::isinstance<py::str>(h) ? mp::Real::parse(h.cast<std::string>(), bits)
                                         : mp::Real(h.cast<double>(), bits);
      };
      out.emplace_back(part(t[0]), part(t[1]));
    } else {
      out.emplace_back(c.cast<std::complex<double>>(), bits);
    }
  }
  return make_polynomial(std::move(out));
}

Side to_side(const std::string& s) {
  if (auto side = cli::parse_side(s)) return *side;
  throw py::value_error("side must be 'taylor' or 'laurent'");
}

SolverConfig make_config(int precision, long k_max, double tol, std::uint64_t seed, int max_shifts,
                         int max_precision) {
  SolverConfig c;
  c.precision_bits = precision;
  c.k_max = k_max;
  c.tol = tol;
  c.shift_seed = seed;
  c.max_shifts = max_shifts;
  c.max_precision_bits = max_precision;
  return c;
}

std::vector<std::complex<double>> to_std(const std::vector<mp::Complex>& v) {
  std::vector<std::complex<double>> out;
  out.reserve(v.size());
  for (const auto& z : v) out.push_back(z.to_std());
  return out;
}

}  // namespace

PYBIND11_MODULE(_hroots, m) {
  m.doc() = "Polynomial roots from Hankel determinants of the P'/P expansions";

  static py::exception<Error> error(m, "HrootsError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::handle(error.ptr())(e.what());
      inst.attr("code") = std::string(to_string(e.code()));
      inst.attr("stage") = e.stage();
      inst.attr("k") = e.index() ? py::cast(*e.index()) : py::none();
      PyErr_SetObject(error.ptr(), inst.ptr());
    }
  });

  py::class_<RootEntry>(m, "Root")
      .def_property_readonly("value", [](const RootEntry& e) { return e.root.to_std(); })
      .def_property_readonly("re", [](const RootEntry& e) { return e.root.real().to_string(); })
      .def_property_readonly("im", [](const RootEntry& e) { return e.root.imag().to_string(); })
      .def_readonly("multiplicity", &RootEntry::multiplicity)
      .def_readonly("residual", &RootEntry::residual)
      .def_property_readonly("provenance", [](const RootEntry& e) { return std::string(to_string(e.provenance)); })
      .def("__repr__", [](const RootEntry& e) {
        std::ostringstream os;
        os << "Root(" << e.root.to_std() << ", multiplicity=" << e.multiplicity << ")";
        return os.str();
      });

  py::class_<RootSet>(m, "RootSet")
      .def_readonly("roots", &RootSet::entries)
      .def_readonly("zero_multiplicity", &RootSet::zero_multiplicity)
      .def_readonly("shifts_used", &RootSet::shifts_used)
      .def_property_readonly("distinct_count", &RootSet::distinct_count)
      .def("values", [](const RootSet& s) {
        // Every root repeated by multiplicity, zeros included.
        std::vector<std::complex<double>> out;
        for (const auto& e : s.entries)
          for (int i = 0; i < e.multiplicity; ++i) out.push_back(e.root.to_std());
        out.insert(out.end(), static_cast<std::size_t>(s.zero_multiplicity), 0.0);
        return out;
      });

  m.def(
      "solve",
      [](const py::sequence& coeffs, int precision, long k_max, double tol, std::uint64_t seed, int max_shifts,
         int max_precision) {
        const auto p = to_polynomial(coeffs, precision);
        const auto cfg = make_config(precision, k_max, tol, seed, max_shifts, max_precision);
        py::gil_scoped_release nogil;
        return solve(p, cfg);
      },
      py::arg("coeffs"), py::kw_only(), py::arg("precision") = 256, py::arg("k_max") = 256,
      py::arg("tol") = 1e-12, py::arg("seed") = 0, py::arg("max_shifts") = 5, py::arg("max_precision") = 4096,
      "Roots with multiplicities; coefficients highest power first.");

  m.def(
      "taylor_coeffs",
      [](const py::sequence& coeffs, std::size_t count, int precision) {
        return to_std(taylor_coeffs(to_polynomial(coeffs, precision), count));
      },
      py::arg("coeffs"), py::arg("count"), py::kw_only(), py::arg("precision") = 256);

  m.def(
      "laurent_coeffs",
      [](const py::sequence& coeffs, std::size_t count, int precision) {
        return to_std(laurent_coeffs(to_polynomial(coeffs, precision), count));
      },
      py::arg("coeffs"), py::arg("count"), py::kw_only(), py::arg("precision") = 256);

  m.def(
      "trace",
      [](const py::sequence& coeffs, const std::string& side, int r, long k_max, int precision) {
        const auto p = to_polynomial(coeffs, precision);
        SolverConfig cfg;
        cfg.precision_bits = precision;
        cfg.k_max = k_max;
        const RatioTrace t = adaptive_trace(p, to_side(side), r, 0, k_max, cfg, false);
        py::dict out;
        std::vector<long> ks;
        std::vector<std::complex<double>> ratios;
        for (const auto& pt : t.points) {
          ks.push_back(pt.k);
          ratios.push_back(pt.ratio.to_std());
        }
        out["k"] = ks;
        out["ratio"] = ratios;
        out["precision"] = t.precision;
        try {
          const TraceVerdict v = classify(t, cfg);
          out["verdict"] = to_string(v.status);
          out["limit"] = v.limit.to_std();
          out["q_estimate"] = v.q_estimate;
          out["error_estimate"] = v.error_estimate;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::TooFewPoints) throw;
          out["verdict"] = "too_few_points";
        }
        return out;
      },
      py::arg("coeffs"), py::kw_only(), py::arg("side") = "taylor", py::arg("r") = 1, py::arg("k_max") = 256,
      py::arg("precision") = 256);

  m.def(
      "independent_roots",
      [](const py::sequence& coeffs, int precision) {
        return to_std(oracle::independent_roots(to_polynomial(coeffs, precision)));
      },
      py::arg("coeffs"), py::kw_only(), py::arg("precision") = 256,
      "Durand-Kerner roots, for cross-checking solve().");

  m.def(
      "run",
      [](const std::string& command, const std::string& input, const std::string& format, bool exact,
         const std::string& side, int r, long count, std::uint64_t seed, int precision, long k_max) {
        cli::JobSpec job;
        const auto cmd = cli::parse_command(command);
        const auto fmt = cli::parse_format(format);
        if (!cmd) throw py::value_error("unknown command: " + command);
        if (!fmt) throw py::value_error("unknown format: " + format);
        job.command = *cmd;
        job.format = *fmt;
        job.input = input;
        job.exact = exact;
        job.side = to_side(side);
        job.r = r;
        job.count = count;
        job.config.shift_seed = seed;
        job.config.precision_bits = precision;
        job.config.k_max = k_max;
        std::ostringstream out, err;
        int status;
        {
          py::gil_scoped_release nogil;
          status = cli::run(job, out, err);
        }
        return py::make_tuple(status, out.str(), err.str());
      },
      py::arg("command"), py::arg("input"), py::kw_only(), py::arg("format") = "json", py::arg("exact") = false,
      py::arg("side") = "taylor", py::arg("r") = 1, py::arg("count") = 16, py::arg("seed") = 0,
      py::arg("precision") = 256, py::arg("k_max") = 256,
      "Runs a CLI job in-process; returns (status, stdout, stderr).");
}
