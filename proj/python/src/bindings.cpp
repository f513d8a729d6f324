#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "shearflow/diagnostics.hpp"
#include "shearflow/elliptic.hpp"
#include "shearflow/equilibrium.hpp"
#include "shearflow/experiment.hpp"
#include "shearflow/geometry.hpp"
#include "shearflow/ops.hpp"
#include "shearflow/verify.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace shearflow;

namespace {

// numpy (N3, N2, N1) <-> VolumeField, (N2, N1) <-> SurfaceField
SurfaceField surface_from_array(const Grid& g, py::array_t<double> a) {
  auto buf = a.request();
  if (buf.ndim != 2 || buf.shape[0] != g.N2() || buf.shape[1] != g.N1())
    throw std::invalid_argument("expected array of shape (N2, N1)");
  SurfaceField f(g);
  auto ph = f.phys_mut();
  auto r = a.unchecked<2>();
  for (int i2 = 0; i2 < g.N2(); ++i2)
    for (int i1 = 0; i1 < g.N1(); ++i1)
      ph[(size_t)i2 * g.N1() + i1] = r(i2, i1);
  return f;
}

py::array_t<double> surface_to_array(const SurfaceField& f) {
  const Grid& g = f.grid();
  py::array_t<double> a({g.N2(), g.N1()});
  auto w = a.mutable_unchecked<2>();
  auto ph = f.phys();
  for (int i2 = 0; i2 < g.N2(); ++i2)
    for (int i1 = 0; i1 < g.N1(); ++i1) w(i2, i1) = ph[(size_t)i2 * g.N1() + i1];
  return a;
}

VolumeField volume_from_array(const Grid& g, py::array_t<double> a) {
  auto buf = a.request();
  if (buf.ndim != 3 || buf.shape[0] != g.N3() || buf.shape[1] != g.N2() ||
      buf.shape[2] != g.N1())
    throw std::invalid_argument("expected array of shape (N3, N2, N1)");
  VolumeField f(g);
  auto ph = f.phys_mut();
  auto r = a.unchecked<3>();
  for (int l = 0; l < g.N3(); ++l)
    for (int i2 = 0; i2 < g.N2(); ++i2)
      for (int i1 = 0; i1 < g.N1(); ++i1)
        ph[((size_t)l * g.N2() + i2) * g.N1() + i1] = r(l, i2, i1);
  return f;
}

py::array_t<double> volume_to_array(const VolumeField& f) {
  const Grid& g = f.grid();
  py::array_t<double> a({g.N3(), g.N2(), g.N1()});
  auto w = a.mutable_unchecked<3>();
  auto ph = f.phys();
  for (int l = 0; l < g.N3(); ++l)
    for (int i2 = 0; i2 < g.N2(); ++i2)
      for (int i1 = 0; i1 < g.N1(); ++i1)
        w(l, i2, i1) = ph[((size_t)l * g.N2() + i2) * g.N1() + i1];
  return a;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "pseudo-spectral free-boundary shear flow solver";

  py::class_<Grid>(m, "Grid")
      .def_property_readonly("L1", &Grid::L1)
      .def_property_readonly("L2", &Grid::L2)
      .def_property_readonly("b", &Grid::b)
      .def_property_readonly("N1", &Grid::N1)
      .def_property_readonly("N2", &Grid::N2)
      .def_property_readonly("N3", &Grid::N3)
      .def_property_readonly(
          "x3", [](const Grid& g) {
            return std::vector<double>(g.x3().begin(), g.x3().end());
          });

  m.def("make_grid",
        [](double L1, double L2, double b, int N1, int N2, int N3,
           int max_order) { return make_grid(L1, L2, b, N1, N2, N3, max_order); },
        py::arg("L1"), py::arg("L2"), py::arg("b"), py::arg("N1"),
        py::arg("N2"), py::arg("N3"), py::arg("max_order") = 8);

  py::class_<Params>(m, "Params")
      .def(py::init<>())
      .def_readwrite("sigma", &Params::sigma)
      .def_readwrite("gamma", &Params::gamma)
      .def_readwrite("g", &Params::g)
      .def_readwrite("mu", &Params::mu)
      .def_readwrite("P_ext", &Params::P_ext);

  m.def("poisson_extend",
        [](const Grid& g, py::array_t<double> eta) {
          return volume_to_array(poisson_extend(surface_from_array(g, eta)));
        },
        py::arg("grid"), py::arg("eta"),
        "harmonic extension of a surface field into the slab");

  m.def("mean_curvature",
        [](const Grid& g, py::array_t<double> eta) {
          return surface_to_array(mean_curvature(surface_from_array(g, eta)));
        },
        py::arg("grid"), py::arg("eta"));

  m.def("solve_capillary",
        [](const Grid& g, py::array_t<double> f, double sigma, double grav) {
          return surface_to_array(
              solve_capillary(surface_from_array(g, f), sigma, grav));
        },
        py::arg("grid"), py::arg("f"), py::arg("sigma"), py::arg("g") = 1.0);

  m.def("sobolev_norm_surface",
        [](const Grid& g, py::array_t<double> f, double s) {
          return sobolev_norm_surface(surface_from_array(g, f), s);
        },
        py::arg("grid"), py::arg("f"), py::arg("s"));

  m.def("sobolev_norm_volume",
        [](const Grid& g, py::array_t<double> f, int k) {
          return sobolev_norm_volume(volume_from_array(g, f), k);
        },
        py::arg("grid"), py::arg("f"), py::arg("k"));

  m.def("equilibrium_residual",
        [](const Grid& g, const Params& p) {
          auto r = equilibrium_residual(p, g);
          return py::dict("momentum"_a = r.momentum,
                          "divergence"_a = r.divergence, "stress"_a = r.stress,
                          "kinematic"_a = r.kinematic);
        },
        py::arg("grid"), py::arg("params"));

  m.def("solve_stokes_stress",
        [](const Grid& g, const Params& p, py::array_t<double> f1x,
           py::array_t<double> f1y, py::array_t<double> f1z,
           py::array_t<double> f2, py::array_t<double> f3x,
           py::array_t<double> f3y, py::array_t<double> f3z) {
          VectorVolumeField f1(g);
          f1.x = volume_from_array(g, f1x);
          f1.y = volume_from_array(g, f1y);
          f1.z = volume_from_array(g, f1z);
          VectorSurfaceField f3{surface_from_array(g, f3x),
                                surface_from_array(g, f3y),
                                surface_from_array(g, f3z)};
          auto sol = solve_stokes_stress(f1, volume_from_array(g, f2), f3, p, g);
          return py::dict(
              "u1"_a = volume_to_array(sol.u.x), "u2"_a = volume_to_array(sol.u.y),
              "u3"_a = volume_to_array(sol.u.z), "p"_a = volume_to_array(sol.p),
              "r_momentum"_a = sol.r_momentum, "r_div"_a = sol.r_div,
              "r_bc_top"_a = sol.r_bc_top, "r_bc_bottom"_a = sol.r_bc_bottom);
        });

  m.def("simulate",
        [](const std::string& config_json) {
          RunConfig cfg = parse_config(config_json);
          RunResult res = run_experiment(cfg);
          py::dict out;
          out["termination"] = res.term.reason_str();
          out["t_last"] = res.term.t_last;
          out["mean_drift"] = res.mean_drift;
          std::vector<double> t, E, D;
          for (const auto& r : res.reports) {
            t.push_back(r.t);
            E.push_back(r.E_full);
            D.push_back(r.D_full);
          }
          out["t"] = t;
          out["E_full"] = E;
          out["D_full"] = D;
          if (res.fit_exp)
            out["fit_exponential"] =
                py::dict("rate"_a = res.fit_exp->rate, "r2"_a = res.fit_exp->r2);
          return out;
        },
        py::arg("config_json"),
        "run one experiment from a JSON config string");

  m.def("fit_decay",
        [](std::vector<double> t, std::vector<double> E, const std::string& model,
           double t_min) {
          auto mm = model == "alg" ? DecayModel::algebraic
                                   : DecayModel::exponential;
          auto f = fit_decay(t, E, mm, t_min);
          return py::dict("rate"_a = f.rate, "r2"_a = f.r2,
                          "n_samples"_a = f.n_samples);
        },
        py::arg("t"), py::arg("E"), py::arg("model") = "exp",
        py::arg("t_min") = 0.0);

  m.def("version", []() { return version_string(); });
}
