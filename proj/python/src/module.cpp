#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "dualwave/dynamics.hpp"
#include "dualwave/eos.hpp"
#include "dualwave/errors.hpp"
#include "dualwave/fieldmaps.hpp"
#include "dualwave/pseudoforce.hpp"
#include "dualwave/scales.hpp"

namespace py = pybind11;
using namespace dualwave;

namespace {

py::array_t<double> to_array(const std::vector<double>& v)
{
    py::array_t<double> out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())});
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

template <class T>
py::array_t<T> grid_array(const FieldGrid& g, const std::vector<T>& v)
{
    py::array_t<T> out({g.spec.ny, g.spec.nx});
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

// (ny, nx, 2) view of a vector channel.
py::array_t<double> vector_array(const FieldGrid& g, const std::vector<Vec2>& v)
{
    py::array_t<double> out({g.spec.ny, g.spec.nx, std::size_t{2}});
    double* p = out.mutable_data();
    for (const Vec2& e : v) {
        *p++ = e.x;
        *p++ = e.y;
    }
    return out;
}

Branch parse_branch(const std::string& b)
{
    if (b == "outgoing") {
        return Branch::outgoing;
    }
    if (b == "incoming") {
        return Branch::incoming;
    }
    throw DomainError("branch must be 'outgoing' or 'incoming', got '" + b + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Compiled core of the dualwave package.";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    auto numerical = py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
    py::register_exception<SingularityError>(m, "SingularityError", numerical.ptr());

    py::class_<PhysicalScales>(m, "PhysicalScales")
        .def_readonly("n0", &PhysicalScales::n0)
        .def_readonly("T", &PhysicalScales::T)
        .def_readonly("E_p", &PhysicalScales::E_p)
        .def_readonly("omega_p", &PhysicalScales::omega_p)
        .def_readonly("k_p", &PhysicalScales::k_p)
        .def_readonly("l_p", &PhysicalScales::l_p)
        .def_readonly("v_p", &PhysicalScales::v_p);
    m.def("derive_scales", &derive_scales, py::arg("n0"), py::arg("T") = 300.0);

    m.def("density_of_mu", &density_of_mu, py::arg("mu"), py::arg("T") = 300.0);
    m.def("pressure_of_mu", &pressure_of_mu, py::arg("mu"), py::arg("T") = 300.0);
    m.def("mu_of_density", &mu_of_density, py::arg("n0"), py::arg("T") = 300.0);
    m.def("fermi_energy", &fermi_energy, py::arg("n0"));

    py::class_<Orbital>(m, "Orbital")
        .def_readonly("E", &Orbital::E)
        .def_readonly("alpha", &Orbital::alpha)
        .def_readonly("k1", &Orbital::k1)
        .def_readonly("k2", &Orbital::k2)
        .def("beat_wavelength", &Orbital::beat_wavelength)
        .def("__repr__", [](const Orbital& o) {
            return "Orbital(E=" + std::to_string(o.E) + ", k1=" + std::to_string(o.k1) +
                   ", k2=" + std::to_string(o.k2) + ")";
        });
    py::class_<BoundaryConstants>(m, "BoundaryConstants")
        .def(py::init<double, double>(), py::arg("Phi0") = 1.0, py::arg("Psi0") = 1.0)
        .def_readwrite("Phi0", &BoundaryConstants::Phi0)
        .def_readwrite("Psi0", &BoundaryConstants::Psi0);

    m.def("eval_dispersion", py::vectorize(&eval_dispersion), py::arg("k"));
    m.def("make_orbital", &make_orbital, py::arg("E"));

    m.def(
        "eval_1d",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> x, const Orbital& o,
           const BoundaryConstants& bc) {
            std::vector<double> phi(static_cast<std::size_t>(x.size()));
            std::vector<double> psi(phi.size());
            const double* in = x.data();
            for (std::size_t i = 0; i < phi.size(); ++i) {
                const RealFieldPair f = eval_1d(in[i], bc, o);
                phi[i] = f.Phi;
                psi[i] = f.Psi;
            }
            return py::make_tuple(to_array(phi), to_array(psi));
        },
        py::arg("x"), py::arg("orbital"), py::arg("bc") = BoundaryConstants{},
        "Closed-form 1D solution; returns (Phi, Psi) arrays.");

    m.def(
        "eval_dipole",
        [](double x, double y, double z, const Orbital& o, double a, double Q, const std::string& branch) {
            const ComplexFieldPair f = eval_dipole({x, y, z}, make_dipole(o, a, Q, parse_branch(branch)));
            return py::make_tuple(f.Phi, f.Psi);
        },
        py::arg("x"), py::arg("y"), py::arg("z"), py::arg("orbital"), py::arg("a"), py::arg("Q") = 1.0,
        py::arg("branch") = "outgoing", "Two-pole field at a point; returns (Phi, Psi).");

    m.def(
        "evaluate_grid",
        [](const Orbital& o, double a, double Q, std::pair<double, double> xr, std::pair<double, double> yr,
           std::size_t nx, std::size_t ny, double z, unsigned threads) {
            GridSpec spec;
            spec.domain = {xr.first, xr.second, yr.first, yr.second};
            spec.nx = nx;
            spec.ny = ny;
            spec.z = z;
            FieldGrid g;
            {
                py::gil_scoped_release release;
                g = evaluate_grid(make_dipole(o, a, Q), spec, threads);
            }
            py::dict d;
            std::vector<double> xs(nx);
            std::vector<double> ys(ny);
            for (std::size_t i = 0; i < nx; ++i) {
                xs[i] = g.x(i);
            }
            for (std::size_t j = 0; j < ny; ++j) {
                ys[j] = g.y(j);
            }
            d["x"] = to_array(xs);
            d["y"] = to_array(ys);
            d["Psi"] = grid_array(g, g.Psi);
            d["Phi"] = grid_array(g, g.Phi);
            d["n"] = grid_array(g, g.n);
            d["J"] = vector_array(g, g.J);
            d["Jd"] = vector_array(g, g.Jd);
            d["Jt"] = vector_array(g, g.Jt);
            d["mask"] = grid_array(g, g.mask);
            return d;
        },
        py::arg("orbital"), py::arg("a"), py::arg("Q") = 1.0, py::arg("x_range") = std::make_pair(-20.0, 20.0),
        py::arg("y_range") = std::make_pair(-20.0, 20.0), py::arg("nx") = 512, py::arg("ny") = 512,
        py::arg("z") = 0.0, py::arg("threads") = 0,
        "Dipole field maps as numpy arrays indexed [j, i] (rows are y).");

    m.def(
        "fringe_spectrum",
        [](py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast> s, double spacing) {
            const auto* p = s.data();
            const SpectrumPeak peak = fringe_spectrum(std::vector<complex>(p, p + s.size()), spacing);
            return py::make_tuple(peak.frequency, peak.bin_width);
        },
        py::arg("samples"), py::arg("spacing"), "Dominant angular frequency and bin width of a probe signal.");

    py::class_<Trajectory>(m, "Trajectory")
        .def_property_readonly("t", [](const Trajectory& t) { return to_array(t.times); })
        .def_property_readonly("x", [](const Trajectory& t) { return to_array(t.positions); })
        .def_property_readonly("v", [](const Trajectory& t) { return to_array(t.velocities); })
        .def_readonly("energy_drift", &Trajectory::energy_drift)
        .def_readonly("x_min", &Trajectory::x_min)
        .def_readonly("x_max", &Trajectory::x_max)
        .def_readonly("fast_period", &Trajectory::fast_period);

    m.def(
        "integrate_field_trajectory",
        [](const Orbital& o, double v0, double x0, double Gamma, double Q, double t_end, double h,
           std::size_t stride, const BoundaryConstants& bc) {
            py::gil_scoped_release release;
            return integrate_field_trajectory({Gamma, Q, x0, v0}, bc, o, t_end, h, stride);
        },
        py::arg("orbital"), py::arg("v0"), py::arg("x0") = 0.0, py::arg("Gamma") = 1.0, py::arg("Q") = 1.0,
        py::arg("t_end") = 200.0, py::arg("h") = 1e-3, py::arg("stride") = 100,
        py::arg("bc") = BoundaryConstants{});
    m.def(
        "classify_trajectory",
        [](const Trajectory& t, double window) { return std::string(to_string(classify_trajectory(t, window))); },
        py::arg("trajectory"), py::arg("window"), "'localized' or 'propagating'.");

    m.def(
        "trace_bohmian_paths",
        [](const Orbital& o, double a, std::vector<std::pair<double, double>> seeds,
           std::pair<double, double> xr, std::pair<double, double> yr, std::size_t max_steps) {
            const DipoleConfig cfg = make_dipole(o, a);
            std::vector<Vec2> pts;
            for (const auto& [x, y] : seeds) {
                pts.push_back({x, y});
            }
            StreamlineOptions opt = dipole_streamline_options(cfg);
            opt.max_steps = max_steps;
            const auto lines = trace_bohmian_paths(cfg, pts, {xr.first, xr.second, yr.first, yr.second}, opt);
            py::list out;
            for (const Streamline& s : lines) {
                py::array_t<double> xy({s.points.size(), std::size_t{2}});
                double* p = xy.mutable_data();
                for (const Vec2& q : s.points) {
                    *p++ = q.x;
                    *p++ = q.y;
                }
                out.append(py::make_tuple(xy, std::string(to_string(s.terminated_by))));
            }
            return out;
        },
        py::arg("orbital"), py::arg("a"), py::arg("seeds"), py::arg("x_range") = std::make_pair(-20.0, 20.0),
        py::arg("y_range") = std::make_pair(-20.0, 20.0), py::arg("max_steps") = 4000,
        "List of (points[N, 2], termination) pairs.");

    py::class_<ConservationReport>(m, "ConservationReport")
        .def_readonly("exclusion_radius", &ConservationReport::exclusion_radius)
        .def_readonly("nodes_used", &ConservationReport::nodes_used)
        .def_readonly("max_div_Jt", &ConservationReport::max_div_Jt)
        .def_readonly("max_div_J", &ConservationReport::max_div_J)
        .def_readonly("max_div_Jt_fine", &ConservationReport::max_div_Jt_fine)
        .def_readonly("discretization_estimate", &ConservationReport::discretization_estimate)
        .def_readonly("max_source", &ConservationReport::max_source)
        .def_readonly("max_identity_error", &ConservationReport::max_identity_error);
    m.def(
        "conservation_check",
        [](const Orbital& o, double a, std::pair<double, double> xr, std::size_t n, double exclusion_radius) {
            GridSpec spec;
            spec.domain = {xr.first, xr.second, xr.first, xr.second};
            spec.nx = spec.ny = n;
            py::gil_scoped_release release;
            return conservation_check(make_dipole(o, a), spec, exclusion_radius);
        },
        py::arg("orbital"), py::arg("a"), py::arg("range") = std::make_pair(-20.0, 20.0), py::arg("n") = 512,
        py::arg("exclusion_radius") = 1.0);

}
