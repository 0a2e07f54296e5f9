// Python bindings for the core operations: rule/noise construction, forward
// simulation, perfect sampling, certificates, spectral coefficients, and the
// invariant-measure search.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pca/diagnostics.hpp"
#include "pca/fourier.hpp"
#include "pca/invariant.hpp"

namespace py = pybind11;
using namespace pca;

namespace {

Configuration make_config(const Alphabet& a, std::vector<std::int64_t> sides,
                          std::vector<int> cells) {
    Configuration x;
    x.alphabet = a;
    x.geom = Geometry{true, std::move(sides), -1};
    if (cells.size() != x.geom.cell_count())
        throw std::invalid_argument("cell count does not match geometry");
    x.cells.assign(cells.begin(), cells.end());
    return x;
}

std::vector<int> config_cells(const Configuration& x) {
    return std::vector<int>(x.cells.begin(), x.cells.end());
}

}  // namespace

PYBIND11_MODULE(_pcanoise, m) {
    m.doc() = "probabilistic cellular automata: simulation, perfect sampling, "
              "and spectral/entropy analysis";

    py::class_<Alphabet>(m, "Alphabet")
        .def_static("binary", &Alphabet::binary)
        .def_static("plain", &Alphabet::plain)
        .def_static("cyclic", &Alphabet::cyclic)
        .def_readonly("size", &Alphabet::size);

    py::class_<SiteSet>(m, "SiteSet")
        .def_static("line", &SiteSet::line)
        .def_property_readonly("sites",
                               [](const SiteSet& s) { return s.sites; });

    py::class_<Configuration>(m, "Configuration")
        .def(py::init(&make_config), py::arg("alphabet"), py::arg("sides"),
             py::arg("cells"))
        .def_property_readonly("cells", &config_cells);

    py::class_<LocalRule>(m, "LocalRule")
        .def_property_readonly("table",
                               [](const LocalRule& f) { return f.table; })
        .def_property_readonly(
            "offsets", [](const LocalRule& f) { return f.nbhd.offsets; })
        .def_property_readonly(
            "alphabet_size", [](const LocalRule& f) { return f.alphabet.size; });
    m.def("build_zoo",
          [](const std::string& name, const std::map<std::string, double>& params) {
              return build_zoo(name, params);
          },
          py::arg("name"), py::arg("params") = std::map<std::string, double>{});

    py::class_<NoiseKernel>(m, "NoiseKernel")
        .def_static("memoryless_uniform", &NoiseKernel::memoryless_uniform)
        .def_static("memoryless", &NoiseKernel::memoryless)
        .def_static("additive", &NoiseKernel::additive)
        .def_static("permutation", &NoiseKernel::permutation)
        .def_static("birth_death", &NoiseKernel::birth_death)
        .def_static("explicit_matrix", &NoiseKernel::explicit_matrix)
        .def("matrix", &NoiseKernel::matrix)
        .def("theta", &NoiseKernel::theta);
    m.def("flip", [](double eps) {
        return NoiseKernel::additive(Alphabet::binary(), {1 - eps, eps});
    });

    py::class_<PcaRule>(m, "PcaRule");
    m.def("compose_pca", &compose_pca);
    m.def("p_question", &p_question);

    py::class_<Certificate>(m, "Certificate")
        .def_readonly("p_question", &Certificate::p_q)
        .def_readonly("bound", &Certificate::bound)
        .def_readonly("bound_kind", &Certificate::bound_kind)
        .def_readonly("ergodic", &Certificate::ergodic);
    m.def("certify", &certify);

    py::class_<RandomField>(m, "RandomField")
        .def(py::init<std::uint64_t>())
        .def("derive", &RandomField::derive)
        .def("uniform",
             [](const RandomField& f, std::int64_t t, const Coord& site,
                std::uint64_t channel) { return f.uniform(t, site, channel); },
             py::arg("t"), py::arg("site"), py::arg("channel") = 0);

    m.def("simulate",
          [](const PcaRule& phi, const Configuration& x0, std::int64_t steps,
             std::uint64_t seed) {
              UpdateFunction u = build_update_function(phi);
              RandomField field(seed);
              Configuration x = x0;
              std::vector<std::vector<int>> frames{config_cells(x)};
              for (std::int64_t t = 0; t < steps; ++t) {
                  x = step(phi, u, x, field, t);
                  frames.push_back(config_cells(x));
              }
              return frames;
          },
          py::arg("pca"), py::arg("init"), py::arg("steps"), py::arg("seed"));

    m.def("cftp_sample",
          [](const PcaRule& phi, const std::vector<std::int64_t>& window,
             std::uint64_t seed, std::int64_t max_horizon) {
              CftpResult r = cftp_sample(phi, SiteSet::line(window),
                                         RandomField(seed), max_horizon);
              return py::make_tuple(r.pattern, r.horizon);
          },
          py::arg("pca"), py::arg("window"), py::arg("seed"),
          py::arg("max_horizon") = std::int64_t{1} << 20);

    m.def("exact_transition_matrix",
          [](const PcaRule& phi, std::int64_t torus) {
              std::vector<double> P =
                  exact_transition_matrix(phi, Geometry{true, {torus}, -1});
              return P;
          });
    m.def("stationary_distribution",
          [](const std::vector<double>& P, std::size_t n) {
              return stationary_distribution(P, n);
          });

    m.def("contraction_coefficient",
          [](const PcaRule& phi, const std::string& basis) {
              auto b = basis == "fourier" ? CharacterObservable::Basis::fourier
                                          : CharacterObservable::Basis::moebius;
              return contraction_coefficient(phi, b);
          });
    m.def("single_index_seminorm",
          [](double p, double q, int n, const std::string& basis) {
              auto b = basis == "fourier" ? CharacterObservable::Basis::fourier
                                          : CharacterObservable::Basis::moebius;
              return single_index_seminorm(p, q, n, b);
          });

    m.def("approximate_invariant",
          [](const PcaRule& phi, const std::vector<std::int64_t>& window,
             const std::vector<int>& pattern, int n, std::uint64_t budget) {
              InvariantResult r = approximate_invariant(
                  phi, SiteSet::line(window), pattern, n, budget);
              return py::make_tuple(r.value, r.m_final, r.k,
                                    r.candidates_checked);
          },
          py::arg("pca"), py::arg("window"), py::arg("pattern"), py::arg("n"),
          py::arg("budget") = std::uint64_t{10000000});

    m.def("percolation_survival",
          [](double p, const std::vector<std::int64_t>& offsets,
             std::int64_t horizon, std::size_t trials, std::uint64_t seed) {
              return percolation_survival(p, Neighborhood::line(offsets),
                                          horizon, trials, RandomField(seed));
          });
}
