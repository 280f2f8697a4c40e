// Thin pybind11 layer; structured arguments travel as JSON strings and the
// Python package wraps them.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "dstree/bgw.hpp"
#include "dstree/commands.hpp"
#include "dstree/continuum.hpp"
#include "dstree/enumeration.hpp"
#include "dstree/error.hpp"
#include "dstree/glue.hpp"
#include "dstree/io.hpp"
#include "dstree/laws.hpp"
#include "dstree/metric.hpp"

namespace py = pybind11;
using namespace dstree;

namespace {

using Matrix = std::vector<std::vector<double>>;

Json parse_or_null(const std::string& s) { return s.empty() ? Json() : Json::parse(s); }

Conditioning conditioning_of(const std::string& mode, std::uint64_t n) {
  if (mode == "vertices") return Conditioning::vertices(n);
  if (mode == "leaves") return Conditioning::leaves(n);
  fail(Errc::Config, "conditioning must be 'vertices' or 'leaves'");
}

Matrix square(const std::vector<double>& flat, std::size_t n) {
  Matrix m(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = flat[i * n + j];
  return m;
}

FiniteMetricSpace space_of(const Matrix& m) {
  std::vector<double> flat;
  for (const auto& row : m) {
    if (row.size() != m.size()) fail(Errc::Config, "distance matrix must be square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return FiniteMetricSpace::from_matrix(std::move(flat), m.size());
}

std::string run(const std::string& name, const std::string& config) {
  auto cfg = config_from_json(Json::parse(config));
  Json out;
  if (name == "sample") out = cmd_sample(cfg);
  else if (name == "marginal") out = cmd_marginal(cfg);
  else if (name == "analyze") out = cmd_analyze(cfg);
  else if (name == "render") out = cmd_render(cfg);
  else if (name == "verify") out = cmd_verify(cfg);
  else if (name == "enum") out = cmd_enum(cfg);
  else fail(Errc::Config, "unknown command '" + name + "'");
  return out.dump();
}

std::vector<std::uint32_t> sample_tree(std::uint64_t n, const std::string& law, double alpha,
                                       const std::string& mode, std::uint64_t seed) {
  Rng rng = make_stream(seed, "python.tree");
  return sample_conditioned_bgw({law_from_json(parse_or_null(law), alpha), conditioning_of(mode, n)}, rng)
      .outdegrees();
}

py::dict glued_sample(std::uint64_t n, const std::string& kit, const std::string& law, double alpha, double gamma,
                      double beta, std::size_t points, std::uint64_t seed) {
  Rng rng = make_stream(seed, "python.glued");
  auto tree = sample_conditioned_bgw({law_from_json(parse_or_null(law), alpha), Conditioning::vertices(n)}, rng);
  auto dt = glue(std::move(tree), kit_from_json(Json::parse(kit), gamma, beta), rng);
  std::vector<SpacePoint> pts;
  for (std::size_t i = 0; i < points; ++i) pts.push_back(dt.sample_point(rng));
  std::vector<double> flat(points * points);
  for (std::size_t i = 0; i < points; ++i)
    for (std::size_t j = i + 1; j < points; ++j) flat[i * points + j] = flat[j * points + i] = dt.distance(pts[i], pts[j]);
  py::dict d;
  d["outdegrees"] = dt.tree().outdegrees();
  d["diameter"] = dt.diameter();
  d["total_mass"] = dt.total_mass();
  d["distances"] = square(flat, points);
  return d;
}

py::dict marginal_sample(std::size_t k, double alpha, double gamma, double beta, const std::string& kit,
                         std::size_t points, const std::string& measure, double trunc_eps, std::uint64_t seed) {
  Rng rng = make_stream(seed, "python.marginal");
  auto limit = LimitKit::from_kit(kit_from_json(Json::parse(kit), gamma, beta));
  MarginalOptions opts;
  opts.trunc_eps = trunc_eps;
  auto ms = build_marginal(alpha, gamma, beta, k, limit, opts, rng);
  std::vector<MarginalPoint> pts;
  if (measure == "tips" && points == 0) {
    for (std::uint32_t j = 0; j < k; ++j) pts.push_back(ms.tip(j));
  } else {
    PointMeasure m = measure == "tips"           ? PointMeasure::Tips
                     : measure == "uniform_mass" ? PointMeasure::UniformMass
                     : measure == "block_mass"   ? PointMeasure::BlockMass
                                                 : (fail(Errc::Config, "unknown measure '" + measure + "'"),
                                                    PointMeasure::Tips);
    pts = ms.sample_points(points, m, rng);
  }
  const std::size_t c = pts.size();
  std::vector<double> dist(c * c), unc(c * c);
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j = i + 1; j < c; ++j) {
      dist[i * c + j] = dist[j * c + i] = ms.distance(pts[i], pts[j]);
      unc[i * c + j] = unc[j * c + i] = ms.uncertainty(pts[i], pts[j]);
    }
  py::dict d;
  d["mlmc"] = ms.mlmc().values;
  d["distances"] = square(dist, c);
  d["uncertainty"] = square(unc, c);
  return d;
}

py::dict box_dim(const Matrix& m, const std::vector<double>& scales) {
  auto fit = box_dimension(space_of(m), scales);
  py::dict d;
  d["slope"] = fit.slope;
  d["intercept"] = fit.intercept;
  d["r2"] = fit.r2;
  d["scales"] = fit.scales;
  d["counts"] = fit.counts;
  d["rms_residual"] = fit.rms_residual;
  return d;
}

std::pair<double, double> gh_bounds(const Matrix& a, const Matrix& b, int iterations, std::uint64_t seed) {
  auto x = space_of(a), y = space_of(b);
  Rng rng = make_stream(seed, "python.gh");
  return {gh_lower_bound(x, y), gh_upper_bound(x, y, iterations, rng).bound};
}

std::string big_string(const BigInt& b) {
  std::ostringstream os;
  os << b;
  return os.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Decorated stable trees: native core";
  static py::exception<Error> exc(m, "DstreeError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = exc;
      py::object inst = err(e.what());
      inst.attr("code") = std::string(errc_name(e.code()));
      PyErr_SetObject(exc.ptr(), inst.ptr());
    } catch (const Json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("run_command", &run, py::arg("name"), py::arg("config"));
  m.def("sample_tree", &sample_tree, py::arg("n"), py::arg("law"), py::arg("alpha"), py::arg("conditioning"),
        py::arg("seed"));
  m.def("glued_sample", &glued_sample, py::arg("n"), py::arg("kit"), py::arg("law"), py::arg("alpha"),
        py::arg("gamma"), py::arg("beta"), py::arg("points"), py::arg("seed"));
  m.def("marginal_sample", &marginal_sample, py::arg("k"), py::arg("alpha"), py::arg("gamma"), py::arg("beta"),
        py::arg("kit"), py::arg("points"), py::arg("measure"), py::arg("trunc_eps"), py::arg("seed"));
  m.def("count_marked_trees", [](std::uint32_t n, std::uint32_t k) { return big_string(count_marked_trees(n, k)); });
  m.def("series_from_closed_form", [](std::uint32_t k, std::uint32_t n_max) {
    std::vector<std::string> out;
    for (const auto& c : series_from_closed_form(k, n_max)) out.push_back(big_string(c));
    return out;
  });
  m.def("ml_moment", &ml_moment, py::arg("eta"), py::arg("theta"), py::arg("p"));
  m.def(
      "sample_ml",
      [](double eta, double theta, std::size_t count, std::uint64_t seed) {
        Rng rng = make_stream(seed, "python.ml");
        std::vector<double> x(count);
        for (auto& v : x) v = sample_ml(eta, theta, rng);
        return x;
      },
      py::arg("eta"), py::arg("theta"), py::arg("count"), py::arg("seed"));
  m.def("bn_normalizer", [](double alpha, std::uint64_t n) { return bn_normalizer(OffspringLaw::stable(alpha), n); });
  m.def("box_dimension", &box_dim, py::arg("distances"), py::arg("scales"));
  m.def("gh_bounds", &gh_bounds, py::arg("a"), py::arg("b"), py::arg("iterations"), py::arg("seed"));
  m.def(
      "ks_two_sample",
      [](std::vector<double> x, std::vector<double> y) {
        auto r = ks_two_sample(std::move(x), std::move(y));
        return std::make_pair(r.statistic, r.p_value);
      },
      py::arg("x"), py::arg("y"));
}
