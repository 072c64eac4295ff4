#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mtsim/clustering.hpp"
#include "mtsim/frechet.hpp"
#include "mtsim/importance.hpp"
#include "mtsim/models.hpp"
#include "mtsim/pipeline.hpp"
#include "mtsim/similarity.hpp"
#include "mtsim/synth.hpp"

namespace py = pybind11;
using namespace mtsim;

namespace {

Matrix to_matrix(const py::array_t<double, py::array::c_style | py::array::forcecast>& array) {
  if (array.ndim() != 2) throw ValidationError("expected a 2-D array of samples");
  Matrix m(static_cast<std::size_t>(array.shape(0)), static_cast<std::size_t>(array.shape(1)));
  std::copy(array.data(), array.data() + array.size(), m.data().begin());
  return m;
}

py::array_t<double> to_array(const Matrix& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

Predictor predictor_from_callable(std::string task_id, std::size_t dim, py::function f) {
  auto fn = [f = std::move(f)](const Matrix& batch) {
    py::gil_scoped_acquire gil;
    py::object result = f(to_array(batch));
    auto array = py::array_t<double, py::array::c_style | py::array::forcecast>(result);
    std::vector<double> out(array.size());
    std::copy(array.data(), array.data() + array.size(), out.begin());
    return out;
  };
  return Predictor{std::move(task_id), dim, std::move(fn)};
}

}  // namespace

PYBIND11_MODULE(_mtsim, m) {
  m.doc() = "Multi-task similarity from ALE curves and a weighted Frechet distance";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::enum_<Matching>(m, "Matching")
      .value("by_name", Matching::by_name)
      .value("best_match", Matching::best_match);
  py::enum_<GridKind>(m, "GridKind")
      .value("raw", GridKind::raw)
      .value("common", GridKind::common);
  py::enum_<ImportanceSource>(m, "ImportanceSource")
      .value("pfi", ImportanceSource::pfi)
      .value("uniform", ImportanceSource::uniform);

  py::class_<TaskDataset>(m, "TaskDataset")
      .def(py::init([](std::string task_id, std::vector<std::string> names,
                       py::array_t<double, py::array::c_style | py::array::forcecast> samples,
                       std::vector<double> targets) {
             return validate_dataset(std::move(task_id), std::move(names), to_matrix(samples),
                                     std::move(targets));
           }),
           py::arg("task_id"), py::arg("feature_names"), py::arg("samples"), py::arg("targets"))
      .def_property_readonly("task_id", &TaskDataset::task_id)
      .def_property_readonly("feature_names", &TaskDataset::feature_names)
      .def_property_readonly("samples", [](const TaskDataset& d) { return to_array(d.samples()); })
      .def_property_readonly("targets", &TaskDataset::targets)
      .def_property_readonly("n", &TaskDataset::n)
      .def_property_readonly("d", &TaskDataset::d)
      .def("column", [](const TaskDataset& d, const std::string& name) {
        const auto j = d.feature_index(name);
        if (!j) throw ValidationError("no feature '" + name + "'");
        return d.column(*j);
      });

  py::class_<Partition>(m, "Partition")
      .def_property_readonly("feature", &Partition::feature)
      .def_property_readonly("edges", &Partition::edges)
      .def_property_readonly("counts", &Partition::counts)
      .def_property_readonly("proportions", &Partition::proportions);

  py::class_<AleCurve>(m, "AleCurve")
      .def(py::init<std::string, std::string, std::vector<double>, std::vector<double>,
                    std::vector<double>, GridKind, std::vector<std::size_t>>(),
           py::arg("task_id"), py::arg("feature"), py::arg("knots"), py::arg("values"),
           py::arg("proportions"), py::arg("grid_kind") = GridKind::common,
           py::arg("counts") = std::vector<std::size_t>{})
      .def_property_readonly("task_id", &AleCurve::task_id)
      .def_property_readonly("feature", &AleCurve::feature)
      .def_property_readonly("knots", &AleCurve::knots)
      .def_property_readonly("values", &AleCurve::values)
      .def_property_readonly("proportions", &AleCurve::proportions)
      .def_property_readonly("counts", &AleCurve::counts)
      .def_property_readonly("grid_kind", &AleCurve::grid_kind)
      .def("__len__", &AleCurve::size);

  py::class_<CommonGrid>(m, "CommonGrid")
      .def_readonly("feature", &CommonGrid::feature)
      .def_readonly("knots", &CommonGrid::knots);

  py::class_<TaskProfile>(m, "TaskProfile")
      .def(py::init<std::string, std::map<std::string, AleCurve>,
                    std::map<std::string, double>, std::optional<double>, bool>(),
           py::arg("task_id"), py::arg("curves"), py::arg("importance"),
           py::arg("loss") = std::nullopt, py::arg("flagged") = false)
      .def_property_readonly("task_id", &TaskProfile::task_id)
      .def_property_readonly("curves", &TaskProfile::curves)
      .def_property_readonly("importance", &TaskProfile::importance)
      .def_property_readonly("loss", &TaskProfile::loss)
      .def_property_readonly("flagged", &TaskProfile::flagged)
      .def("with_importance", &TaskProfile::with_importance)
      .def("with_flag", &TaskProfile::with_flag);

  py::class_<SimilarityMatrix>(m, "SimilarityMatrix")
      .def_property_readonly("task_ids", &SimilarityMatrix::task_ids)
      .def_property_readonly("values",
                             [](const SimilarityMatrix& s) { return to_array(s.values()); })
      .def_property_readonly("scaled", &SimilarityMatrix::scaled)
      .def_property_readonly("matching", &SimilarityMatrix::matching)
      .def("value", &SimilarityMatrix::value);

  py::class_<Merge>(m, "Merge")
      .def_readonly("a", &Merge::a)
      .def_readonly("b", &Merge::b)
      .def_readonly("height", &Merge::height)
      .def_readonly("size", &Merge::size);

  py::class_<Dendrogram>(m, "Dendrogram")
      .def_property_readonly("leaves", &Dendrogram::leaves)
      .def_property_readonly("merges", &Dendrogram::merges);

  py::class_<TaskSpec>(m, "TaskSpec")
      .def(py::init([](std::string task_id, double mu1, double mu2, int a, int b, int c,
                       std::size_t n, std::uint64_t seed) {
             return TaskSpec{std::move(task_id), mu1, mu2, a, b, c, n, seed};
           }),
           py::arg("task_id"), py::arg("mixture_mu1") = 0.0, py::arg("mixture_mu2") = 0.0,
           py::arg("a") = 1, py::arg("b") = 1, py::arg("c") = 1, py::arg("n") = 10000,
           py::arg("seed") = 0)
      .def_readonly("task_id", &TaskSpec::task_id)
      .def_readonly("mixture_mu1", &TaskSpec::mixture_mu1)
      .def_readonly("mixture_mu2", &TaskSpec::mixture_mu2)
      .def_readonly("a", &TaskSpec::a)
      .def_readonly("b", &TaskSpec::b)
      .def_readonly("c", &TaskSpec::c)
      .def_readonly("n", &TaskSpec::n)
      .def_readonly("seed", &TaskSpec::seed);

  py::class_<Predictor>(m, "Predictor")
      .def_readonly("task_id", &Predictor::task_id)
      .def_readonly("dim", &Predictor::dim)
      .def("predict",
           [](const Predictor& p,
              py::array_t<double, py::array::c_style | py::array::forcecast> batch) {
             return p.predict(to_matrix(batch));
           });

  py::class_<FeatureContribution>(m, "FeatureContribution")
      .def_readonly("feature", &FeatureContribution::feature)
      .def_readonly("matched", &FeatureContribution::matched)
      .def_readonly("distance", &FeatureContribution::distance)
      .def_readonly("importance", &FeatureContribution::importance)
      .def_readonly("weighted", &FeatureContribution::weighted);

  py::class_<ProfileOptions>(m, "ProfileOptions")
      .def(py::init<>())
      .def_readwrite("raw_k", &ProfileOptions::raw_k)
      .def_readwrite("grid_k", &ProfileOptions::grid_k)
      .def_readwrite("smooth_lambda", &ProfileOptions::smooth_lambda)
      .def_readwrite("importance", &ProfileOptions::importance)
      .def_readwrite("pfi_repeats", &ProfileOptions::pfi_repeats)
      .def_readwrite("pfi_seed", &ProfileOptions::pfi_seed)
      .def_readwrite("threads", &ProfileOptions::threads);

  m.def("predictor_from_callable", &predictor_from_callable, py::arg("task_id"), py::arg("dim"),
        py::arg("fn"), "wrap a python callable batch -> predictions as a Predictor");

  // ale
  m.def("equal_width_partition",
        [](const std::string& feature, const std::vector<double>& values, std::size_t k) {
          return equal_width_partition(feature, values, k);
        });
  m.def("default_bin_count", [](const std::vector<double>& values, std::size_t k) {
    return default_bin_count(values, k);
  });
  m.def("uncentered_ale", &uncentered_ale);
  m.def("center_ale", [](const std::vector<double>& g, const Partition& part) {
    return center_ale(g, part);
  });
  m.def("ale_curve", &ale_curve, py::arg("model"), py::arg("data"), py::arg("feature"),
        py::arg("k") = 50);
  m.def("pooled_quantile_grid", &pooled_quantile_grid);
  m.def("resample_to_grid",
        [](const AleCurve& curve, const CommonGrid& grid, const std::vector<double>& values) {
          return resample_to_grid(curve, grid, values);
        });
  m.def("smooth_curve", &smooth_curve, py::arg("curve"), py::arg("lambda_") = 10.0);

  // frechet
  m.def("weight_ratio", &weight_ratio);
  m.def("weighted_frechet", &weighted_frechet, py::arg("a"), py::arg("b"),
        py::arg("normalize_knot_axis") = false);
  m.def("frechet_min_variant", &frechet_min_variant, py::arg("a"), py::arg("b"),
        py::arg("normalize_knot_axis") = false);
  m.def("brute_force_frechet", &brute_force_frechet);

  // importance and models
  m.def("permutation_importance", &permutation_importance, py::arg("model"), py::arg("data"),
        py::arg("repeats") = 5, py::arg("seed") = 0);
  m.def("manual_importance", &manual_importance);
  m.def("fit_knn", &fit_knn, py::arg("data"), py::arg("k"));
  m.def("default_k", &default_k);
  m.def("rmse", &rmse);
  m.def("log_loss", &log_loss);

  // similarity
  m.def("task_similarity",
        [](const TaskProfile& t, const TaskProfile& u, Matching matching) {
          return task_similarity(t, u, matching);
        },
        py::arg("t"), py::arg("t_prime"), py::arg("matching") = Matching::by_name);
  m.def("task_similarity_with_weights",
        [](const TaskProfile& t, const TaskProfile& u, Matching matching,
           const std::map<std::string, double>& weights) {
          return task_similarity(t, u, matching, weights);
        });
  m.def("similarity_breakdown", &similarity_breakdown, py::arg("t"), py::arg("t_prime"),
        py::arg("matching") = Matching::by_name);
  m.def("performance_gamma", &performance_gamma, py::arg("loss_t"), py::arg("loss_t_prime"),
        py::arg("epsilon") = 1e-8);
  m.def("scaled_similarity", &scaled_similarity);
  m.def("flag_unreliable", &flag_unreliable, py::arg("losses"), py::arg("tau") = std::nullopt);
  m.def("similarity_matrix", &similarity_matrix, py::arg("profiles"),
        py::arg("matching") = Matching::by_name, py::arg("apply_gamma") = false,
        py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());
  m.def("cosine_prefilter", &cosine_prefilter);

  // clustering
  m.def("symmetrize", &symmetrize);
  m.def("ward_cluster", &ward_cluster);
  m.def("cut_tree", &cut_tree);
  m.def("to_newick", &to_newick);

  // synthetic benchmark
  m.def("rastrigin", &rastrigin);
  m.def("quadratic_form", &quadratic_form);
  m.def("synthetic_suite", &synthetic_suite, py::arg("base_seed") = 42, py::arg("n") = 10000,
        py::arg("with_degraded") = false);
  m.def("generate_task", &generate_task);
  m.def("oracle_model", &oracle_model);
  m.def("degraded_model", &degraded_model);

  // pipeline. The GIL is released so worker threads can re-acquire it when a
  // python-callable predictor is involved.
  m.def("build_profiles", &build_profiles, py::arg("tasks"), py::arg("models"),
        py::arg("options") = ProfileOptions{}, py::call_guard<py::gil_scoped_release>());
}
