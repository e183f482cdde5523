// Python bindings: thin wrappers over the C++ core. Structured results
// (reports, curves, bundles) cross the boundary as plain dicts via their
// JSON form so Python callers get native types without mirroring every
// struct.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cpaudit/audit.hpp"
#include "cpaudit/conformal.hpp"
#include "cpaudit/dataset.hpp"
#include "cpaudit/io.hpp"
#include "cpaudit/pitfalls.hpp"
#include "cpaudit/selective.hpp"
#include "cpaudit/serialize.hpp"
#include "cpaudit/shift.hpp"
#include "cpaudit/stats.hpp"
#include "cpaudit/synth.hpp"
#include "cpaudit/version.hpp"

namespace py = pybind11;
using namespace cpaudit;
using nlohmann::json;

namespace {

py::object json_to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null:
      return py::none();
    case json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case json::value_t::number_integer:
      return py::int_(j.get<std::int64_t>());
    case json::value_t::number_unsigned:
      return py::int_(j.get<std::uint64_t>());
    case json::value_t::number_float:
      return py::float_(j.get<double>());
    case json::value_t::string:
      return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list out;
      for (const auto& item : j) out.append(json_to_py(item));
      return out;
    }
    case json::value_t::object: {
      py::dict out;
      for (const auto& [key, value] : j.items()) {
        out[py::str(key)] = json_to_py(value);
      }
      return out;
    }
    default:
      return py::none();
  }
}

ScoreConfig make_config(bool randomized, double alpha, std::uint64_t seed) {
  return {randomized, alpha, seed};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Conformal prediction-set calibration and audit toolkit";
  m.attr("__version__") = kVersion;

  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<PredictionRecord>(m, "PredictionRecord")
      .def(py::init<>())
      .def_readwrite("id", &PredictionRecord::id)
      .def_readwrite("probs", &PredictionRecord::probs)
      .def_readwrite("label", &PredictionRecord::label)
      .def_readwrite("groups", &PredictionRecord::groups);

  py::class_<LabeledDataset>(m, "LabeledDataset")
      .def(py::init<>())
      .def_readwrite("records", &LabeledDataset::records)
      .def_readwrite("class_names", &LabeledDataset::class_names)
      .def_readwrite("taxonomy", &LabeledDataset::taxonomy)
      .def("num_classes", &LabeledDataset::num_classes)
      .def("__len__", &LabeledDataset::size);

  py::class_<CalibrationResult>(m, "CalibrationResult")
      .def_readonly("tau", &CalibrationResult::tau)
      .def_readonly("n_cal", &CalibrationResult::n_cal)
      .def_readonly("alpha", &CalibrationResult::alpha)
      .def_readonly("randomized", &CalibrationResult::randomized)
      .def_readonly("partition", &CalibrationResult::partition)
      .def("to_dict",
           [](const CalibrationResult& c) { return json_to_py(to_json(c)); });

  py::class_<PredictionSet>(m, "PredictionSet")
      .def_readonly("members", &PredictionSet::members)
      .def_readonly("record_id", &PredictionSet::record_id)
      .def_readonly("score_of_label", &PredictionSet::score_of_label)
      .def("__len__",
           [](const PredictionSet& s) { return s.members.size(); })
      .def("__contains__", [](const PredictionSet& s, int label) {
        return set_contains(s, label);
      });

  m.def("load_dataset", [](const std::string& path) {
    return load_dataset(path, format_for_path(path));
  });
  m.def("save_dataset", [](const LabeledDataset& ds, const std::string& path) {
    save_dataset(ds, path, format_for_path(path));
  });
  m.def(
      "split_dataset",
      [](const LabeledDataset& ds, std::size_t calibration_size,
         std::uint64_t seed, bool stratify) {
        return split_dataset(ds, {calibration_size, seed, stratify});
      },
      py::arg("ds"), py::arg("calibration_size"), py::arg("seed") = 0,
      py::arg("stratify") = false);
  m.def("top1_accuracy", &top1_accuracy);

  m.def(
      "generate",
      [](std::size_t n, int k, double concentration, std::uint64_t seed) {
        return generate(basic_config(n, k, concentration, seed));
      },
      py::arg("n"), py::arg("k"), py::arg("concentration") = 2.3,
      py::arg("seed") = 0);
  m.def("generate_from_config", [](const py::dict& cfg) {
    const json doc = json::parse(
        py::module_::import("json").attr("dumps")(cfg).cast<std::string>());
    return generate(synth_config_from_json(doc));
  });

  m.def(
      "aps_score",
      [](const std::vector<double>& probs, int label,
         std::optional<double> u) { return aps_score(probs, label, u); },
      py::arg("probs"), py::arg("label"), py::arg("u") = std::nullopt);
  m.def(
      "calibrate",
      [](const std::vector<double>& scores, double alpha) {
        return calibrate(scores, alpha);
      },
      py::arg("scores"), py::arg("alpha") = 0.1);
  m.def(
      "weighted_calibrate",
      [](const std::vector<double>& scores, const std::vector<double>& weights,
         double alpha) { return weighted_calibrate(scores, weights, alpha); },
      py::arg("scores"), py::arg("weights"), py::arg("alpha") = 0.1);
  m.def(
      "calibrate_dataset",
      [](const LabeledDataset& cal, double alpha, bool randomized,
         std::uint64_t seed, const std::string& partition) {
        const auto cfg = make_config(randomized, alpha, seed);
        if (partition.empty() || partition == "none") {
          auto result = calibrate(score_dataset(cal, cfg), alpha);
          result.randomized = randomized;
          return result;
        }
        return mondrian_calibrate(cal, parse_partition(partition), cfg);
      },
      py::arg("cal"), py::arg("alpha") = 0.1, py::arg("randomized") = false,
      py::arg("seed") = 0, py::arg("partition") = "none");
  m.def(
      "predict_sets",
      [](const LabeledDataset& ds, const CalibrationResult& calib,
         bool randomized, std::uint64_t seed) {
        return predict_sets(ds, calib,
                            make_config(randomized, calib.alpha, seed));
      },
      py::arg("ds"), py::arg("calib"), py::arg("randomized") = false,
      py::arg("seed") = 0);
  m.def(
      "score_dataset",
      [](const LabeledDataset& ds, bool randomized, std::uint64_t seed) {
        return score_dataset(ds, make_config(randomized, 0.1, seed));
      },
      py::arg("ds"), py::arg("randomized") = false, py::arg("seed") = 0);

  m.def(
      "coverage_report",
      [](const std::vector<PredictionSet>& sets, const LabeledDataset& ds,
         double alpha) { return json_to_py(to_json(coverage_report(sets, ds, alpha))); },
      py::arg("sets"), py::arg("ds"), py::arg("alpha") = 0.1);
  m.def(
      "calibration_curve",
      [](const LabeledDataset& cal, const LabeledDataset& eval,
         const std::vector<double>& alphas, std::uint64_t seed) {
        return json_to_py(
            to_json(calibration_curve(cal, eval, alphas, make_config(false, 0.1, seed))));
      },
      py::arg("cal"), py::arg("eval"), py::arg("alphas"), py::arg("seed") = 0);
  m.def(
      "efficiency_curve",
      [](const LabeledDataset& cal, const LabeledDataset& eval,
         const std::vector<double>& alphas, std::uint64_t seed) {
        return json_to_py(
            to_json(efficiency_curve(cal, eval, alphas, make_config(false, 0.1, seed))));
      },
      py::arg("cal"), py::arg("eval"), py::arg("alphas"), py::arg("seed") = 0);
  m.def("superclass_collapse",
        [](const std::vector<PredictionSet>& sets,
           const std::map<int, int>& taxonomy) {
          return superclass_collapse(sets, taxonomy);
        });
  m.def("default_alpha_grid", &default_alpha_grid);

  m.def(
      "shift_experiment",
      [](const LabeledDataset& cal, const LabeledDataset& eval,
         const py::dict& spec, double alpha, std::size_t n_recal,
         std::uint64_t seed) {
        const json doc = json::parse(
            py::module_::import("json").attr("dumps")(spec).cast<std::string>());
        return json_to_py(to_json(shift_experiment(
            cal, eval, shift_spec_from_json(doc),
            make_config(false, alpha, seed), n_recal, seed)));
      },
      py::arg("cal"), py::arg("eval"), py::arg("spec"), py::arg("alpha") = 0.1,
      py::arg("n_recal") = 1000, py::arg("seed") = 0);
  m.def("adversarial_label_target",
        [](const LabeledDataset& cal, const LabeledDataset& eval,
           double alpha) {
          return adversarial_label_target(cal, eval,
                                          make_config(false, alpha, 0));
        });
  m.def("label_shift_weights", &label_shift_weights);

  m.def("hoeffding_lcb", &hoeffding_lcb);
  m.def("clopper_pearson_lower", &clopper_pearson_lower);
  m.def(
      "selective_curve",
      [](const LabeledDataset& ds, double delta) {
        SelectiveConfig cfg;
        cfg.delta = delta;
        return json_to_py(to_json(selective_curve(ds, cfg)));
      },
      py::arg("ds"), py::arg("delta") = 0.05);
  m.def(
      "choose_lambda",
      [](const LabeledDataset& ds, double target_accuracy, double delta)
          -> py::object {
        SelectiveConfig cfg;
        cfg.delta = delta;
        cfg.target_accuracy = target_accuracy;
        cfg.grid = default_lambda_grid(ds);
        const auto result = choose_lambda(ds, cfg);
        if (!result) return py::none();
        return py::make_tuple(result->first, result->second);
      },
      py::arg("ds"), py::arg("target_accuracy"), py::arg("delta") = 0.05);

  m.def(
      "run_pitfalls",
      [](std::uint64_t seed, double alpha, double delta,
         const std::string& only, unsigned threads) {
        PitfallConfig cfg;
        cfg.seed = seed;
        cfg.alpha = alpha;
        cfg.delta = delta;
        cfg.only = only;
        cfg.threads = threads;
        return json_to_py(run_pitfalls(cfg));
      },
      py::arg("seed") = 0, py::arg("alpha") = 0.1, py::arg("delta") = 0.05,
      py::arg("only") = "", py::arg("threads") = 1);
}
