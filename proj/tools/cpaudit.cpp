// cpaudit: conformal prediction-set calibration and audit harness.
//
// Every command that writes an output also writes `<out>.manifest.json`
// recording the resolved configuration, seeds, input digests, and version;
// the manifest is the only artifact carrying a timestamp, so primary outputs
// are byte-identical across reruns with the same inputs.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cpaudit/audit.hpp"
#include "cpaudit/conformal.hpp"
#include "cpaudit/dataset.hpp"
#include "cpaudit/io.hpp"
#include "cpaudit/manifest.hpp"
#include "cpaudit/pitfalls.hpp"
#include "cpaudit/selective.hpp"
#include "cpaudit/serialize.hpp"
#include "cpaudit/shift.hpp"
#include "cpaudit/synth.hpp"
#include "cpaudit/version.hpp"

namespace fs = std::filesystem;
using cpaudit::IoError;
using cpaudit::ValidationError;
using nlohmann::json;

namespace {

struct ManifestSink {
  std::string command;
  json config = json::object();
  std::vector<std::uint64_t> seeds;
  std::map<std::string, std::string> digests;

  void input(const fs::path& path) {
    digests[path.string()] = cpaudit::fnv1a64_file(path);
  }
  void write(const fs::path& out) const {
    cpaudit::RunManifest m;
    m.command = command;
    m.config = config;
    m.seeds = seeds;
    m.input_digests = digests;
    m.version = cpaudit::kVersion;
    cpaudit::write_manifest(out, m);
  }
};

cpaudit::LabeledDataset load(const fs::path& path) {
  return cpaudit::load_dataset(path, cpaudit::format_for_path(path));
}

cpaudit::ScoreConfig make_score_config(const std::string& score, double alpha,
                                       std::uint64_t seed) {
  if (score != "deterministic" && score != "randomized") {
    throw ValidationError("unknown score variant '" + score +
                          "' (expected deterministic or randomized)");
  }
  return {score == "randomized", alpha, seed};
}

// Accepts a literal JSON object or a path to a JSON file.
json inline_or_file(const std::string& text, ManifestSink& sink) {
  if (!text.empty() && text.front() == '{') {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw ValidationError(std::string("inline JSON: ") + e.what());
    }
  }
  sink.input(text);
  return cpaudit::read_json(text);
}

fs::path sibling_with_extension(fs::path path, const char* ext) {
  path.replace_extension(ext);
  return path;
}

std::vector<double> targets_to_alphas(const std::vector<double>& targets) {
  std::vector<double> alphas;
  alphas.reserve(targets.size());
  for (double t : targets) {
    if (!(t > 0.0) || !(t < 1.0)) {
      throw ValidationError("coverage targets must lie in (0,1)");
    }
    alphas.push_back(1.0 - t);
  }
  return alphas;
}

int run(int argc, char** argv) {
  CLI::App app{"Conformal prediction-set calibration and audit toolkit"};
  app.require_subcommand(1);

  // ---- synth ----------------------------------------------------------
  auto* synth = app.add_subcommand(
      "synth", "Generate a synthetic labeled prediction dataset");
  std::string synth_config;
  std::string synth_out;
  std::optional<std::uint64_t> synth_seed;
  synth->add_option("--config", synth_config,
                    "SynthConfig JSON (inline object or file path)")
      ->required();
  synth->add_option("--out", synth_out, "Output dataset (.csv or .json)")
      ->required();
  synth->add_option("--seed", synth_seed, "Override the config's seed");

  // ---- split ----------------------------------------------------------
  auto* split = app.add_subcommand(
      "split", "Split a dataset into calibration and evaluation files");
  std::string split_data, split_out_cal, split_out_eval;
  std::size_t split_cal_size = 0;
  std::uint64_t split_seed = 0;
  bool split_stratify = false;
  split->add_option("--data", split_data, "Input dataset")->required();
  split->add_option("--cal-size", split_cal_size, "Calibration record count")
      ->required();
  split->add_option("--seed", split_seed, "Split seed");
  split->add_flag("--stratify", split_stratify,
                  "Preserve class proportions in the calibration split");
  split->add_option("--out-cal", split_out_cal, "Calibration output path")
      ->required();
  split->add_option("--out-eval", split_out_eval, "Evaluation output path")
      ->required();

  // ---- calibrate ------------------------------------------------------
  auto* calibrate = app.add_subcommand(
      "calibrate", "Compute the conformal threshold from calibration data");
  std::string cal_cal, cal_out, cal_partition = "none";
  std::string cal_score = "deterministic", cal_weights;
  double cal_alpha = 0.1;
  std::uint64_t cal_seed = 0;
  calibrate->add_option("--cal", cal_cal, "Calibration dataset")->required();
  calibrate->add_option("--alpha", cal_alpha, "Miscoverage level in (0,1)");
  calibrate->add_option("--score", cal_score,
                        "Score variant: deterministic or randomized");
  calibrate->add_option("--seed", cal_seed, "Randomization seed");
  calibrate->add_option(
      "--partition", cal_partition,
      "none (marginal), class (Mondrian by class), or group:<attr>[,<attr>]");
  calibrate->add_option(
      "--weights", cal_weights,
      "Per-class weights JSON array for weighted calibration "
      "(e.g. from a known label shift)");
  calibrate->add_option("--out", cal_out, "Output CalibrationResult JSON")
      ->required();

  // ---- predict --------------------------------------------------------
  auto* predict = app.add_subcommand(
      "predict", "Emit prediction sets for a dataset given a calibration");
  std::string pred_data, pred_calib, pred_out;
  std::string pred_score = "deterministic";
  std::uint64_t pred_seed = 0;
  predict->add_option("--data", pred_data, "Input dataset")->required();
  predict->add_option("--calibration", pred_calib, "CalibrationResult JSON")
      ->required();
  predict->add_option("--score", pred_score,
                      "Score variant: deterministic or randomized");
  predict->add_option("--seed", pred_seed, "Randomization seed");
  predict->add_option("--out", pred_out, "Output sets (.json or .csv)")
      ->required();

  // ---- audit ----------------------------------------------------------
  auto* audit = app.add_subcommand(
      "audit", "Coverage, curve, efficiency, and collapse reports");
  audit->require_subcommand(1);

  auto* cov = audit->add_subcommand(
      "coverage", "Stratified coverage report for prediction sets");
  std::string cov_sets, cov_data, cov_out;
  double cov_alpha = 0.1;
  cov->add_option("--sets", cov_sets, "Prediction sets JSON")->required();
  cov->add_option("--data", cov_data, "Labeled dataset the sets refer to")
      ->required();
  cov->add_option("--alpha", cov_alpha, "Nominal miscoverage for reference");
  cov->add_option("--out", cov_out, "Output report (.json; .csv twin emitted)")
      ->required();

  auto* curve = audit->add_subcommand(
      "curve", "Calibration curve: empirical coverage across targets");
  std::string curve_cal, curve_data, curve_out, curve_targets;
  std::string curve_score = "deterministic";
  std::uint64_t curve_seed = 0;
  curve->add_option("--cal", curve_cal, "Calibration dataset")->required();
  curve->add_option("--data", curve_data, "Evaluation dataset")->required();
  curve->add_option("--targets", curve_targets,
                    "JSON array of coverage targets (inline or file); "
                    "default: 50 targets from model accuracy to 0.999");
  curve->add_option("--score", curve_score,
                    "Score variant: deterministic or randomized");
  curve->add_option("--seed", curve_seed, "Randomization seed");
  curve->add_option("--out", curve_out, "Output curve (.csv or .json)")
      ->required();

  auto* eff = audit->add_subcommand(
      "efficiency", "Set size and singleton fraction across targets");
  std::string eff_cal, eff_data, eff_out, eff_targets;
  std::string eff_score = "deterministic";
  std::uint64_t eff_seed = 0;
  eff->add_option("--cal", eff_cal, "Calibration dataset")->required();
  eff->add_option("--data", eff_data, "Evaluation dataset")->required();
  eff->add_option("--targets", eff_targets,
                  "JSON array of coverage targets (inline or file)");
  eff->add_option("--score", eff_score,
                  "Score variant: deterministic or randomized");
  eff->add_option("--seed", eff_seed, "Randomization seed");
  eff->add_option("--out", eff_out, "Output curve (.csv or .json)")
      ->required();

  auto* collapse = audit->add_subcommand(
      "collapse", "Collapse sets through the dataset's class taxonomy");
  std::string col_sets, col_data, col_out;
  collapse->add_option("--sets", col_sets, "Prediction sets JSON")->required();
  collapse->add_option("--data", col_data,
                       "Labeled dataset carrying the taxonomy (JSON format)")
      ->required();
  collapse->add_option("--out", col_out, "Output JSON")->required();

  // ---- shift ----------------------------------------------------------
  auto* shift = app.add_subcommand(
      "shift", "Run a distribution-shift experiment end to end");
  std::string shift_cal, shift_data, shift_spec, shift_out;
  std::string shift_score = "deterministic";
  double shift_alpha = 0.1;
  std::size_t shift_recal = 1000;
  std::uint64_t shift_seed = 0;
  shift->add_option("--cal", shift_cal, "Calibration dataset")->required();
  shift->add_option("--data", shift_data, "Evaluation dataset")->required();
  shift->add_option("--spec", shift_spec,
                    "ShiftSpec JSON (inline object or file path); label_shift "
                    "with no target uses the adversarial default")
      ->required();
  shift->add_option("--alpha", shift_alpha, "Miscoverage level");
  shift->add_option("--score", shift_score,
                    "Score variant: deterministic or randomized");
  shift->add_option("--n-recal", shift_recal,
                    "Shifted records reserved for recalibration");
  shift->add_option("--seed", shift_seed, "Experiment seed");
  shift->add_option("--out", shift_out, "Output ShiftExperimentResult JSON")
      ->required();

  // ---- selective ------------------------------------------------------
  auto* selective = app.add_subcommand(
      "selective", "Selective-classification curve and certification");
  std::string sel_data, sel_out, sel_bound = "hoeffding";
  double sel_delta = 0.05;
  std::optional<double> sel_target;
  selective->add_option("--data", sel_data, "Labeled dataset")->required();
  selective->add_option("--delta", sel_delta, "Bound failure probability");
  selective->add_option("--target", sel_target,
                        "Target accuracy; enables certification and writes "
                        "<out stem>.cert.json");
  selective->add_option("--bound", sel_bound,
                        "hoeffding or clopper-pearson");
  selective->add_option("--out", sel_out, "Output curve (.csv or .json)")
      ->required();

  // ---- pitfalls -------------------------------------------------------
  auto* pitfalls = app.add_subcommand(
      "pitfalls", "Reproduce the documented failure modes with verdicts");
  std::string pit_only, pit_out;
  double pit_alpha = 0.1, pit_delta = 0.05;
  std::uint64_t pit_seed = 0;
  unsigned pit_threads = 1;
  std::string slug_list;
  for (const auto* s : cpaudit::kPitfallSlugs) {
    slug_list += slug_list.empty() ? s : std::string(", ") + s;
  }
  pitfalls->add_option("--only", pit_only,
                       "Comma-separated subset of: " + slug_list);
  pitfalls->add_option("--alpha", pit_alpha, "Miscoverage level");
  pitfalls->add_option("--delta", pit_delta, "Bound failure probability");
  pitfalls->add_option("--seed", pit_seed, "Base seed");
  pitfalls->add_option("--parallel-trials", pit_threads,
                       "Worker threads for Monte Carlo trials; results are "
                       "aggregated in seed order, so output is identical "
                       "for any value");
  pitfalls->add_option("--out", pit_out, "Output report bundle JSON")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help/version exit 0; every malformed invocation is a validation error.
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  ManifestSink sink;

  if (synth->parsed()) {
    sink.command = "synth";
    const json cfg_doc = inline_or_file(synth_config, sink);
    auto cfg = cpaudit::synth_config_from_json(cfg_doc);
    if (synth_seed) cfg.seed = *synth_seed;
    auto ds = cpaudit::generate(cfg);
    if (cfg_doc.contains("taxonomy")) {
      try {
        for (const auto& [cls, super] : cfg_doc.at("taxonomy").items()) {
          ds.taxonomy[std::stoi(cls)] = super.get<int>();
        }
      } catch (const std::exception& e) {
        throw ValidationError(std::string("taxonomy: ") + e.what());
      }
      cpaudit::validate_dataset(ds);
    }
    cpaudit::save_dataset(ds, synth_out, cpaudit::format_for_path(synth_out));
    sink.config = {{"config", cfg_doc}, {"out", synth_out}};
    sink.seeds = {cfg.seed};
    sink.write(synth_out);
    return 0;
  }

  if (split->parsed()) {
    sink.command = "split";
    sink.input(split_data);
    const auto ds = load(split_data);
    const auto [cal, eval] = cpaudit::split_dataset(
        ds, {split_cal_size, split_seed, split_stratify});
    cpaudit::save_dataset(cal, split_out_cal,
                          cpaudit::format_for_path(split_out_cal));
    cpaudit::save_dataset(eval, split_out_eval,
                          cpaudit::format_for_path(split_out_eval));
    sink.config = {{"data", split_data},
                   {"cal_size", split_cal_size},
                   {"stratify", split_stratify},
                   {"out_cal", split_out_cal},
                   {"out_eval", split_out_eval}};
    sink.seeds = {split_seed};
    sink.write(split_out_cal);
    return 0;
  }

  if (calibrate->parsed()) {
    sink.command = "calibrate";
    sink.input(cal_cal);
    const auto ds = load(cal_cal);
    const auto sc = make_score_config(cal_score, cal_alpha, cal_seed);
    cpaudit::CalibrationResult result;
    if (cal_partition != "none") {
      if (!cal_weights.empty()) {
        throw ValidationError(
            "--weights and --partition cannot be combined");
      }
      result = cpaudit::mondrian_calibrate(
          ds, cpaudit::parse_partition(cal_partition), sc);
    } else if (!cal_weights.empty()) {
      const json wdoc = inline_or_file(cal_weights, sink);
      std::vector<double> class_wts;
      try {
        class_wts = wdoc.get<std::vector<double>>();
      } catch (const json::exception& e) {
        throw ValidationError(std::string("weights JSON: ") + e.what());
      }
      if (static_cast<int>(class_wts.size()) != ds.num_classes()) {
        throw ValidationError("weights length does not match class count");
      }
      std::vector<double> wts;
      wts.reserve(ds.size());
      for (const auto& rec : ds.records) wts.push_back(class_wts[rec.label]);
      result = cpaudit::weighted_calibrate(cpaudit::score_dataset(ds, sc),
                                           wts, cal_alpha);
      result.randomized = sc.randomized;
    } else {
      result = cpaudit::calibrate(cpaudit::score_dataset(ds, sc), cal_alpha);
      result.randomized = sc.randomized;
    }
    cpaudit::write_json(cal_out, cpaudit::to_json(result));
    sink.config = {{"cal", cal_cal},         {"alpha", cal_alpha},
                   {"score", cal_score},     {"partition", cal_partition},
                   {"weights", cal_weights}, {"out", cal_out}};
    sink.seeds = {cal_seed};
    sink.write(cal_out);
    std::printf("tau computed from %zu records at alpha=%g\n", ds.size(),
                cal_alpha);
    return 0;
  }

  if (predict->parsed()) {
    sink.command = "predict";
    sink.input(pred_data);
    sink.input(pred_calib);
    const auto ds = load(pred_data);
    const auto calib =
        cpaudit::calibration_from_json(cpaudit::read_json(pred_calib));
    const auto sc =
        make_score_config(pred_score, calib.alpha, pred_seed);
    if (sc.randomized != calib.randomized) {
      throw ValidationError(
          "score variant must match the calibration's (calibration was " +
          std::string(calib.randomized ? "randomized" : "deterministic") +
          ")");
    }
    const auto sets = cpaudit::predict_sets(ds, calib, sc);
    if (cpaudit::format_for_path(pred_out) == cpaudit::FileFormat::csv) {
      cpaudit::write_text(pred_out, cpaudit::sets_csv(sets));
    } else {
      cpaudit::write_json(pred_out, cpaudit::to_json(sets, calib.alpha));
    }
    sink.config = {{"data", pred_data},
                   {"calibration", pred_calib},
                   {"score", pred_score},
                   {"out", pred_out}};
    sink.seeds = {pred_seed};
    sink.write(pred_out);
    return 0;
  }

  if (cov->parsed()) {
    sink.command = "audit coverage";
    sink.input(cov_sets);
    sink.input(cov_data);
    const auto sets = cpaudit::sets_from_json(cpaudit::read_json(cov_sets));
    const auto ds = load(cov_data);
    const auto report = cpaudit::coverage_report(sets, ds, cov_alpha);
    cpaudit::write_json(cov_out, cpaudit::to_json(report));
    cpaudit::write_text(sibling_with_extension(cov_out, ".csv"),
                        cpaudit::coverage_report_csv(report));
    sink.config = {{"sets", cov_sets},
                   {"data", cov_data},
                   {"alpha", cov_alpha},
                   {"out", cov_out}};
    sink.write(cov_out);
    std::printf("marginal coverage %.4f over %zu records\n",
                report.marginal.rate, sets.size());
    return 0;
  }

  if (curve->parsed() || eff->parsed()) {
    const bool is_curve = curve->parsed();
    sink.command = is_curve ? "audit curve" : "audit efficiency";
    const auto& arg_cal = is_curve ? curve_cal : eff_cal;
    const auto& arg_data = is_curve ? curve_data : eff_data;
    const auto& arg_targets = is_curve ? curve_targets : eff_targets;
    const auto& arg_score = is_curve ? curve_score : eff_score;
    const auto& arg_out = is_curve ? curve_out : eff_out;
    const auto arg_seed = is_curve ? curve_seed : eff_seed;
    sink.input(arg_cal);
    sink.input(arg_data);
    const auto cal = load(arg_cal);
    const auto data = load(arg_data);
    const auto sc = make_score_config(arg_score, 0.1, arg_seed);
    std::vector<double> alphas;
    if (arg_targets.empty()) {
      alphas = cpaudit::default_alpha_grid(cpaudit::top1_accuracy(cal));
    } else {
      const json tdoc = inline_or_file(arg_targets, sink);
      try {
        alphas = targets_to_alphas(tdoc.get<std::vector<double>>());
      } catch (const json::exception& e) {
        throw ValidationError(std::string("targets JSON: ") + e.what());
      }
    }
    std::string csv;
    json doc;
    if (is_curve) {
      const auto result = cpaudit::calibration_curve(cal, data, alphas, sc);
      csv = cpaudit::calibration_curve_csv(result);
      doc = cpaudit::to_json(result);
    } else {
      const auto result = cpaudit::efficiency_curve(cal, data, alphas, sc);
      csv = cpaudit::efficiency_curve_csv(result);
      doc = cpaudit::to_json(result);
    }
    if (cpaudit::format_for_path(arg_out) == cpaudit::FileFormat::json) {
      cpaudit::write_json(arg_out, doc);
    } else {
      cpaudit::write_text(arg_out, csv);
    }
    sink.config = {{"cal", arg_cal},
                   {"data", arg_data},
                   {"targets", arg_targets},
                   {"score", arg_score},
                   {"out", arg_out}};
    sink.seeds = {arg_seed};
    sink.write(arg_out);
    return 0;
  }

  if (collapse->parsed()) {
    sink.command = "audit collapse";
    sink.input(col_sets);
    sink.input(col_data);
    const auto sets = cpaudit::sets_from_json(cpaudit::read_json(col_sets));
    const auto ds = load(col_data);
    if (!ds.has_taxonomy()) {
      throw ValidationError("dataset carries no taxonomy to collapse through");
    }
    const auto [collapsed, informativeness] =
        cpaudit::superclass_collapse(sets, ds.taxonomy);
    json doc;
    doc["informativeness"] = informativeness;
    json arr = json::array();
    for (std::size_t i = 0; i < sets.size(); ++i) {
      arr.push_back(
          {{"record_id", sets[i].record_id}, {"superclasses", collapsed[i]}});
    }
    doc["collapsed"] = std::move(arr);
    cpaudit::write_json(col_out, doc);
    sink.config = {{"sets", col_sets}, {"data", col_data}, {"out", col_out}};
    sink.write(col_out);
    std::printf("informativeness %.4f over %zu sets\n", informativeness,
                sets.size());
    return 0;
  }

  if (shift->parsed()) {
    sink.command = "shift";
    sink.input(shift_cal);
    sink.input(shift_data);
    const auto cal = load(shift_cal);
    const auto data = load(shift_data);
    const auto sc = make_score_config(shift_score, shift_alpha, shift_seed);
    auto spec =
        cpaudit::shift_spec_from_json(inline_or_file(shift_spec, sink));
    if (spec.kind == cpaudit::ShiftSpec::Kind::label_shift &&
        spec.target.empty()) {
      spec.target = cpaudit::adversarial_label_target(cal, data, sc);
    }
    const auto result = cpaudit::shift_experiment(cal, data, spec, sc,
                                                  shift_recal, shift_seed);
    cpaudit::write_json(shift_out, cpaudit::to_json(result));
    sink.config = {{"cal", shift_cal},     {"data", shift_data},
                   {"spec", shift_spec},   {"alpha", shift_alpha},
                   {"score", shift_score}, {"n_recal", shift_recal},
                   {"out", shift_out}};
    sink.seeds = {shift_seed, spec.seed};
    sink.write(shift_out);
    std::printf(
        "coverage before %.4f, after shift %.4f, after recalibration %.4f\n",
        result.coverage_before, result.coverage_after_shift,
        result.coverage_after_recalibration);
    return 0;
  }

  if (selective->parsed()) {
    sink.command = "selective";
    sink.input(sel_data);
    const auto ds = load(sel_data);
    cpaudit::SelectiveConfig cfg;
    cfg.delta = sel_delta;
    cfg.target_accuracy = sel_target;
    if (sel_bound == "hoeffding") {
      cfg.bound = cpaudit::BoundKind::hoeffding;
    } else if (sel_bound == "clopper-pearson") {
      cfg.bound = cpaudit::BoundKind::clopper_pearson;
    } else {
      throw ValidationError("unknown bound '" + sel_bound +
                            "' (expected hoeffding or clopper-pearson)");
    }
    const auto result = cpaudit::selective_curve(ds, cfg);
    if (cpaudit::format_for_path(sel_out) == cpaudit::FileFormat::json) {
      cpaudit::write_json(sel_out, cpaudit::to_json(result));
    } else {
      cpaudit::write_text(sel_out, cpaudit::selective_curve_csv(result));
    }
    if (sel_target) {
      cfg.grid = cpaudit::default_lambda_grid(ds);
      const auto cert = cpaudit::choose_lambda(ds, cfg);
      json cdoc;
      cdoc["target_accuracy"] = *sel_target;
      cdoc["delta"] = sel_delta;
      cdoc["certified"] = cert.has_value();
      if (cert) {
        cdoc["lambda"] = cert->first;
        cdoc["certified_bound"] = cert->second;
      }
      fs::path cert_path = sel_out;
      cert_path.replace_extension(".cert.json");
      cpaudit::write_json(cert_path, cdoc);
    }
    sink.config = {{"data", sel_data},
                   {"delta", sel_delta},
                   {"target", sel_target ? json(*sel_target) : json()},
                   {"bound", sel_bound},
                   {"out", sel_out}};
    sink.write(sel_out);
    return 0;
  }

  if (pitfalls->parsed()) {
    sink.command = "pitfalls";
    cpaudit::PitfallConfig cfg;
    cfg.seed = pit_seed;
    cfg.alpha = pit_alpha;
    cfg.delta = pit_delta;
    cfg.only = pit_only;
    cfg.threads = pit_threads;
    const auto doc = cpaudit::run_pitfalls(cfg);
    cpaudit::write_json(pit_out, doc);
    for (const auto& [slug, body] : doc.at("pitfalls").items()) {
      std::printf("[%s] %s\n",
                  body.at("verdict").get<std::string>().c_str(),
                  slug.c_str());
    }
    sink.config = {{"only", pit_only},
                   {"alpha", pit_alpha},
                   {"delta", pit_delta},
                   {"parallel_trials", pit_threads},
                   {"out", pit_out}};
    sink.seeds = {pit_seed};
    sink.write(pit_out);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 2;
  }
}
