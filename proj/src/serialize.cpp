#include "cpaudit/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace cpaudit {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* variant_name(CalibrationVariant v) {
  switch (v) {
    case CalibrationVariant::plain: return "plain";
    case CalibrationVariant::weighted: return "weighted";
    case CalibrationVariant::mondrian: return "mondrian";
  }
  return "plain";
}

CalibrationVariant variant_from_name(const std::string& name) {
  if (name == "plain") return CalibrationVariant::plain;
  if (name == "weighted") return CalibrationVariant::weighted;
  if (name == "mondrian") return CalibrationVariant::mondrian;
  throw ValidationError("unknown calibration variant '" + name + "'");
}

}  // namespace

json to_json(const CalibrationResult& calib) {
  json doc;
  doc["alpha"] = calib.alpha;
  doc["n_cal"] = calib.n_cal;
  doc["variant"] = variant_name(calib.variant);
  doc["randomized"] = calib.randomized;
  if (calib.variant == CalibrationVariant::mondrian) {
    doc["partition"] = calib.partition;
    json thresholds = json::object();
    for (const auto& [key, t] : calib.partition_thresholds) {
      thresholds[key] = {{"tau", t.tau}, {"n", t.n}};
    }
    doc["partition_thresholds"] = thresholds;
  } else {
    doc["tau"] = calib.tau;
    if (!calib.weights_used.empty()) doc["weights_used"] = calib.weights_used;
  }
  return doc;
}

CalibrationResult calibration_from_json(const json& doc) {
  CalibrationResult calib;
  try {
    calib.alpha = doc.at("alpha").get<double>();
    calib.n_cal = doc.at("n_cal").get<std::size_t>();
    calib.variant = variant_from_name(doc.at("variant").get<std::string>());
    calib.randomized = doc.value("randomized", false);
    if (calib.variant == CalibrationVariant::mondrian) {
      calib.partition = doc.at("partition").get<std::string>();
      for (const auto& [key, t] : doc.at("partition_thresholds").items()) {
        calib.partition_thresholds[key] = {t.at("tau").get<double>(),
                                           t.at("n").get<std::size_t>()};
      }
    } else {
      calib.tau = doc.at("tau").get<double>();
      if (doc.contains("weights_used")) {
        calib.weights_used = doc.at("weights_used").get<std::vector<double>>();
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("calibration JSON: ") + e.what());
  }
  return calib;
}

json to_json(const std::vector<PredictionSet>& sets, double alpha) {
  json doc;
  doc["alpha"] = alpha;
  json arr = json::array();
  for (const auto& set : sets) {
    json item;
    item["record_id"] = set.record_id;
    item["members"] = set.members;
    if (set.score_of_label) item["score_of_label"] = *set.score_of_label;
    arr.push_back(std::move(item));
  }
  doc["sets"] = std::move(arr);
  return doc;
}

std::vector<PredictionSet> sets_from_json(const json& doc) {
  std::vector<PredictionSet> sets;
  try {
    for (const auto& item : doc.at("sets")) {
      PredictionSet set;
      set.record_id = item.at("record_id").get<std::string>();
      set.members = item.at("members").get<std::vector<int>>();
      if (item.contains("score_of_label")) {
        set.score_of_label = item.at("score_of_label").get<double>();
      }
      if (set.members.empty()) {
        throw ValidationError("prediction set for '" + set.record_id +
                              "' is empty");
      }
      sets.push_back(std::move(set));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("sets JSON: ") + e.what());
  }
  return sets;
}

json to_json(const StratumStat& stat) {
  return {{"rate", stat.rate},
          {"ci_lo", stat.ci.lo},
          {"ci_hi", stat.ci.hi},
          {"n", stat.n}};
}

json to_json(const CoverageReport& report) {
  json doc;
  doc["alpha"] = report.alpha;
  doc["marginal"] = to_json(report.marginal);
  json per_class = json::object();
  for (const auto& [cls, stat] : report.per_class) {
    per_class[std::to_string(cls)] = to_json(stat);
  }
  doc["per_class"] = per_class;
  json per_group = json::object();
  for (const auto& [key, stat] : report.per_group) {
    per_group[key] = to_json(stat);
  }
  doc["per_group"] = per_group;
  json per_size = json::object();
  for (const auto& [size, stat] : report.per_set_size) {
    per_size[std::to_string(size)] = to_json(stat);
  }
  doc["per_set_size"] = per_size;
  doc["efficiency"] = {{"mean_size", report.efficiency.mean_size},
                       {"fraction_singleton", report.efficiency.fraction_singleton},
                       {"fraction_full", report.efficiency.fraction_full}};
  return doc;
}

json to_json(const CalibrationCurve& curve) {
  json arr = json::array();
  for (const auto& p : curve.points) {
    arr.push_back({{"target", p.target},
                   {"empirical", p.empirical},
                   {"mean_size", p.mean_size}});
  }
  return {{"points", arr}};
}

json to_json(const std::vector<EfficiencyCurvePoint>& points) {
  json arr = json::array();
  for (const auto& p : points) {
    arr.push_back({{"target", p.target},
                   {"fraction_singleton", p.fraction_singleton},
                   {"mean_size", p.mean_size}});
  }
  return {{"points", arr}};
}

json to_json(const ShiftExperimentResult& result) {
  json doc;
  doc["alpha"] = result.alpha;
  doc["n_recal"] = result.n_recal;
  doc["coverage_before"] = result.coverage_before;
  doc["coverage_after_shift"] = result.coverage_after_shift;
  doc["coverage_after_recalibration"] = result.coverage_after_recalibration;
  doc["report_before"] = to_json(result.report_before);
  doc["report_after"] = to_json(result.report_after);
  doc["report_recal"] = to_json(result.report_recal);
  return doc;
}

json to_json(const SelectiveCurve& curve) {
  json arr = json::array();
  for (const auto& p : curve.points) {
    arr.push_back({{"lambda", p.lambda},
                   {"rejection_fraction", p.rejection_fraction},
                   {"n_kept", p.n_kept},
                   {"empirical_accuracy", p.empirical_accuracy},
                   {"lower_bound", p.lower_bound}});
  }
  return {{"delta", curve.delta}, {"points", arr}};
}

json to_json(const SizeOneMisuseReport& report) {
  json arr = json::array();
  for (const auto& r : report.rows) {
    arr.push_back({{"alpha", r.alpha},
                   {"fraction_size_one", r.fraction_size_one},
                   {"n_size_one", r.n_size_one},
                   {"size_one_accuracy", r.size_one_accuracy},
                   {"matched_lambda", r.matched_lambda},
                   {"selective_accuracy", r.selective_accuracy},
                   {"selective_lower_bound", r.selective_lower_bound}});
  }
  return {{"delta", report.delta}, {"rows", arr}};
}

SynthConfig synth_config_from_json(const json& doc) {
  SynthConfig cfg;
  try {
    cfg.n = doc.at("n").get<std::size_t>();
    cfg.k = doc.at("k").get<int>();
    cfg.class_priors = doc.at("class_priors").get<std::vector<double>>();
    if (doc.at("concentration").is_number()) {
      cfg.concentration.assign(static_cast<std::size_t>(cfg.k),
                               doc.at("concentration").get<double>());
    } else {
      cfg.concentration = doc.at("concentration").get<std::vector<double>>();
    }
    cfg.seed = doc.value("seed", std::uint64_t{0});
    if (doc.contains("group_specs")) {
      for (const auto& g : doc.at("group_specs")) {
        GroupSpec spec;
        spec.attribute = g.at("attribute").get<std::string>();
        for (const auto& [name, share] : g.at("categories").items()) {
          spec.categories.emplace_back(name, share.get<double>());
        }
        if (g.contains("multipliers")) {
          for (const auto& [name, mult] : g.at("multipliers").items()) {
            spec.multipliers[name] = mult.get<double>();
          }
        }
        cfg.group_specs.push_back(std::move(spec));
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("synth config JSON: ") + e.what());
  }
  return cfg;
}

ShiftSpec shift_spec_from_json(const json& doc) {
  ShiftSpec spec;
  try {
    const auto kind = doc.at("kind").get<std::string>();
    if (kind == "label_shift") {
      spec.kind = ShiftSpec::Kind::label_shift;
      if (doc.contains("target") && doc.at("target").is_array()) {
        spec.target = doc.at("target").get<std::vector<double>>();
      }
    } else if (kind == "score_shift") {
      spec.kind = ShiftSpec::Kind::score_shift;
      spec.temperature = doc.value("temperature", 1.0);
      spec.noise_scale = doc.value("noise_scale", 0.0);
    } else {
      throw ValidationError("unknown shift kind '" + kind + "'");
    }
    spec.seed = doc.value("seed", std::uint64_t{0});
    spec.size = doc.value("size", std::size_t{0});
  } catch (const json::exception& e) {
    throw ValidationError(std::string("shift spec JSON: ") + e.what());
  }
  return spec;
}

std::string coverage_report_csv(const CoverageReport& report) {
  std::ostringstream out;
  out << "stratum,key,rate,ci_lo,ci_hi,n\n";
  auto row = [&](const std::string& stratum, const std::string& key,
                 const StratumStat& s) {
    out << stratum << "," << key << "," << fmt(s.rate) << "," << fmt(s.ci.lo)
        << "," << fmt(s.ci.hi) << "," << s.n << "\n";
  };
  row("marginal", "", report.marginal);
  for (const auto& [cls, stat] : report.per_class) {
    row("class", std::to_string(cls), stat);
  }
  for (const auto& [key, stat] : report.per_group) row("group", key, stat);
  for (const auto& [size, stat] : report.per_set_size) {
    row("set_size", std::to_string(size), stat);
  }
  return out.str();
}

std::string calibration_curve_csv(const CalibrationCurve& curve) {
  std::ostringstream out;
  out << "target,empirical,mean_size\n";
  for (const auto& p : curve.points) {
    out << fmt(p.target) << "," << fmt(p.empirical) << "," << fmt(p.mean_size)
        << "\n";
  }
  return out.str();
}

std::string efficiency_curve_csv(const std::vector<EfficiencyCurvePoint>& points) {
  std::ostringstream out;
  out << "target,fraction_singleton,mean_size\n";
  for (const auto& p : points) {
    out << fmt(p.target) << "," << fmt(p.fraction_singleton) << ","
        << fmt(p.mean_size) << "\n";
  }
  return out.str();
}

std::string selective_curve_csv(const SelectiveCurve& curve) {
  std::ostringstream out;
  out << "lambda,rejection_fraction,n_kept,empirical_accuracy,lower_bound\n";
  for (const auto& p : curve.points) {
    out << fmt(p.lambda) << "," << fmt(p.rejection_fraction) << "," << p.n_kept
        << "," << fmt(p.empirical_accuracy) << "," << fmt(p.lower_bound)
        << "\n";
  }
  return out.str();
}

std::string sets_csv(const std::vector<PredictionSet>& sets) {
  std::ostringstream out;
  out << "id,size,members\n";
  for (const auto& set : sets) {
    out << set.record_id << "," << set.members.size() << ",";
    for (std::size_t i = 0; i < set.members.size(); ++i) {
      if (i) out << "|";
      out << set.members[i];
    }
    out << "\n";
  }
  return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

}  // namespace cpaudit
