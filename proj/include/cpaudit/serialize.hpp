#pragma once

#include <json.hpp>

#include <filesystem>

#include "cpaudit/audit.hpp"
#include "cpaudit/conformal.hpp"
#include "cpaudit/selective.hpp"
#include "cpaudit/shift.hpp"
#include "cpaudit/synth.hpp"

// JSON forms of results and reports. nlohmann's object type is map-backed,
// so keys serialize sorted and identical values produce identical bytes,
// which the byte-stable output contract relies on. Primary artifacts never
// carry timestamps; those live in the run manifest sidecar only.

namespace cpaudit {

nlohmann::json to_json(const CalibrationResult& calib);
CalibrationResult calibration_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const std::vector<PredictionSet>& sets, double alpha);
std::vector<PredictionSet> sets_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const StratumStat& stat);
nlohmann::json to_json(const CoverageReport& report);
nlohmann::json to_json(const CalibrationCurve& curve);
nlohmann::json to_json(const std::vector<EfficiencyCurvePoint>& points);
nlohmann::json to_json(const ShiftExperimentResult& result);
nlohmann::json to_json(const SelectiveCurve& curve);
nlohmann::json to_json(const SizeOneMisuseReport& report);

SynthConfig synth_config_from_json(const nlohmann::json& doc);
ShiftSpec shift_spec_from_json(const nlohmann::json& doc);

// Tidy CSV (one row per stratum) for plotting tools.
std::string coverage_report_csv(const CoverageReport& report);
std::string calibration_curve_csv(const CalibrationCurve& curve);
std::string efficiency_curve_csv(const std::vector<EfficiencyCurvePoint>& points);
std::string selective_curve_csv(const SelectiveCurve& curve);
std::string sets_csv(const std::vector<PredictionSet>& sets);

void write_text(const std::filesystem::path& path, const std::string& text);
nlohmann::json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace cpaudit
