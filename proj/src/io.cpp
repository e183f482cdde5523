#include "cpaudit/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace cpaudit {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw ValidationError(where + ": malformed number '" + s + "'");
  }
  return v;
}

long parse_long(const std::string& s, const std::string& where) {
  char* end = nullptr;
  long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') {
    throw ValidationError(where + ": malformed integer '" + s + "'");
  }
  return v;
}

LabeledDataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty CSV file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_line(line);
  if (header.empty() || header[0] != "id") {
    throw ValidationError("CSV header must start with 'id'");
  }
  int k = 0;
  std::size_t col = 1;
  while (col < header.size() &&
         header[col] == "p_" + std::to_string(k)) {
    ++k;
    ++col;
  }
  if (k < 2) throw ValidationError("CSV header needs columns p_0..p_{K-1}, K >= 2");
  if (col >= header.size() || header[col] != "label") {
    throw ValidationError("CSV header must have 'label' after the probabilities");
  }
  ++col;
  std::vector<std::string> group_names;
  for (; col < header.size(); ++col) {
    if (header[col].rfind("group.", 0) != 0 || header[col].size() <= 6) {
      throw ValidationError("unexpected CSV column '" + header[col] + "'");
    }
    group_names.push_back(header[col].substr(6));
  }
  LabeledDataset ds;
  for (int c = 0; c < k; ++c) ds.class_names.push_back("class_" + std::to_string(c));
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = "row " + std::to_string(row);
    const auto fields = split_line(line);
    if (fields.size() != header.size()) {
      throw ValidationError(where + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
    }
    PredictionRecord rec;
    rec.id = fields[0];
    for (int c = 0; c < k; ++c) {
      rec.probs.push_back(parse_double(fields[1 + c], where));
    }
    rec.label = static_cast<int>(parse_long(fields[1 + k], where));
    for (std::size_t g = 0; g < group_names.size(); ++g) {
      const std::string& v = fields[2 + k + g];
      if (!v.empty()) rec.groups[group_names[g]] = v;
    }
    validate_record(rec, k, where);
    ds.records.push_back(std::move(rec));
  }
  if (ds.records.empty()) throw ValidationError("CSV has a header but no rows");
  return ds;
}

LabeledDataset load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("records") ||
      !doc.contains("class_names")) {
    throw ValidationError("dataset JSON needs 'class_names' and 'records'");
  }
  LabeledDataset ds;
  for (const auto& name : doc.at("class_names")) {
    ds.class_names.push_back(name.get<std::string>());
  }
  if (doc.contains("taxonomy")) {
    for (const auto& [key, value] : doc.at("taxonomy").items()) {
      ds.taxonomy[static_cast<int>(parse_long(key, "taxonomy"))] =
          value.get<int>();
    }
  }
  std::size_t i = 0;
  for (const auto& item : doc.at("records")) {
    const std::string where = "record " + std::to_string(i);
    PredictionRecord rec;
    try {
      rec.id = item.at("id").get<std::string>();
      rec.probs = item.at("probs").get<std::vector<double>>();
      rec.label = item.at("label").get<int>();
      if (item.contains("groups")) {
        for (const auto& [gk, gv] : item.at("groups").items()) {
          rec.groups[gk] = gv.get<std::string>();
        }
      }
    } catch (const json::exception& e) {
      throw ValidationError(where + ": " + e.what());
    }
    ds.records.push_back(std::move(rec));
    ++i;
  }
  validate_dataset(ds);
  return ds;
}

void save_csv(const LabeledDataset& ds, const std::filesystem::path& path) {
  if (ds.has_taxonomy()) {
    throw ValidationError("CSV cannot carry a taxonomy; use JSON");
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  std::set<std::string> group_names;
  for (const auto& r : ds.records) {
    for (const auto& [k, v] : r.groups) group_names.insert(k);
  }
  const int k = ds.num_classes();
  out << "id";
  for (int c = 0; c < k; ++c) out << ",p_" << c;
  out << ",label";
  for (const auto& g : group_names) out << ",group." << g;
  out << "\n";
  for (const auto& r : ds.records) {
    out << r.id;
    for (double p : r.probs) out << "," << format_double(p);
    out << "," << r.label;
    for (const auto& g : group_names) {
      auto it = r.groups.find(g);
      out << "," << (it == r.groups.end() ? "" : it->second);
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed for " + path.string());
}

void save_json(const LabeledDataset& ds, const std::filesystem::path& path) {
  json doc;
  doc["class_names"] = ds.class_names;
  if (ds.has_taxonomy()) {
    json tax = json::object();
    for (const auto& [c, s] : ds.taxonomy) tax[std::to_string(c)] = s;
    doc["taxonomy"] = tax;
  }
  json records = json::array();
  for (const auto& r : ds.records) {
    json item;
    item["id"] = r.id;
    item["probs"] = r.probs;
    item["label"] = r.label;
    if (!r.groups.empty()) item["groups"] = r.groups;
    records.push_back(std::move(item));
  }
  doc["records"] = std::move(records);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc.dump(2) << "\n";
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

FileFormat parse_format(const std::string& name) {
  if (name == "csv") return FileFormat::csv;
  if (name == "json") return FileFormat::json;
  throw ValidationError("unknown format '" + name + "' (expected csv or json)");
}

FileFormat format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".json" ? FileFormat::json : FileFormat::csv;
}

LabeledDataset load_dataset(const std::filesystem::path& path,
                            FileFormat format) {
  if (!std::filesystem::exists(path)) {
    throw IoError("no such file: " + path.string());
  }
  return format == FileFormat::csv ? load_csv(path) : load_json(path);
}

void save_dataset(const LabeledDataset& ds, const std::filesystem::path& path,
                  FileFormat format) {
  if (format == FileFormat::csv) {
    save_csv(ds, path);
  } else {
    save_json(ds, path);
  }
}

}  // namespace cpaudit
