#pragma once

#include <filesystem>
#include <string>

#include "cpaudit/dataset.hpp"

namespace cpaudit {

enum class FileFormat { csv, json };

FileFormat parse_format(const std::string& name);

// CSV schema: header `id,p_0,...,p_{K-1},label[,group.<name>...]`, UTF-8,
// decimal point, no quoting. JSON schema: object with `class_names`,
// optional `taxonomy` (class index -> superclass index), and `records`.
// Taxonomies are representable in JSON only.
LabeledDataset load_dataset(const std::filesystem::path& path,
                            FileFormat format);

// Probabilities are written with 17 significant digits so a round trip
// reproduces them bit-exactly.
void save_dataset(const LabeledDataset& ds, const std::filesystem::path& path,
                  FileFormat format);

// Infers csv/json from the file extension; defaults to csv.
FileFormat format_for_path(const std::filesystem::path& path);

}  // namespace cpaudit
