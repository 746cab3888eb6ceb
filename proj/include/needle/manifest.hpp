#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "needle/yolo.hpp"

namespace needle {

/// One image/label pair from a dataset directory.
struct DatasetItem {
    std::string image_id;  // shared filename stem
    std::filesystem::path image_path;
    std::filesystem::path label_path;
    std::vector<YoloRecord> records;
};

/// Scans <root>/images/*.pgm and <root>/labels/*.txt, pairs files by stem and
/// returns the items sorted lexicographically by stem — independent of
/// filesystem enumeration order. Unpaired files and label files that fail to
/// parse are skipped with a message appended to `warnings` (when given).
/// Throws std::invalid_argument when either subdirectory is missing.
std::vector<DatasetItem> load_manifest(const std::filesystem::path& root,
                                       std::vector<std::string>* warnings = nullptr);

}  // namespace needle
