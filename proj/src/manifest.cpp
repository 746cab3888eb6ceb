#include "needle/manifest.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace needle {

namespace fs = std::filesystem;

namespace {

void note(std::vector<std::string>* warnings, std::string msg) {
    if (warnings) warnings->push_back(std::move(msg));
}

std::map<std::string, fs::path> stems_with_extension(const fs::path& dir,
                                                     const char* ext) {
    std::map<std::string, fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const fs::path& p = entry.path();
        if (p.extension() == ext) out.emplace(p.stem().string(), p);
    }
    return out;  // std::map keeps stems sorted
}

}  // namespace

std::vector<DatasetItem> load_manifest(const fs::path& root,
                                       std::vector<std::string>* warnings) {
    const fs::path images_dir = root / "images";
    const fs::path labels_dir = root / "labels";
    if (!fs::is_directory(images_dir))
        throw std::invalid_argument("missing images/ directory under " + root.string());
    if (!fs::is_directory(labels_dir))
        throw std::invalid_argument("missing labels/ directory under " + root.string());

    const auto images = stems_with_extension(images_dir, ".pgm");
    const auto labels = stems_with_extension(labels_dir, ".txt");

    std::vector<DatasetItem> items;
    for (const auto& [stem, image_path] : images) {
        const auto lbl = labels.find(stem);
        if (lbl == labels.end()) {
            note(warnings, "image without label, skipped: " + image_path.string());
            continue;
        }
        DatasetItem item;
        item.image_id = stem;
        item.image_path = image_path;
        item.label_path = lbl->second;
        try {
            item.records = read_label_file(item.label_path);
        } catch (const std::exception& e) {
            note(warnings, std::string("unparsable label, item skipped: ") + e.what());
            continue;
        }
        items.push_back(std::move(item));
    }
    for (const auto& [stem, label_path] : labels)
        if (!images.count(stem))
            note(warnings, "label without image, skipped: " + label_path.string());
    return items;  // already stem-sorted via the ordered map
}

}  // namespace needle
