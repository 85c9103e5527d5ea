#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace swi::analysis {

enum class ErrorCategory {
    gpc_mismatch,
    morphological_confusion,
    suffixing_convention,
    segmentation,
    homophone,
    semantic_mismatch,
    visual_confusion,
};

inline constexpr ErrorCategory all_categories[] = {
    ErrorCategory::gpc_mismatch,      ErrorCategory::morphological_confusion, ErrorCategory::suffixing_convention,
    ErrorCategory::segmentation,      ErrorCategory::homophone,               ErrorCategory::semantic_mismatch,
    ErrorCategory::visual_confusion,
};

std::string to_string(ErrorCategory c);
// Throws SchemaError for an unknown name.
ErrorCategory category_from_string(const std::string &name);

struct CategoryInfo {
    ErrorCategory id;
    std::string descriptor;
    // Learning effects any one of which resolves the category.
    std::vector<std::string> resolved_by;
};

class ErrorTaxonomy {
public:
    static ErrorTaxonomy load(const std::filesystem::path &file);
    static ErrorTaxonomy from_json_text(const std::string &text);

    const CategoryInfo &info(ErrorCategory c) const;
    bool resolves(ErrorCategory c, const std::string &effect) const;
    const std::string &version() const { return version_; }

private:
    std::string version_;
    std::map<ErrorCategory, CategoryInfo> categories;
};

} // namespace swi::analysis
