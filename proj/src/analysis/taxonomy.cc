#include "taxonomy.h"

#include "../common/errors.h"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

using namespace std;

namespace swi::analysis {

string to_string(ErrorCategory c) {
    switch (c) {
    case ErrorCategory::gpc_mismatch:
        return "gpc_mismatch";
    case ErrorCategory::morphological_confusion:
        return "morphological_confusion";
    case ErrorCategory::suffixing_convention:
        return "suffixing_convention";
    case ErrorCategory::segmentation:
        return "segmentation";
    case ErrorCategory::homophone:
        return "homophone";
    case ErrorCategory::semantic_mismatch:
        return "semantic_mismatch";
    case ErrorCategory::visual_confusion:
        return "visual_confusion";
    }
    return "?";
}

ErrorCategory category_from_string(const string &name) {
    for (ErrorCategory c : all_categories)
        if (to_string(c) == name)
            return c;
    throw SchemaError("unknown error category '" + name + "'");
}

ErrorTaxonomy ErrorTaxonomy::load(const filesystem::path &file) {
    ifstream in(file);
    if (!in)
        throw ConfigError("cannot open error taxonomy: " + file.string());
    stringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str());
}

ErrorTaxonomy ErrorTaxonomy::from_json_text(const string &text) {
    ErrorTaxonomy out;
    try {
        auto doc = nlohmann::json::parse(text);
        out.version_ = doc.value("version", "");
        for (const auto &c : doc.at("categories")) {
            CategoryInfo info;
            info.id = category_from_string(c.at("id").get<string>());
            info.descriptor = c.value("descriptor", "");
            info.resolved_by = c.at("resolved_by").get<vector<string>>();
            if (out.categories.count(info.id))
                throw DuplicateId("error category listed twice: " + to_string(info.id));
            out.categories[info.id] = info;
        }
    } catch (const nlohmann::json::exception &e) {
        throw SchemaError(string("error taxonomy: ") + e.what());
    }
    for (ErrorCategory c : all_categories)
        if (!out.categories.count(c))
            throw SchemaError("error taxonomy is missing category " + to_string(c));
    return out;
}

const CategoryInfo &ErrorTaxonomy::info(ErrorCategory c) const {
    return categories.at(c);
}

bool ErrorTaxonomy::resolves(ErrorCategory c, const string &effect) const {
    const auto &r = info(c).resolved_by;
    return find(r.begin(), r.end(), effect) != r.end();
}

} // namespace swi::analysis
