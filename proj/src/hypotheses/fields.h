#pragma once

#include "../analysis/features.h"
#include "../linguistics/word_properties.h"

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace swi::hypotheses {

enum class FieldType { boolean, number, enumeration };

struct FieldInfo {
    std::string name;
    FieldType type;
    std::vector<std::string> values; // enumeration members
    bool feature = false;            // a DiagnosticFeatures member
};

// Everything a guard may mention: the diagnostic features plus booleans and
// counts derived from the target's word properties.
const std::vector<FieldInfo> &guard_fields();
const FieldInfo *find_field(const std::string &name);

using Value = std::variant<bool, double, std::string>;

std::string to_string(const Value &v);

// Direct lookup, used by the reference evaluator. Throws SchemaError for an
// unknown name.
Value field_value(const std::string &name, const analysis::DiagnosticFeatures &features,
                  const linguistics::WordProperties &props);

// Evidence references name a record field ("target.bases",
// "attempt.graphemes") or a feature ("features.phoneme_match").
bool is_evidence_ref(const std::string &ref);

} // namespace swi::hypotheses
