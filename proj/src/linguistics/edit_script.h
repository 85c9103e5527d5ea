#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace swi::linguistics {

// Operations that turn `source` into `target`. `insert` means the target
// element is missing from the source; `remove` means the source element is
// extra. Positions index into the respective sequences; for an insert,
// source_pos is the source position the element would go before, and for a
// remove, target_pos is the target position the extra element sits before.
enum class EditKind { match, substitute, insert, remove };

struct EditOp {
    EditKind kind;
    std::size_t source_pos;
    std::size_t target_pos;
    std::string source;
    std::string target;

    bool operator==(const EditOp &) const = default;
};

struct EditScript {
    std::vector<EditOp> ops;
    std::size_t cost = 0;

    std::vector<EditOp> edits() const;
};

// Minimal edit script between two unit sequences. Ties among equal-cost
// scripts are broken by (fewest substitutions between units sharing no
// letter, fewest insertions/removals, leftmost edit).
EditScript diff(const std::vector<std::string> &source, const std::vector<std::string> &target);

// Same over the characters of two strings.
EditScript diff_chars(const std::string &source, const std::string &target);

std::size_t edit_distance(const std::vector<std::string> &a, const std::vector<std::string> &b);
std::size_t edit_distance(const std::string &a, const std::string &b);

std::string to_string(EditKind kind);

} // namespace swi::linguistics
