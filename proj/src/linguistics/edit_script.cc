#include "edit_script.h"

#include <algorithm>
#include <array>
#include <limits>
#include <tuple>

using namespace std;

namespace swi::linguistics {

namespace {
// (edits, substitutions between units with no shared letter, indels)
using Cost = array<size_t, 3>;

Cost operator+(Cost a, const Cost &b) {
    for (size_t i = 0; i < a.size(); ++i)
        a[i] += b[i];
    return a;
}

bool shares_letter(const string &a, const string &b) {
    return any_of(a.begin(), a.end(), [&](char c) { return b.find(c) != string::npos; });
}

Cost substitution_cost(const string &a, const string &b) {
    return {1, shares_letter(a, b) ? size_t{0} : size_t{1}, 0};
}

constexpr Cost INDEL{1, 0, 1};
constexpr Cost FREE{0, 0, 0};
} // namespace

vector<EditOp> EditScript::edits() const {
    vector<EditOp> out;
    for (const EditOp &op : ops)
        if (op.kind != EditKind::match)
            out.push_back(op);
    return out;
}

EditScript diff(const vector<string> &source, const vector<string> &target) {
    const size_t n = source.size();
    const size_t m = target.size();
    // best[i][j]: cheapest way to turn source[i:] into target[j:]
    vector<vector<Cost>> best(n + 1, vector<Cost>(m + 1, FREE));
    for (size_t i = n + 1; i-- > 0;) {
        for (size_t j = m + 1; j-- > 0;) {
            if (i == n && j == m)
                continue;
            Cost c{numeric_limits<size_t>::max() / 4, 0, 0};
            if (i < n && j < m) {
                Cost diag = source[i] == target[j] ? best[i + 1][j + 1]
                                                   : substitution_cost(source[i], target[j]) + best[i + 1][j + 1];
                c = min(c, diag);
            }
            if (i < n)
                c = min(c, INDEL + best[i + 1][j]);
            if (j < m)
                c = min(c, INDEL + best[i][j + 1]);
            best[i][j] = c;
        }
    }

    EditScript script;
    script.cost = best[0][0][0];
    size_t i = 0, j = 0;
    while (i < n || j < m) {
        const Cost &here = best[i][j];
        // Preference on ties: substitute, remove, insert, then match. Taking
        // an edit before a match places it at the leftmost position.
        if (i < n && j < m && source[i] != target[j] &&
            substitution_cost(source[i], target[j]) + best[i + 1][j + 1] == here) {
            script.ops.push_back({EditKind::substitute, i, j, source[i], target[j]});
            ++i;
            ++j;
        } else if (i < n && INDEL + best[i + 1][j] == here) {
            script.ops.push_back({EditKind::remove, i, j, source[i], ""});
            ++i;
        } else if (j < m && INDEL + best[i][j + 1] == here) {
            script.ops.push_back({EditKind::insert, i, j, "", target[j]});
            ++j;
        } else {
            script.ops.push_back({EditKind::match, i, j, source[i], target[j]});
            ++i;
            ++j;
        }
    }
    return script;
}

static vector<string> chars_of(const string &s) {
    vector<string> out;
    out.reserve(s.size());
    for (char c : s)
        out.emplace_back(1, c);
    return out;
}

EditScript diff_chars(const string &source, const string &target) {
    return diff(chars_of(source), chars_of(target));
}

size_t edit_distance(const vector<string> &a, const vector<string> &b) {
    vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (size_t j = 0; j <= b.size(); ++j)
        prev[j] = j;
    for (size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (size_t j = 1; j <= b.size(); ++j) {
            size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = min({sub, prev[j] + 1, cur[j - 1] + 1});
        }
        swap(prev, cur);
    }
    return prev[b.size()];
}

size_t edit_distance(const string &a, const string &b) {
    return edit_distance(chars_of(a), chars_of(b));
}

string to_string(EditKind kind) {
    switch (kind) {
    case EditKind::match:
        return "match";
    case EditKind::substitute:
        return "substitute";
    case EditKind::insert:
        return "insert";
    case EditKind::remove:
        return "remove";
    }
    return "match";
}

} // namespace swi::linguistics
