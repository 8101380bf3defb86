#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gdd/types.hpp"

namespace gdd {

/// Result of evaluating one of the eight necessary conditions. Guarded
/// conditions (5-8) report applicable=false and passed=true when the guard
/// does not hold ("pass-vacuous").
struct ConditionResult {
    int condition = 0;       // 1..8
    bool applicable = true;
    bool passed = true;
    std::string detail;      // witness on failure, guard note otherwise
};

struct FeasibilityReport {
    GroupType type;
    std::vector<ConditionResult> conditions;  // always 8 entries
    std::vector<std::string> notes;           // e.g. ambiguous condition-8 readings
    bool feasible() const;
    std::string str() const;
};

/// Evaluates all eight necessary conditions for a 4-GDD of this type.
FeasibilityReport check_feasible(const GroupType& gt);

/// Fast path used by the enumerator and the planner; no report is built.
bool is_feasible(const GroupType& gt);

/// Necessary congruences for type 2^t 5^s: s+t = 1 (mod 3) and s = 0 or
/// 1 (mod 4). Necessary only; callers needing the full test use
/// check_feasible, and existence is a separate question again.
bool feasible_2t5s(long long t, long long s);

/// All feasible types with 4 <= v <= v_max, sorted by (v, canonical string).
std::vector<GroupType> enumerate_feasible(int v_max);

/// Existence answer for feasible types on at most 30 points.
/// nullopt when v > 30 or the type is not feasible.
std::optional<bool> small_case_existence(const GroupType& gt);

/// The feasible types on at most 30 points, in (v, notation) order.
const std::vector<GroupType>& small_case_feasible_types();

}  // namespace gdd
