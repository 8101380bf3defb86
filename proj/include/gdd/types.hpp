#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gdd {

// Block size is carried as a parameter, but all shipped data assumes k = 4.
struct BlockSizeConfig {
    int k = 4;
};
inline constexpr int kDefaultBlockSize = 4;

/// Multiset of group sizes, kept in canonical descending order.
class GroupType {
public:
    GroupType() = default;
    explicit GroupType(std::vector<int> sizes);

    /// Parses exponential notation, e.g. "2^2 5^5" or "5" (^1 may be omitted).
    /// Throws std::invalid_argument on malformed tokens, zero sizes or zero
    /// exponents. Order of tokens does not matter; the result is canonical.
    static GroupType parse(std::string_view text);

    /// Canonical exponential notation, sizes descending ("5^5 2^2").
    std::string str() const;

    const std::vector<int>& sizes() const { return sizes_; }
    int group_count() const { return static_cast<int>(sizes_.size()); }
    long long point_count() const;

    bool empty() const { return sizes_.empty(); }

    /// Sum g_i (v - g_i) over all groups; exact in 64 bits for v <= 10^6.
    long long sum_g_v_minus_g() const;

    /// Number of groups of exactly this size.
    int count_of(int size) const;

    bool operator==(const GroupType&) const = default;
    bool operator<(const GroupType& o) const { return sizes_ < o.sizes_; }

private:
    std::vector<int> sizes_;  // descending, all > 0
};

/// Convenience: the type 2^t 5^s.
GroupType type_2t5s(int t, int s);

enum class Provenance { ShippedTable, Developed, Searched, FillIn, Manual };

std::string provenance_str(Provenance p);
std::optional<Provenance> provenance_parse(std::string_view s);

/// A concrete design: dense points 0..num_points-1, a partition into groups,
/// and a list of blocks. Human-readable labels are optional; the verifier and
/// searcher index arrays, never strings.
struct Design {
    int num_points = 0;
    std::vector<std::vector<int>> groups;   // partition of 0..num_points-1
    std::vector<int> point_group;           // point -> group index
    std::vector<std::vector<int>> blocks;   // each sorted ascending
    Provenance provenance = Provenance::Manual;
    std::vector<std::string> labels;        // empty, or one per point

    GroupType type() const;
    const std::string& label(int point) const;
};

/// Builds a Design and validates structure: groups partition the point set
/// exactly, block entries are in range. Does not check the GDD axioms.
/// Throws std::invalid_argument on structural problems.
Design make_design(int num_points, std::vector<std::vector<int>> groups,
                   std::vector<std::vector<int>> blocks, Provenance provenance,
                   std::vector<std::string> labels = {});

GroupType type_of(const Design& d);

/// b = sum g_i(v - g_i) / (k(k-1)). Throws std::domain_error when the sum is
/// not divisible (which already signals an infeasible type).
long long expected_block_count(const GroupType& gt, int k = kDefaultBlockSize);

/// Canonical design-file serialization (LF line endings, newline-terminated).
/// Sections: type, points, provenance, groups, blocks, then optional labels.
std::string serialize_design(const Design& d);
Design parse_design(std::string_view text);

Design load_design_file(const std::string& path);
void write_design_file(const std::string& path, const Design& d);

}  // namespace gdd
