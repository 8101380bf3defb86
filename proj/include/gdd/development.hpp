#pragma once

#include <map>
#include <string>
#include <vector>

#include "gdd/types.hpp"

namespace gdd {

/// One class of points. Finite classes hold `count` points with subscripts in
/// Z_count that wrap under development; the infinite class is fixed by
/// development and uses 1-based subscripts.
struct PointClass {
    std::string label;
    bool infinite = false;
    int count = 0;  // == modulus for finite classes
};

struct PointRef {
    int class_index = 0;
    int subscript = 0;
};

struct BaseBlock {
    std::vector<PointRef> points;
    int declared_orbit = 0;  // number of distinct translates this block generates
};

/// A developable presentation: point classes, groups (already expanded to
/// point ids), base blocks, and optional explicit pre-blocks added before
/// development.
struct BaseBlockSystem {
    std::string name;
    GroupType declared_type;
    int modulus = 1;
    std::vector<PointClass> classes;
    std::vector<std::vector<int>> groups;       // point ids
    std::vector<BaseBlock> base_blocks;
    std::vector<std::vector<int>> pre_blocks;   // point ids

    int num_points() const;
    int point_id(const PointRef& r) const;
    int class_base(int class_index) const;
    std::string point_label(int point) const;
    /// One development step: adds +1 to every finite subscript, modulo the
    /// class size; infinite points stay put.
    int shift_point(int point, int amount) const;
};

/// Parses the base-block file format (header lines `name:`, `type:`,
/// `modulus:`, `classes:`, then `groups:`, `base_blocks:` and optional
/// `pre_blocks:` sections).
BaseBlockSystem parse_base_block_system(std::string_view text);
BaseBlockSystem load_base_block_file(const std::string& path);

/// Develops every base block over Z_modulus. Orbit lengths are recomputed
/// from stabilizers and checked against the declared values; duplicate
/// blocks or a non-partitioning group layout are errors. Output order is
/// (base-block index, shift), then pre-blocks verbatim.
Design develop(const BaseBlockSystem& sys);

/// Per-point block lists, as in an incidence table. Block indices 1-based.
struct IncidenceTable {
    int num_blocks = 0;
    std::map<int, std::vector<int>> per_point_lists;  // 1-based points
};

/// Inverts an incidence table into a block list: block j holds exactly the
/// points whose lists contain j. Every block must get exactly k points.
std::vector<std::vector<int>> blocks_from_incidence(const IncidenceTable& table, int k = kDefaultBlockSize);

// ---- shipped fixture registry ----------------------------------------

/// Names of the 14 shipped designs, in source order.
const std::vector<std::string>& fixture_names();

bool is_fixture_name(const std::string& name);

/// Fully expanded design, verified on first load; provenance shipped-table.
/// Throws std::out_of_range for unknown names and std::runtime_error when a
/// fixture fails verification (corrupt data).
const Design& load_fixture(const std::string& name);

/// Raw fixture text (the proofreadable transcription).
const std::string& fixture_text(const std::string& name);

/// Base-block system behind a fixture; throws for the incidence-table
/// fixture, which has no developable presentation.
const BaseBlockSystem& fixture_system(const std::string& name);

/// Fixture name for a group type, if one of the shipped designs has it.
const std::string* fixture_for_type(const GroupType& gt);

}  // namespace gdd
