#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gdd/development.hpp"
#include "gdd/types.hpp"

namespace gdd {

/// Cyclic symmetry assumption: the point classes, group patterns and
/// development modulus of a BaseBlockSystem (its base_blocks are ignored).
/// The layout must tile the target type: expanded group sizes give the type
/// and the shift permutation must map groups onto groups.
using CyclicLayout = BaseBlockSystem;

struct SearchProblem {
    GroupType target;
    int k = kDefaultBlockSize;
    std::optional<CyclicLayout> symmetry;
    bool exhaustive = false;          // complete the whole space (no symmetry only)
    std::uint64_t node_budget = UINT64_MAX;
    double time_budget_secs = 0.0;    // 0 = unlimited
    int threads = 1;
    std::uint64_t seed = 0;           // randomized candidate order; 0 = lexicographic
};

struct SearchStats {
    std::uint64_t nodes = 0;
    int max_depth = 0;
    double seconds = 0.0;
};

enum class SearchStatus { Found, ExhaustedNoSolution, BudgetExceeded };

struct SearchOutcome {
    SearchStatus status = SearchStatus::BudgetExceeded;
    std::optional<Design> design;             // verified before return
    std::optional<BaseBlockSystem> system;    // cyclic mode only
    SearchStats stats;
};

std::string search_status_str(SearchStatus s);

/// Exact-cover search over cross-group pairs. In cyclic mode candidates are
/// admissible base-block orbits and the universe is pair orbits.
/// Throws std::invalid_argument when the target type is infeasible or a
/// symmetry layout does not match the target.
SearchOutcome search(const SearchProblem& problem);

/// Cyclic-mode search that reports the generating base blocks; the returned
/// system re-develops to the returned design.
SearchOutcome search_base_blocks(const SearchProblem& problem);

/// Restart schedule over seeds for the heavy-tailed cases: runs the problem
/// as given, then with seeds seed+1, seed+2, ... each under per_restart_nodes,
/// until Found or a run completes the whole space. Deterministic.
SearchOutcome search_with_restarts(SearchProblem problem, int max_restarts = 16,
                                   std::uint64_t per_restart_nodes = 2000000);

enum class NonexistenceStatus { Certified, CounterexampleFound, BudgetExceeded };

struct NonexistenceOutcome {
    NonexistenceStatus status;
    std::optional<Design> counterexample;
    SearchStats stats;
};

/// Exhaustive search with first-block symmetry breaking (always extend the
/// least uncovered pair). Guarded to v <= 32 unless explicitly overridden.
NonexistenceOutcome prove_nonexistence(const GroupType& gt, std::uint64_t node_budget = UINT64_MAX,
                                       double time_budget_secs = 0.0, int max_points_guard = 32);

}  // namespace gdd
