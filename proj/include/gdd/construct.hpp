#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gdd/feasibility.hpp"
#include "gdd/types.hpp"

namespace gdd {

class Catalog;

/// A fill-in plan over a master design. fills[i] partitions master group i
/// (the fill design used on it has type fills[i] + {u} when u > 0); a
/// single-part fill means the group is kept whole, which requires u = 0.
/// Group final_index plays the g_m role: it becomes one group of size
/// g_final + u, or is filled by final_fill (which sums to g_final + u and
/// has no distinguished u-group).
struct Recipe {
    GroupType master;                    // canonical descending
    int u = 0;
    std::vector<GroupType> fills;        // one per master group, final slot ignored
    int final_index = -1;
    std::optional<GroupType> final_fill; // nullopt = keep as one group

    bool is_keep(int i) const { return fills[i].group_count() == 1; }
};

/// Type arithmetic of a recipe; throws std::invalid_argument if the recipe
/// violates its invariants (fill sums, keep-with-u, final sum).
GroupType recipe_result_type(const Recipe& r);
void validate_recipe(const Recipe& r);

/// Design types the recipe consumes, master first, deduplicated.
std::vector<GroupType> recipe_ingredients(const Recipe& r);

// ---- existence axioms (known 4-GDD families, accepted without designs) --

enum class AxiomKind { GP, GPN1 };

/// True iff a known existence result covers the type: kind GP is g^p,
/// kind GPN1 is g^p n^1 (dispatching on g = 0 mod 6, g in {2,20},
/// g = 3 mod 6 with g <= 33, or g = 5).
bool exists_axiom(AxiomKind kind, long long g, long long p, long long n = 0);

/// Name of the lemma family that covers (g,p,n), if any.
std::optional<std::string> axiom_family(AxiomKind kind, long long g, long long p, long long n = 0);

// ---- certificates -------------------------------------------------------

struct Certificate;
using CertPtr = std::shared_ptr<const Certificate>;

struct LeafShipped { std::string fixture; };
struct LeafSearched { std::string note; };
struct LeafLemma { std::string family; long long g = 0, p = 0, n = 0; };
struct LeafExternal { std::string tag; };
struct NodeFillIn {
    Recipe recipe;
    std::vector<CertPtr> children;  // one per ingredient type
};

struct Certificate {
    GroupType target;
    std::variant<LeafShipped, LeafSearched, LeafLemma, LeafExternal, NodeFillIn> node;
};

/// Machine-checks the whole tree: lemma-leaf parameters satisfy their
/// hypotheses, fixture leaves exist with the right type, fill sums match,
/// and type arithmetic is consistent along the tree.
/// Returns an error description, or nullopt when valid.
std::optional<std::string> validate_certificate(const CertPtr& cert);

std::string render_certificate(const CertPtr& cert);

// ---- planner / decision procedure --------------------------------------

enum class Verdict { Exists, DefiniteNonexistence, PossibleException, Infeasible };

std::string verdict_str(Verdict v);

struct Decision {
    Verdict verdict;
    CertPtr certificate;  // set when verdict == Exists
    int t = 0, s = 0;
};

/// The open pairs (t,s) for type 2^t 5^s, in increasing (v, t) order.
const std::vector<std::pair<int, int>>& possible_exceptions();

/// Certificate chain realizing 2^t 5^s, or the applicable exception verdict.
/// Precondition: check_feasible(2^t 5^s) passes (throws otherwise).
Decision plan(int t, int s);

/// Full decision procedure: Infeasible when the necessary conditions fail,
/// then the exception lists, then a certificate from plan.
Decision decide(int t, int s);

// ---- fill-in executor / realization -------------------------------------

/// Executes the fill-in construction concretely. fill_designs are keyed by
/// master group index (missing = keep). Every produced design is re-verified.
Design fill_in(const Design& master, int u, const std::map<int, Design>& fill_designs, int final_index,
               const std::optional<Design>& final_fill, int k = kDefaultBlockSize);

struct PartialResult {
    std::vector<GroupType> missing;  // leaf types with no concrete design
};

using RealizeResult = std::variant<Design, PartialResult>;

/// Materializes a certificate bottom-up: shipped leaves from the fixture
/// registry, other leaves from the catalog (when given). Leaves with no
/// concrete design produce a PartialResult listing them.
RealizeResult realize(const CertPtr& cert, const Catalog* catalog = nullptr);

/// plan + realize, searching for small missing ingredients (v <= max_search_points)
/// and registering them in the catalog. The convenience path behind
/// `construct --require-concrete`.
RealizeResult materialize(int t, int s, Catalog& catalog, int max_search_points = 32);

}  // namespace gdd
