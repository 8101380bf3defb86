#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gdd/types.hpp"

namespace gdd {

/// SHA-256 of a byte string, lowercase hex.
std::string sha256_hex(std::string_view data);

struct CatalogEntry {
    GroupType type;
    std::string digest;      // sha256 of the canonical serialization
    std::string file;        // path relative to the catalog directory
    Provenance provenance = Provenance::Manual;
    std::string note;
    std::string verified_at;  // UTC timestamp
};

/// A directory of canonical design files plus one index file. Registration
/// verifies the design, writes its file atomically and rewrites the index
/// under an advisory lock; readers may run concurrently.
class Catalog {
public:
    explicit Catalog(std::string directory);

    const std::string& directory() const { return dir_; }

    /// Verifies, serializes, digests and stores. Duplicate digests are
    /// idempotent. Throws on verification failure or IO failure.
    CatalogEntry register_design(const Design& d, const std::string& note = "");

    /// Entries of this exact type, digest order.
    std::vector<CatalogEntry> lookup(const GroupType& gt) const;

    std::vector<CatalogEntry> entries() const;

    /// First design of the type (digest order), parsed from its file.
    std::optional<Design> find_design(const GroupType& gt) const;

    Design load_entry(const CatalogEntry& e) const;

private:
    std::string dir_;
    std::string index_path() const;
    std::vector<CatalogEntry> read_index() const;
};

struct RegressionStage {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct RegressionSummary {
    std::vector<RegressionStage> stages;
    bool pass() const;
    std::string str() const;
};

/// Fixture verification, block-count identities, the 30-point enumeration,
/// the decision-procedure sweep to v <= 1000, and one end-to-end realization
/// of 2^17 5^8 through a scratch catalog.
RegressionSummary run_regression();

}  // namespace gdd
