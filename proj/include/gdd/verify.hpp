#pragma once

#include <map>
#include <string>
#include <vector>

#include "gdd/types.hpp"

namespace gdd {

enum class ViolationKind { WrongBlockSize, BlockMeetsGroupTwice, PairMissing, PairRepeated };

std::string violation_kind_str(ViolationKind k);

struct Violation {
    ViolationKind kind;
    int block = -1;        // offending block index, or -1
    int point_a = -1;      // witness pair, or -1
    int point_b = -1;
};

struct VerificationReport {
    bool pass = false;
    std::vector<Violation> violations;
    long long block_count = 0;
    std::vector<int> replication;   // blocks through each point
    bool replication_identity = false;  // r_x == (v - g(x))/(k-1) for all x
    std::string str(const Design* d = nullptr) const;
};

/// Checks the defining axioms exactly: every block has k distinct points, no
/// block meets a group twice, and every cross-group pair is covered exactly
/// once. Failures are report content, not errors.
VerificationReport verify(const Design& d, int k = kDefaultBlockSize);

/// Runs verify over every shipped fixture; all 14 must pass.
std::map<std::string, VerificationReport> verify_all_fixtures();

}  // namespace gdd
