#include "gdd/verify.hpp"

#include <algorithm>
#include <sstream>

#include "gdd/development.hpp"

namespace gdd {

std::string violation_kind_str(ViolationKind k) {
    switch (k) {
        case ViolationKind::WrongBlockSize: return "wrong-block-size";
        case ViolationKind::BlockMeetsGroupTwice: return "block-meets-group-twice";
        case ViolationKind::PairMissing: return "pair-missing";
        case ViolationKind::PairRepeated: return "pair-repeated";
    }
    return "?";
}

std::string VerificationReport::str(const Design* d) const {
    std::ostringstream out;
    out << (pass ? "pass" : "fail") << "; blocks = " << block_count;
    if (pass && !replication.empty()) {
        int lo = *std::min_element(replication.begin(), replication.end());
        int hi = *std::max_element(replication.begin(), replication.end());
        out << "; replication " << lo << ".." << hi;
    }
    out << '\n';
    size_t shown = 0;
    for (const auto& v : violations) {
        if (shown++ == 20) {
            out << "  ... " << violations.size() - 20 << " more\n";
            break;
        }
        out << "  " << violation_kind_str(v.kind);
        if (v.block >= 0) out << " block " << v.block;
        if (v.point_a >= 0) {
            out << " pair (" << v.point_a << "," << v.point_b << ")";
            if (d && !d->labels.empty())
                out << " [" << d->label(v.point_a) << "," << d->label(v.point_b) << "]";
        }
        out << '\n';
    }
    return out.str();
}

VerificationReport verify(const Design& d, int k) {
    VerificationReport rep;
    rep.block_count = static_cast<long long>(d.blocks.size());
    const int v = d.num_points;
    // triangular pair index over dense points; cache friendly in the
    // searcher's inner loop, which reuses this kernel
    auto pair_index = [](int a, int b) {
        if (a > b) std::swap(a, b);
        return static_cast<size_t>(b) * (b - 1) / 2 + a;
    };
    std::vector<unsigned> pair_count(static_cast<size_t>(v) * (v - 1) / 2, 0);
    rep.replication.assign(v, 0);

    for (size_t bi = 0; bi < d.blocks.size(); ++bi) {
        const auto& b = d.blocks[bi];
        std::vector<int> pts(b.begin(), b.end());
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        if (pts.size() != static_cast<size_t>(k)) {
            rep.violations.push_back({ViolationKind::WrongBlockSize, static_cast<int>(bi), -1, -1});
            continue;
        }
        bool group_clash = false;
        for (size_t i = 0; i < pts.size() && !group_clash; ++i)
            for (size_t j = i + 1; j < pts.size(); ++j)
                if (d.point_group[pts[i]] == d.point_group[pts[j]]) {
                    rep.violations.push_back(
                        {ViolationKind::BlockMeetsGroupTwice, static_cast<int>(bi), pts[i], pts[j]});
                    group_clash = true;
                    break;
                }
        if (group_clash) continue;
        for (int p : pts) ++rep.replication[p];
        for (size_t i = 0; i < pts.size(); ++i)
            for (size_t j = i + 1; j < pts.size(); ++j) {
                size_t idx = pair_index(pts[i], pts[j]);
                if (++pair_count[idx] == 2)
                    rep.violations.push_back({ViolationKind::PairRepeated, static_cast<int>(bi), pts[i], pts[j]});
            }
    }

    for (int b = 1; b < v; ++b)
        for (int a = 0; a < b; ++a) {
            if (d.point_group[a] == d.point_group[b]) continue;
            if (pair_count[pair_index(a, b)] == 0)
                rep.violations.push_back({ViolationKind::PairMissing, -1, a, b});
        }

    rep.pass = rep.violations.empty();
    if (rep.pass) {
        rep.replication_identity = true;
        for (int p = 0; p < v; ++p) {
            long long g = static_cast<long long>(d.groups[d.point_group[p]].size());
            long long num = v - g;
            if (num % (k - 1) != 0 || rep.replication[p] != num / (k - 1)) {
                rep.replication_identity = false;
                break;
            }
        }
    }
    return rep;
}

std::map<std::string, VerificationReport> verify_all_fixtures() {
    std::map<std::string, VerificationReport> out;
    for (const auto& name : fixture_names()) out.emplace(name, verify(load_fixture(name)));
    return out;
}

}  // namespace gdd
