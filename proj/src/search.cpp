#include "gdd/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "gdd/feasibility.hpp"
#include "gdd/verify.hpp"

namespace gdd {

std::string search_status_str(SearchStatus s) {
    switch (s) {
        case SearchStatus::Found: return "found";
        case SearchStatus::ExhaustedNoSolution: return "exhausted-no-solution";
        case SearchStatus::BudgetExceeded: return "budget-exceeded";
    }
    return "?";
}

namespace {

// Exact-cover instance: every column covered exactly once, candidates cover
// fixed column sets (spans into a flat array).
struct Instance {
    int num_columns = 0;
    std::vector<int> cand_cols;  // concatenated column ids
    std::vector<int> cand_off;   // candidate i covers cand_cols[off[i]..off[i+1])
    int num_candidates() const { return static_cast<int>(cand_off.size()) - 1; }
};

// Array-based dancing links (Algorithm X). Rows are candidate/column
// incidences stored contiguously per candidate.
struct Dlx {
    // column headers: 0..C-1 plus root at C
    std::vector<int> left, right, len;
    // cells
    std::vector<int> up, down, cell_col, cell_row;
    std::vector<int> row_first, row_last;  // candidate -> cell span
    int root;

    Dlx(const Instance& inst, const std::vector<int>& row_order) {
        const int C = inst.num_columns;
        root = C;
        left.resize(C + 1);
        right.resize(C + 1);
        len.assign(C, 0);
        for (int c = 0; c <= C; ++c) {
            left[c] = c == 0 ? C : c - 1;
            right[c] = c == C ? 0 : c + 1;
        }
        int cells = static_cast<int>(inst.cand_cols.size());
        up.resize(cells);
        down.resize(cells);
        cell_col.resize(cells);
        cell_row.resize(cells);
        row_first.assign(inst.num_candidates(), 0);
        row_last.assign(inst.num_candidates(), 0);
        std::vector<int> col_tail(C, -1);  // last cell seen per column
        int cursor = 0;
        for (int r : row_order) {
            row_first[r] = cursor;
            for (int k = inst.cand_off[r]; k < inst.cand_off[r + 1]; ++k, ++cursor) {
                int col = inst.cand_cols[k];
                cell_col[cursor] = col;
                cell_row[cursor] = r;
                ++len[col];
                if (col_tail[col] < 0) {
                    up[cursor] = cursor;
                    down[cursor] = cursor;
                } else {
                    int tail = col_tail[col];
                    up[cursor] = tail;
                    down[cursor] = down[tail];
                    down[tail] = cursor;
                }
                col_tail[col] = cursor;
            }
            row_last[r] = cursor;
        }
        // close the vertical rings through per-column head sentinels:
        // emulate headers by one extra cell per column
        head.assign(C, 0);
        int base = cells;
        up.resize(cells + C);
        down.resize(cells + C);
        cell_col.resize(cells + C);
        cell_row.resize(cells + C, -1);
        for (int c = 0; c < C; ++c) {
            int h = base + c;
            head[c] = h;
            cell_col[h] = c;
            if (col_tail[c] < 0) {
                up[h] = h;
                down[h] = h;
            } else {
                int tail = col_tail[c];
                int first = down[tail];  // ring currently closes tail->first
                down[tail] = h;
                up[h] = tail;
                down[h] = first;
                up[first] = h;
            }
        }
    }

    std::vector<int> head;  // column -> header cell

    void cover(int col) {
        int l = left[col], r = right[col];
        right[l] = r;
        left[r] = l;
        for (int i = down[head[col]]; i != head[col]; i = down[i]) {
            int row = cell_row[i];
            for (int j = row_first[row]; j < row_last[row]; ++j) {
                if (cell_col[j] == col) continue;
                int u = up[j], d = down[j];
                down[u] = d;
                up[d] = u;
                --len[cell_col[j]];
            }
        }
    }

    void uncover(int col) {
        for (int i = up[head[col]]; i != head[col]; i = up[i]) {
            int row = cell_row[i];
            for (int j = row_last[row] - 1; j >= row_first[row]; --j) {
                if (cell_col[j] == col) continue;
                ++len[cell_col[j]];
                int u = up[j], d = down[j];
                down[u] = j;
                up[d] = j;
            }
        }
        int l = left[col], r = right[col];
        right[l] = col;
        left[r] = col;
    }

    void cover_row_except(int row, int col) {
        for (int j = row_first[row]; j < row_last[row]; ++j)
            if (cell_col[j] != col) cover(cell_col[j]);
    }

    void uncover_row_except(int row, int col) {
        for (int j = row_last[row] - 1; j >= row_first[row]; --j)
            if (cell_col[j] != col) uncover(cell_col[j]);
    }
};

struct Budget {
    std::atomic<std::uint64_t>* nodes;
    std::uint64_t node_budget;
    std::chrono::steady_clock::time_point deadline;
    bool has_deadline = false;
    std::atomic<bool>* cancel = nullptr;

    bool exceeded() const {
        if (nodes->load(std::memory_order_relaxed) > node_budget) return true;
        if (has_deadline && std::chrono::steady_clock::now() > deadline) return true;
        if (cancel && cancel->load(std::memory_order_relaxed)) return true;
        return false;
    }
};

enum class Pivot { LeastColumn, FewestCandidates };

struct Engine {
    Dlx dlx;
    Budget budget;
    Pivot pivot_rule;
    std::vector<int> chosen;
    int max_depth = 0;
    bool stopped = false;

    Engine(const Instance& inst, const std::vector<int>& row_order, Budget b, Pivot p)
        : dlx(inst, row_order), budget(b), pivot_rule(p) {}

    int pick_column() const {
        if (dlx.right[dlx.root] == dlx.root) return -1;  // all covered
        if (pivot_rule == Pivot::LeastColumn) return dlx.right[dlx.root];
        int best = -1, best_len = INT32_MAX;
        for (int c = dlx.right[dlx.root]; c != dlx.root; c = dlx.right[c]) {
            if (dlx.len[c] < best_len) {
                best_len = dlx.len[c];
                best = c;
                if (best_len <= 1) break;
            }
        }
        return best;
    }

    bool run(std::vector<int>* solution) {
        int col = pick_column();
        if (col < 0) {
            *solution = chosen;
            return true;
        }
        if (dlx.len[col] == 0) return false;
        auto n = budget.nodes->fetch_add(1, std::memory_order_relaxed);
        if ((n & 2047) == 0 && budget.exceeded()) {
            stopped = true;
            return false;
        }
        max_depth = std::max(max_depth, static_cast<int>(chosen.size()));
        dlx.cover(col);
        for (int i = dlx.down[dlx.head[col]]; i != dlx.head[col]; i = dlx.down[i]) {
            int row = dlx.cell_row[i];
            chosen.push_back(row);
            dlx.cover_row_except(row, col);
            if (run(solution)) return true;
            dlx.uncover_row_except(row, col);
            chosen.pop_back();
            if (stopped) break;
        }
        dlx.uncover(col);
        return false;
    }

    // preplaces one candidate (for sharding); the caller guarantees validity
    void preplace(int row) {
        chosen.push_back(row);
        for (int j = dlx.row_first[row]; j < dlx.row_last[row]; ++j) dlx.cover(dlx.cell_col[j]);
    }
};

// ---- plain (no symmetry) instance ------------------------------------------

struct PlainBuild {
    Instance inst;
    std::vector<std::vector<int>> cand_blocks;
    std::vector<std::vector<int>> groups;
    int num_points = 0;
};

PlainBuild build_plain(const GroupType& gt, int k) {
    PlainBuild B;
    const auto& sizes = gt.sizes();
    B.num_points = static_cast<int>(gt.point_count());
    std::vector<int> point_group(B.num_points);
    {
        int p = 0;
        for (size_t g = 0; g < sizes.size(); ++g) {
            B.groups.emplace_back();
            for (int i = 0; i < sizes[g]; ++i, ++p) {
                B.groups.back().push_back(p);
                point_group[p] = static_cast<int>(g);
            }
        }
    }
    const int v = B.num_points;
    std::vector<int> pair_col(static_cast<size_t>(v) * (v - 1) / 2, -1);
    auto tri = [](int a, int b) { return static_cast<size_t>(b) * (b - 1) / 2 + a; };
    int ncols = 0;
    for (int b = 1; b < v; ++b)
        for (int a = 0; a < b; ++a)
            if (point_group[a] != point_group[b]) pair_col[tri(a, b)] = ncols++;
    B.inst.num_columns = ncols;

    std::vector<int> block(k);
    B.inst.cand_off.push_back(0);
    std::function<void(int, int)> gen = [&](int start, int depth) {
        if (depth == k) {
            B.cand_blocks.push_back(block);
            for (int i = 0; i < k; ++i)
                for (int j = i + 1; j < k; ++j)
                    B.inst.cand_cols.push_back(pair_col[tri(block[i], block[j])]);
            B.inst.cand_off.push_back(static_cast<int>(B.inst.cand_cols.size()));
            return;
        }
        for (int p = start; p < v; ++p) {
            bool clash = false;
            for (int i = 0; i < depth && !clash; ++i) clash = point_group[block[i]] == point_group[p];
            if (clash) continue;
            block[depth] = p;
            gen(p + 1, depth + 1);
        }
    };
    gen(0, 0);
    return B;
}

// ---- cyclic instance --------------------------------------------------------

struct CyclicBuild {
    Instance inst;
    std::vector<std::vector<int>> rep_blocks;  // orbit representative, sorted
    std::vector<int> orbit_len;
    CyclicLayout layout;
};

CyclicBuild build_cyclic(const CyclicLayout& layout, const GroupType& target, int k) {
    CyclicBuild B;
    B.layout = layout;
    B.layout.base_blocks.clear();
    B.layout.pre_blocks.clear();
    const auto& sys = B.layout;
    for (const auto& c : sys.classes)
        if (!c.infinite && sys.modulus % c.count != 0)
            throw std::invalid_argument("layout class '" + c.label + "' size must divide the development modulus");
    const int v = sys.num_points();
    std::vector<int> point_group(v, -1);
    {
        std::vector<int> seen(v, 0);
        for (size_t g = 0; g < sys.groups.size(); ++g)
            for (int p : sys.groups[g]) {
                if (p < 0 || p >= v || seen[p]++) throw std::invalid_argument("layout groups do not partition the points");
                point_group[p] = static_cast<int>(g);
            }
        for (int p = 0; p < v; ++p)
            if (!seen[p]) throw std::invalid_argument("layout groups do not partition the points");
    }
    {
        std::vector<int> s;
        for (const auto& g : sys.groups) s.push_back(static_cast<int>(g.size()));
        GroupType lt{std::move(s)};
        if (lt != target)
            throw std::invalid_argument("symmetry layout has type " + lt.str() + ", target is " + target.str());
    }
    // the one-step shift must permute groups
    for (const auto& g : sys.groups) {
        std::vector<int> image;
        for (int p : g) image.push_back(sys.shift_point(p, 1));
        std::sort(image.begin(), image.end());
        bool ok = false;
        for (const auto& h : sys.groups)
            if (h == image) { ok = true; break; }
        if (!ok) throw std::invalid_argument("symmetry layout groups are not closed under development");
    }

    const int M = sys.modulus;
    auto tri = [](int a, int b) {
        if (a > b) std::swap(a, b);
        return static_cast<size_t>(b) * (b - 1) / 2 + a;
    };
    std::vector<int> pair_orbit(static_cast<size_t>(v) * (v - 1) / 2, -1);
    int norbits = 0;
    for (int b = 1; b < v; ++b)
        for (int a = 0; a < b; ++a) {
            if (point_group[a] == point_group[b]) continue;
            if (pair_orbit[tri(a, b)] != -1) continue;
            int id = norbits++;
            int x = a, y = b;
            for (int j = 0; j < M; ++j) {
                pair_orbit[tri(x, y)] = id;
                x = sys.shift_point(x, 1);
                y = sys.shift_point(y, 1);
            }
        }
    B.inst.num_columns = norbits;

    std::vector<int> block(k);
    std::vector<int> cols;
    B.inst.cand_off.push_back(0);
    auto consider = [&](const std::vector<int>& blk) {
        // keep only the lexicographically least translate of each orbit
        std::vector<int> shifted(blk);
        int orbit = M;
        for (int j = 1; j <= M; ++j) {
            for (int& p : shifted) p = sys.shift_point(p, 1);
            std::vector<int> s(shifted);
            std::sort(s.begin(), s.end());
            if (j < M && s == blk) { orbit = j; break; }
            if (s < blk) return;
        }
        // admissible only if the orbit's pair multiset is duplicate-free
        cols.clear();
        std::vector<int> pairs;
        std::vector<int> cur(blk);
        for (int j = 0; j < orbit; ++j) {
            for (int i = 0; i < k; ++i)
                for (int l = i + 1; l < k; ++l) pairs.push_back(static_cast<int>(tri(cur[i], cur[l])));
            for (int& p : cur) p = sys.shift_point(p, 1);
        }
        std::sort(pairs.begin(), pairs.end());
        if (std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end()) return;
        for (int pr : pairs) cols.push_back(pair_orbit[pr]);
        std::sort(cols.begin(), cols.end());
        cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
        B.rep_blocks.push_back(blk);
        B.orbit_len.push_back(orbit);
        for (int c : cols) B.inst.cand_cols.push_back(c);
        B.inst.cand_off.push_back(static_cast<int>(B.inst.cand_cols.size()));
    };
    std::function<void(int, int)> gen = [&](int start, int depth) {
        if (depth == k) {
            consider(block);
            return;
        }
        for (int p = start; p < v; ++p) {
            bool clash = false;
            for (int i = 0; i < depth && !clash; ++i) clash = point_group[block[i]] == point_group[p];
            if (clash) continue;
            block[depth] = p;
            gen(p + 1, depth + 1);
        }
    };
    gen(0, 0);
    return B;
}

// ---- driver -----------------------------------------------------------------

struct RunResult {
    bool found = false;
    bool exhausted = false;
    std::vector<int> solution;
    SearchStats stats;
};

RunResult run_instance(const Instance& inst, const SearchProblem& problem, Pivot pivot) {
    RunResult out;
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> cancel{false};
    auto start = std::chrono::steady_clock::now();
    Budget budget{&nodes, problem.node_budget, start, false, &cancel};
    if (problem.time_budget_secs > 0) {
        budget.has_deadline = true;
        budget.deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                      std::chrono::duration<double>(problem.time_budget_secs));
    }

    std::vector<int> row_order(inst.num_candidates());
    std::iota(row_order.begin(), row_order.end(), 0);
    if (problem.seed != 0 && !problem.exhaustive) {
        std::mt19937_64 rng(problem.seed);
        std::shuffle(row_order.begin(), row_order.end(), rng);
    }

    int threads = std::max(1, problem.threads);
    if (threads == 1) {
        Engine e(inst, row_order, budget, pivot);
        std::vector<int> solution;
        bool found = e.run(&solution);
        out.found = found;
        out.exhausted = !found && !e.stopped;
        out.solution = std::move(solution);
        out.stats.nodes = nodes.load();
        out.stats.max_depth = e.max_depth;
    } else {
        // shard on the root pivot's candidate list
        std::vector<int> roots;
        {
            Engine probe(inst, row_order, budget, pivot);
            int col = probe.pick_column();
            if (col >= 0)
                for (int i = probe.dlx.down[probe.dlx.head[col]]; i != probe.dlx.head[col]; i = probe.dlx.down[i])
                    roots.push_back(probe.dlx.cell_row[i]);
        }
        std::atomic<int> next{0};
        std::atomic<bool> any_found{false};
        std::atomic<bool> any_stopped{false};
        std::atomic<int> max_depth{0};
        std::vector<int> solution;
        std::mutex mu;
        auto worker = [&] {
            for (;;) {
                int idx = next.fetch_add(1);
                if (idx >= static_cast<int>(roots.size())) return;
                if (any_found.load() && !problem.exhaustive) return;
                Engine e(inst, row_order, budget, pivot);
                e.preplace(roots[idx]);
                std::vector<int> sol;
                if (e.run(&sol)) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!any_found.exchange(true)) {
                        solution = sol;
                        if (!problem.exhaustive) cancel.store(true);
                    }
                }
                if (e.stopped) any_stopped.store(true);
                int d = e.max_depth;
                int cur = max_depth.load();
                while (d > cur && !max_depth.compare_exchange_weak(cur, d)) {}
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        out.found = any_found.load();
        out.exhausted = !out.found && !any_stopped.load();
        out.solution = std::move(solution);
        out.stats.nodes = nodes.load();
        out.stats.max_depth = max_depth.load();
    }
    out.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

SearchOutcome search_impl(const SearchProblem& problem) {
    if (!is_feasible(problem.target))
        throw std::invalid_argument("search target " + problem.target.str() +
                                    " is infeasible; nonexistence is already certain");
    SearchOutcome out;
    if (!problem.symmetry) {
        PlainBuild B = build_plain(problem.target, problem.k);
        RunResult r = run_instance(B.inst, problem,
                                   problem.exhaustive ? Pivot::LeastColumn : Pivot::FewestCandidates);
        out.stats = r.stats;
        if (r.found) {
            std::vector<std::vector<int>> blocks;
            for (int c : r.solution) blocks.push_back(B.cand_blocks[c]);
            std::sort(blocks.begin(), blocks.end());
            Design d = make_design(B.num_points, B.groups, std::move(blocks), Provenance::Searched);
            if (!verify(d, problem.k).pass) throw std::logic_error("search produced an invalid design");
            out.design = std::move(d);
            out.status = SearchStatus::Found;
        } else {
            out.status = r.exhausted ? SearchStatus::ExhaustedNoSolution : SearchStatus::BudgetExceeded;
        }
        return out;
    }

    CyclicBuild B = build_cyclic(*problem.symmetry, problem.target, problem.k);
    RunResult r = run_instance(B.inst, problem, Pivot::FewestCandidates);
    out.stats = r.stats;
    if (!r.found) {
        out.status = r.exhausted ? SearchStatus::ExhaustedNoSolution : SearchStatus::BudgetExceeded;
        return out;
    }
    BaseBlockSystem sys = B.layout;
    std::sort(r.solution.begin(), r.solution.end());
    for (int c : r.solution) {
        BaseBlock bb;
        for (int p : B.rep_blocks[c]) {
            int base = 0;
            for (size_t ci = 0; ci < sys.classes.size(); ++ci) {
                if (p < base + sys.classes[ci].count) {
                    int sub = p - base + (sys.classes[ci].infinite ? 1 : 0);
                    bb.points.push_back({static_cast<int>(ci), sub});
                    break;
                }
                base += sys.classes[ci].count;
            }
        }
        bb.declared_orbit = B.orbit_len[c];
        sys.base_blocks.push_back(std::move(bb));
    }
    Design d = develop(sys);
    d.provenance = Provenance::Searched;
    if (!verify(d, problem.k).pass) throw std::logic_error("cyclic search produced an invalid design");
    out.design = std::move(d);
    out.system = std::move(sys);
    out.status = SearchStatus::Found;
    return out;
}

}  // namespace

SearchOutcome search(const SearchProblem& problem) { return search_impl(problem); }

SearchOutcome search_base_blocks(const SearchProblem& problem) {
    if (!problem.symmetry) throw std::invalid_argument("search_base_blocks requires a cyclic layout");
    return search_impl(problem);
}

SearchOutcome search_with_restarts(SearchProblem problem, int max_restarts, std::uint64_t per_restart_nodes) {
    std::uint64_t total_nodes = 0;
    double total_secs = 0;
    SearchOutcome last;
    std::uint64_t caller_budget = problem.node_budget;
    for (int attempt = 0; attempt <= max_restarts; ++attempt) {
        SearchProblem p = problem;
        if (attempt > 0) p.seed = problem.seed + attempt;
        p.node_budget = std::min(caller_budget, per_restart_nodes);
        SearchOutcome o = search_impl(p);
        total_nodes += o.stats.nodes;
        total_secs += o.stats.seconds;
        o.stats.nodes = total_nodes;
        o.stats.seconds = total_secs;
        if (o.status != SearchStatus::BudgetExceeded) return o;
        last = std::move(o);
        if (total_nodes >= caller_budget) break;
    }
    return last;
}

NonexistenceOutcome prove_nonexistence(const GroupType& gt, std::uint64_t node_budget, double time_budget_secs,
                                       int max_points_guard) {
    if (!is_feasible(gt)) throw std::invalid_argument("type " + gt.str() + " is already infeasible");
    if (gt.point_count() > max_points_guard)
        throw std::invalid_argument("exhaustive nonexistence guarded to v <= " + std::to_string(max_points_guard));
    SearchProblem p;
    p.target = gt;
    p.exhaustive = true;
    p.node_budget = node_budget;
    p.time_budget_secs = time_budget_secs;
    SearchOutcome o = search(p);
    NonexistenceOutcome out;
    out.stats = o.stats;
    switch (o.status) {
        case SearchStatus::Found:
            out.status = NonexistenceStatus::CounterexampleFound;
            out.counterexample = std::move(o.design);
            break;
        case SearchStatus::ExhaustedNoSolution: out.status = NonexistenceStatus::Certified; break;
        case SearchStatus::BudgetExceeded: out.status = NonexistenceStatus::BudgetExceeded; break;
    }
    return out;
}

}  // namespace gdd
