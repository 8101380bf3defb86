#include "gdd/development.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gdd/verify.hpp"
#include "embedded.hpp"

namespace gdd {

int BaseBlockSystem::num_points() const {
    int n = 0;
    for (const auto& c : classes) n += c.count;
    return n;
}

int BaseBlockSystem::class_base(int class_index) const {
    int base = 0;
    for (int i = 0; i < class_index; ++i) base += classes[i].count;
    return base;
}

int BaseBlockSystem::point_id(const PointRef& r) const {
    const auto& cls = classes[r.class_index];
    int sub = r.subscript;
    if (cls.infinite) sub -= 1;  // infinite subscripts are 1-based
    return class_base(r.class_index) + sub;
}

std::string BaseBlockSystem::point_label(int point) const {
    for (size_t ci = 0; ci < classes.size(); ++ci) {
        int base = class_base(static_cast<int>(ci));
        if (point < base + classes[ci].count) {
            int sub = point - base + (classes[ci].infinite ? 1 : 0);
            return classes[ci].label + std::to_string(sub);
        }
    }
    return "?" + std::to_string(point);
}

int BaseBlockSystem::shift_point(int point, int amount) const {
    int base = 0;
    for (const auto& c : classes) {
        if (point < base + c.count) {
            if (c.infinite) return point;
            int sub = point - base;
            int shifted = static_cast<int>(((static_cast<long long>(sub) + amount) % c.count + c.count) % c.count);
            return base + shifted;
        }
        base += c.count;
    }
    throw std::out_of_range("point id out of range");
}

namespace {

std::string trim(std::string s) {
    auto issp = [](unsigned char c) { return std::isspace(c); };
    while (!s.empty() && issp(s.front())) s.erase(s.begin());
    while (!s.empty() && issp(s.back())) s.pop_back();
    return s;
}

struct Parser {
    BaseBlockSystem sys;
    std::map<std::string, int> class_index;

    int find_class(const std::string& label, const std::string& context) const {
        auto it = class_index.find(label);
        if (it == class_index.end())
            throw std::invalid_argument("unknown point class '" + label + "' in " + context);
        return it->second;
    }

    // compact term like a0 or inf12; longest class label wins
    PointRef parse_compact(const std::string& term, const std::string& context) const {
        size_t split = term.size();
        while (split > 0 && std::isdigit(static_cast<unsigned char>(term[split - 1]))) --split;
        if (split == 0 || split == term.size())
            throw std::invalid_argument("bad point term '" + term + "' in " + context);
        PointRef r;
        r.class_index = find_class(term.substr(0, split), context);
        r.subscript = std::stoi(term.substr(split));
        const auto& cls = sys.classes[r.class_index];
        if (cls.infinite) {
            if (r.subscript < 1 || r.subscript > cls.count)
                throw std::invalid_argument("infinite subscript out of range: " + term);
        } else if (r.subscript < 0 || r.subscript >= cls.count) {
            throw std::invalid_argument("subscript not reduced modulo class size: " + term);
        }
        return r;
    }

    std::vector<std::string> split_terms(const std::string& body, const std::string& context) const {
        auto open = body.find('{');
        auto close = body.rfind('}');
        if (open == std::string::npos || close == std::string::npos || close < open)
            throw std::invalid_argument("expected {...} in " + context + ": " + body);
        std::vector<std::string> out;
        std::string inner = body.substr(open + 1, close - open - 1);
        std::istringstream in(inner);
        std::string piece;
        while (std::getline(in, piece, ',')) {
            piece = trim(piece);
            if (!piece.empty()) out.push_back(piece);
        }
        return out;
    }
};

struct IterClause {
    std::string var;
    std::vector<std::string> values;  // symbols or decimal integers
};

std::vector<IterClause> parse_iters(const std::string& prefix) {
    std::vector<IterClause> out;
    std::istringstream in(prefix);
    std::string clause;
    while (std::getline(in, clause, ';')) {
        clause = trim(clause);
        if (clause.rfind("for ", 0) == 0) clause = trim(clause.substr(4));
        auto in_pos = clause.find(" in ");
        if (in_pos == std::string::npos) throw std::invalid_argument("bad iterator clause: " + clause);
        IterClause ic;
        ic.var = trim(clause.substr(0, in_pos));
        std::string set = trim(clause.substr(in_pos + 4));
        if (set.rfind('Z', 0) == 0 && set.size() > 1) {
            int n = std::stoi(set.substr(1));
            for (int i = 0; i < n; ++i) ic.values.push_back(std::to_string(i));
        } else if (set.front() == '{' && set.back() == '}') {
            std::istringstream vs(set.substr(1, set.size() - 2));
            std::string val;
            while (std::getline(vs, val, ',')) ic.values.push_back(trim(val));
        } else {
            throw std::invalid_argument("bad iterator set: " + set);
        }
        if (ic.var.size() != 1 || ic.values.empty()) throw std::invalid_argument("bad iterator clause: " + clause);
        out.push_back(std::move(ic));
    }
    return out;
}

bool is_integer(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// expression inside [..]: integer, variable, or variable+integer
int eval_sub(const std::string& expr, const std::map<std::string, std::string>& env) {
    auto plus = expr.find('+');
    auto value_of = [&](const std::string& tok) {
        std::string t = trim(tok);
        if (is_integer(t)) return std::stoi(t);
        auto it = env.find(t);
        if (it == env.end() || !is_integer(it->second))
            throw std::invalid_argument("unbound subscript variable '" + t + "'");
        return std::stoi(it->second);
    };
    if (plus == std::string::npos) return value_of(expr);
    return value_of(expr.substr(0, plus)) + value_of(expr.substr(plus + 1));
}

}  // namespace

BaseBlockSystem parse_base_block_system(std::string_view text) {
    Parser P;
    enum class Section { Header, Groups, BaseBlocks, PreBlocks } section = Section::Header;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::string declared_type;
    while (std::getline(in, raw)) {
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line == "groups:") { section = Section::Groups; continue; }
        if (line == "base_blocks:") { section = Section::BaseBlocks; continue; }
        if (line == "pre_blocks:") { section = Section::PreBlocks; continue; }
        switch (section) {
            case Section::Header: {
                auto colon = line.find(':');
                if (colon == std::string::npos) throw std::invalid_argument("bad header line: " + line);
                std::string key = trim(line.substr(0, colon));
                std::string value = trim(line.substr(colon + 1));
                if (key == "name") P.sys.name = value;
                else if (key == "type") declared_type = value;
                else if (key == "modulus") P.sys.modulus = std::stoi(value);
                else if (key == "classes") {
                    std::istringstream cs(value);
                    std::string spec;
                    while (cs >> spec) {
                        auto sep = spec.find(':');
                        if (sep == std::string::npos) throw std::invalid_argument("bad class spec: " + spec);
                        PointClass c;
                        c.label = spec.substr(0, sep);
                        std::string cnt = spec.substr(sep + 1);
                        c.infinite = (c.label == "inf");
                        c.count = std::stoi(cnt);
                        if (c.count <= 0) throw std::invalid_argument("bad class count: " + spec);
                        if (!c.infinite && P.sys.modulus % c.count != 0)
                            throw std::invalid_argument("class size must divide the development modulus: " + spec);
                        if (P.class_index.count(c.label)) throw std::invalid_argument("duplicate class: " + c.label);
                        P.class_index[c.label] = static_cast<int>(P.sys.classes.size());
                        P.sys.classes.push_back(std::move(c));
                    }
                } else {
                    throw std::invalid_argument("unknown header key: " + key);
                }
                break;
            }
            case Section::Groups: {
                // [for v in SET; v2 in SET:] { term, ... } -- the body is the
                // last braced list; iterator sets may themselves use braces
                auto body_open = line.rfind('{');
                if (body_open == std::string::npos) throw std::invalid_argument("bad group line: " + line);
                std::string body = trim(line.substr(body_open));
                std::string prefix = trim(line.substr(0, body_open));
                if (!prefix.empty() && prefix.back() == ':') prefix.pop_back();
                prefix = trim(prefix);
                std::vector<IterClause> iters = prefix.empty() ? std::vector<IterClause>{} : parse_iters(prefix);
                std::vector<std::string> terms = P.split_terms(body, "group line");

                std::map<std::string, std::string> env;
                std::function<void(size_t)> expand = [&](size_t depth) {
                    if (depth == iters.size()) {
                        std::vector<int> group;
                        for (const auto& term : terms) {
                            if (term.back() == '*') {
                                int ci = P.find_class(term.substr(0, term.size() - 1), "group line");
                                int base = P.sys.class_base(ci);
                                for (int i = 0; i < P.sys.classes[ci].count; ++i) group.push_back(base + i);
                                continue;
                            }
                            auto lb = term.find('[');
                            if (lb == std::string::npos) {
                                group.push_back(P.sys.point_id(P.parse_compact(term, "group line")));
                            } else {
                                auto rb = term.rfind(']');
                                if (rb == std::string::npos || rb < lb)
                                    throw std::invalid_argument("bad term: " + term);
                                std::string name = trim(term.substr(0, lb));
                                auto bound = env.find(name);
                                std::string cls_label = bound != env.end() ? bound->second : name;
                                int ci = P.find_class(cls_label, "group line");
                                int sub = eval_sub(term.substr(lb + 1, rb - lb - 1), env);
                                const auto& cls = P.sys.classes[ci];
                                if (cls.infinite) {
                                    if (sub < 1 || sub > cls.count)
                                        throw std::invalid_argument("infinite subscript out of range: " + term);
                                } else {
                                    sub = ((sub % cls.count) + cls.count) % cls.count;
                                }
                                group.push_back(P.sys.point_id({ci, sub}));
                            }
                        }
                        P.sys.groups.push_back(std::move(group));
                        return;
                    }
                    for (const auto& val : iters[depth].values) {
                        env[iters[depth].var] = val;
                        expand(depth + 1);
                    }
                    env.erase(iters[depth].var);
                };
                expand(0);
                break;
            }
            case Section::BaseBlocks: {
                BaseBlock bb;
                bb.declared_orbit = P.sys.modulus;
                std::string body = line;
                if (line.rfind("orbit=", 0) == 0) {
                    auto colon = line.find(':');
                    if (colon == std::string::npos) throw std::invalid_argument("bad base block line: " + line);
                    bb.declared_orbit = std::stoi(line.substr(6, colon - 6));
                    body = trim(line.substr(colon + 1));
                }
                for (const auto& term : P.split_terms(body, "base block"))
                    bb.points.push_back(P.parse_compact(term, "base block"));
                P.sys.base_blocks.push_back(std::move(bb));
                break;
            }
            case Section::PreBlocks: {
                std::vector<int> block;
                for (const auto& term : P.split_terms(line, "pre block"))
                    block.push_back(P.sys.point_id(P.parse_compact(term, "pre block")));
                P.sys.pre_blocks.push_back(std::move(block));
                break;
            }
        }
    }
    if (P.sys.classes.empty()) throw std::invalid_argument("base block file declares no classes");
    if (!declared_type.empty()) P.sys.declared_type = GroupType::parse(declared_type);
    return P.sys;
}

BaseBlockSystem load_base_block_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open base block file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_base_block_system(buf.str());
}

Design develop(const BaseBlockSystem& sys) {
    for (const auto& c : sys.classes)
        if (!c.infinite && sys.modulus % c.count != 0)
            throw std::invalid_argument(sys.name + ": class '" + c.label + "' size must divide the development modulus");
    const int n = sys.num_points();
    // groups must partition the points
    {
        std::vector<int> seen(n, 0);
        for (const auto& g : sys.groups)
            for (int p : g) {
                if (p < 0 || p >= n || seen[p]++)
                    throw std::invalid_argument(sys.name + ": group patterns do not partition the points");
            }
        for (int p = 0; p < n; ++p)
            if (!seen[p]) throw std::invalid_argument(sys.name + ": point " + sys.point_label(p) + " is in no group");
    }

    auto shift_block = [&](const std::vector<int>& block, int amount) {
        std::vector<int> out;
        out.reserve(block.size());
        for (int p : block) out.push_back(sys.shift_point(p, amount));
        std::sort(out.begin(), out.end());
        return out;
    };

    std::vector<std::vector<int>> blocks;
    std::set<std::vector<int>> dedupe;
    for (size_t bi = 0; bi < sys.base_blocks.size(); ++bi) {
        const auto& bb = sys.base_blocks[bi];
        std::vector<int> base;
        for (const auto& r : bb.points) base.push_back(sys.point_id(r));
        std::sort(base.begin(), base.end());
        if (std::adjacent_find(base.begin(), base.end()) != base.end())
            throw std::invalid_argument(sys.name + ": base block " + std::to_string(bi + 1) + " repeats a point");

        int orbit = 0;
        for (int d = 1; d <= sys.modulus; ++d) {
            if (shift_block(base, d) == base) { orbit = d; break; }
        }
        if (orbit == 0 || sys.modulus % orbit != 0)
            throw std::logic_error(sys.name + ": stabilizer of base block " + std::to_string(bi + 1) + " is not a subgroup");
        if (orbit != bb.declared_orbit)
            throw std::invalid_argument(sys.name + ": base block " + std::to_string(bi + 1) + " declares orbit " +
                                        std::to_string(bb.declared_orbit) + " but develops " + std::to_string(orbit) +
                                        " distinct blocks");
        for (int j = 0; j < orbit; ++j) {
            auto blk = shift_block(base, j);
            if (!dedupe.insert(blk).second)
                throw std::invalid_argument(sys.name + ": duplicate block from base block " + std::to_string(bi + 1) +
                                            " shift " + std::to_string(j));
            blocks.push_back(std::move(blk));
        }
    }
    for (const auto& pre : sys.pre_blocks) {
        auto blk = pre;
        std::sort(blk.begin(), blk.end());
        if (std::adjacent_find(blk.begin(), blk.end()) != blk.end())
            throw std::invalid_argument(sys.name + ": pre block repeats a point");
        if (!dedupe.insert(blk).second) throw std::invalid_argument(sys.name + ": duplicate pre block");
        blocks.push_back(std::move(blk));
    }

    std::vector<std::string> labels;
    labels.reserve(n);
    for (int p = 0; p < n; ++p) labels.push_back(sys.point_label(p));

    Design d = make_design(n, sys.groups, std::move(blocks), Provenance::Developed, std::move(labels));
    if (!sys.declared_type.empty() && d.type() != sys.declared_type)
        throw std::invalid_argument(sys.name + ": declared type " + sys.declared_type.str() +
                                    " but groups give " + d.type().str());
    return d;
}

std::vector<std::vector<int>> blocks_from_incidence(const IncidenceTable& table, int k) {
    long long total = 0;
    for (const auto& [point, list] : table.per_point_lists) total += static_cast<long long>(list.size());
    if (total != static_cast<long long>(table.num_blocks) * k)
        throw std::invalid_argument("incidence table has " + std::to_string(total) + " entries, want " +
                                    std::to_string(static_cast<long long>(table.num_blocks) * k));
    std::vector<std::vector<int>> blocks(table.num_blocks);
    for (const auto& [point, list] : table.per_point_lists) {
        for (int b : list) {
            if (b < 1 || b > table.num_blocks) throw std::invalid_argument("block index out of range: " + std::to_string(b));
            blocks[b - 1].push_back(point);
        }
    }
    for (size_t j = 0; j < blocks.size(); ++j)
        if (blocks[j].size() != static_cast<size_t>(k))
            throw std::invalid_argument("block " + std::to_string(j + 1) + " receives " +
                                        std::to_string(blocks[j].size()) + " points, want " + std::to_string(k));
    return blocks;
}

// ---- fixture registry -------------------------------------------------

namespace {

// incidence fixture: kind: incidence, groups as 1-based ranges, then
// per-point block lists
Design parse_incidence_fixture(const std::string& text, std::string* name_out) {
    std::istringstream in(text);
    std::string line;
    int num_blocks = 0;
    int max_point = 0;
    std::string declared_type;
    std::vector<std::pair<int, int>> group_ranges;
    IncidenceTable table;
    enum class Section { Header, Groups, Points } section = Section::Header;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line == "groups:") { section = Section::Groups; continue; }
        if (line == "points:") { section = Section::Points; continue; }
        switch (section) {
            case Section::Header: {
                auto colon = line.find(':');
                std::string key = trim(line.substr(0, colon));
                std::string value = trim(line.substr(colon + 1));
                if (key == "name") *name_out = value;
                else if (key == "type") declared_type = value;
                else if (key == "blocks") num_blocks = std::stoi(value);
                else if (key != "kind") throw std::invalid_argument("unknown incidence header: " + key);
                break;
            }
            case Section::Groups: {
                auto dash = line.find('-');
                int lo, hi;
                if (dash == std::string::npos) lo = hi = std::stoi(line);
                else {
                    lo = std::stoi(line.substr(0, dash));
                    hi = std::stoi(line.substr(dash + 1));
                }
                group_ranges.emplace_back(lo, hi);
                max_point = std::max(max_point, hi);
                break;
            }
            case Section::Points: {
                auto colon = line.find(':');
                int point = std::stoi(line.substr(0, colon));
                std::istringstream ls(line.substr(colon + 1));
                int b;
                auto& list = table.per_point_lists[point];
                while (ls >> b) list.push_back(b);
                std::sort(list.begin(), list.end());
                break;
            }
        }
    }
    table.num_blocks = num_blocks;
    auto blocks_1based = blocks_from_incidence(table, 4);
    std::vector<std::vector<int>> blocks;
    for (auto& b : blocks_1based) {
        std::vector<int> blk;
        for (int p : b) blk.push_back(p - 1);
        blocks.push_back(std::move(blk));
    }
    std::vector<std::vector<int>> groups;
    for (auto [lo, hi] : group_ranges) {
        std::vector<int> g;
        for (int p = lo; p <= hi; ++p) g.push_back(p - 1);
        groups.push_back(std::move(g));
    }
    std::vector<std::string> labels;
    for (int p = 1; p <= max_point; ++p) labels.push_back(std::to_string(p));
    Design d = make_design(max_point, std::move(groups), std::move(blocks), Provenance::ShippedTable,
                           std::move(labels));
    if (!declared_type.empty() && d.type() != GroupType::parse(declared_type))
        throw std::invalid_argument("incidence fixture type mismatch");
    return d;
}

struct Fixture {
    std::string name;
    Design design;
    std::optional<BaseBlockSystem> system;
    std::string text;
};

const std::vector<std::string> kFixtureNames = {
    "2255",  "21455", "2459",  "21854", "2858",  "21755", "21158",
    "22055", "21458", "22655", "21659", "26513", "21959", "58141201",
};

const std::map<std::string, Fixture>& registry() {
    static const std::map<std::string, Fixture> reg = [] {
        std::map<std::string, Fixture> out;
        for (const auto& name : kFixtureNames) {
            Fixture f;
            f.name = name;
            f.text = detail::embedded_file(name + ".gdd");
            if (f.text.find("kind: incidence") != std::string::npos) {
                std::string parsed_name;
                f.design = parse_incidence_fixture(f.text, &parsed_name);
            } else {
                BaseBlockSystem sys = parse_base_block_system(f.text);
                f.design = develop(sys);
                f.system = std::move(sys);
            }
            f.design.provenance = Provenance::ShippedTable;
            if (static_cast<long long>(f.design.blocks.size()) != expected_block_count(f.design.type(), 4))
                throw std::runtime_error("fixture " + name + ": block count " +
                                         std::to_string(f.design.blocks.size()) + " != expected " +
                                         std::to_string(expected_block_count(f.design.type(), 4)));
            auto rep = verify(f.design, 4);
            if (!rep.pass)
                throw std::runtime_error("fixture " + name + " fails verification:\n" + rep.str(&f.design));
            out.emplace(name, std::move(f));
        }
        return out;
    }();
    return reg;
}

}  // namespace

const std::vector<std::string>& fixture_names() { return kFixtureNames; }

bool is_fixture_name(const std::string& name) {
    return std::find(kFixtureNames.begin(), kFixtureNames.end(), name) != kFixtureNames.end();
}

const Design& load_fixture(const std::string& name) {
    auto it = registry().find(name);
    if (it == registry().end()) throw std::out_of_range("unknown fixture: " + name);
    return it->second.design;
}

const std::string& fixture_text(const std::string& name) {
    auto it = registry().find(name);
    if (it == registry().end()) throw std::out_of_range("unknown fixture: " + name);
    return it->second.text;
}

const BaseBlockSystem& fixture_system(const std::string& name) {
    auto it = registry().find(name);
    if (it == registry().end()) throw std::out_of_range("unknown fixture: " + name);
    if (!it->second.system) throw std::runtime_error("fixture " + name + " is an incidence table, not a base-block system");
    return *it->second.system;
}

const std::string* fixture_for_type(const GroupType& gt) {
    for (const auto& name : kFixtureNames) {
        if (load_fixture(name).type() == gt) {
            auto it = registry().find(name);
            return &it->second.name;
        }
    }
    return nullptr;
}

}  // namespace gdd
