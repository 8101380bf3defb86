#include "gdd/types.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gdd {

GroupType::GroupType(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    for (int g : sizes_) {
        if (g <= 0) throw std::invalid_argument("group sizes must be positive");
    }
    std::sort(sizes_.begin(), sizes_.end(), std::greater<int>());
}

GroupType GroupType::parse(std::string_view text) {
    std::vector<int> sizes;
    std::istringstream in{std::string(text)};
    std::string tok;
    bool any = false;
    while (in >> tok) {
        any = true;
        auto caret = tok.find('^');
        std::string size_part = tok.substr(0, caret);
        std::string exp_part = caret == std::string::npos ? "1" : tok.substr(caret + 1);
        auto parse_int = [&tok](const std::string& s) {
            if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
                throw std::invalid_argument("malformed group type token: " + tok);
            long long value = 0;
            for (char c : s) {
                value = value * 10 + (c - '0');
                if (value > 1000000) throw std::invalid_argument("group type value out of range: " + tok);
            }
            return static_cast<int>(value);
        };
        int size = parse_int(size_part);
        int exp = parse_int(exp_part);
        if (size == 0) throw std::invalid_argument("zero group size in type: " + tok);
        if (exp == 0) throw std::invalid_argument("zero exponent in type: " + tok);
        for (int i = 0; i < exp; ++i) sizes.push_back(size);
        if (sizes.size() > 2000000) throw std::invalid_argument("group type too large");
    }
    if (!any) throw std::invalid_argument("empty group type");
    return GroupType(std::move(sizes));
}

std::string GroupType::str() const {
    std::ostringstream out;
    for (size_t i = 0; i < sizes_.size();) {
        size_t j = i;
        while (j < sizes_.size() && sizes_[j] == sizes_[i]) ++j;
        if (i) out << ' ';
        out << sizes_[i] << '^' << (j - i);
        i = j;
    }
    return out.str();
}

long long GroupType::point_count() const {
    long long v = 0;
    for (int g : sizes_) v += g;
    return v;
}

long long GroupType::sum_g_v_minus_g() const {
    long long v = point_count();
    long long sum = 0;
    for (int g : sizes_) sum += static_cast<long long>(g) * (v - g);
    return sum;
}

int GroupType::count_of(int size) const {
    return static_cast<int>(std::count(sizes_.begin(), sizes_.end(), size));
}

GroupType type_2t5s(int t, int s) {
    std::vector<int> sizes;
    sizes.reserve(t + s);
    for (int i = 0; i < s; ++i) sizes.push_back(5);
    for (int i = 0; i < t; ++i) sizes.push_back(2);
    return GroupType(std::move(sizes));
}

std::string provenance_str(Provenance p) {
    switch (p) {
        case Provenance::ShippedTable: return "shipped-table";
        case Provenance::Developed: return "developed";
        case Provenance::Searched: return "searched";
        case Provenance::FillIn: return "fill-in";
        case Provenance::Manual: return "manual";
    }
    return "manual";
}

std::optional<Provenance> provenance_parse(std::string_view s) {
    if (s == "shipped-table") return Provenance::ShippedTable;
    if (s == "developed") return Provenance::Developed;
    if (s == "searched") return Provenance::Searched;
    if (s == "fill-in") return Provenance::FillIn;
    if (s == "manual") return Provenance::Manual;
    return std::nullopt;
}

GroupType Design::type() const {
    std::vector<int> sizes;
    sizes.reserve(groups.size());
    for (const auto& g : groups) sizes.push_back(static_cast<int>(g.size()));
    return GroupType(std::move(sizes));
}

const std::string& Design::label(int point) const {
    static const std::string empty;
    if (point < 0 || point >= num_points || labels.empty()) return empty;
    return labels[point];
}

Design make_design(int num_points, std::vector<std::vector<int>> groups,
                   std::vector<std::vector<int>> blocks, Provenance provenance,
                   std::vector<std::string> labels) {
    if (num_points <= 0) throw std::invalid_argument("design needs at least one point");
    Design d;
    d.num_points = num_points;
    d.provenance = provenance;
    d.point_group.assign(num_points, -1);
    for (auto& g : groups) {
        if (g.empty()) throw std::invalid_argument("empty group");
        std::sort(g.begin(), g.end());
        for (int p : g) {
            if (p < 0 || p >= num_points) throw std::invalid_argument("group point out of range");
            if (d.point_group[p] != -1) throw std::invalid_argument("point in two groups");
            d.point_group[p] = static_cast<int>(&g - groups.data());
        }
    }
    for (int p = 0; p < num_points; ++p) {
        if (d.point_group[p] == -1) throw std::invalid_argument("point missing from all groups");
    }
    for (auto& b : blocks) {
        std::sort(b.begin(), b.end());
        for (int p : b) {
            if (p < 0 || p >= num_points) throw std::invalid_argument("block point out of range");
        }
    }
    d.groups = std::move(groups);
    d.blocks = std::move(blocks);
    if (!labels.empty() && labels.size() != static_cast<size_t>(num_points))
        throw std::invalid_argument("label map must cover every point");
    d.labels = std::move(labels);
    return d;
}

GroupType type_of(const Design& d) { return d.type(); }

long long expected_block_count(const GroupType& gt, int k) {
    if (k < 2) throw std::invalid_argument("block size must be at least 2");
    long long denom = static_cast<long long>(k) * (k - 1);
    long long sum = gt.sum_g_v_minus_g();
    if (sum % denom != 0)
        throw std::domain_error("pair count " + std::to_string(sum) + " not divisible by k(k-1) for type " + gt.str());
    return sum / denom;
}

std::string serialize_design(const Design& d) {
    std::ostringstream out;
    out << "type: " << d.type().str() << '\n';
    out << "points: " << d.num_points << '\n';
    out << "provenance: " << provenance_str(d.provenance) << '\n';
    out << "groups:\n";
    for (const auto& g : d.groups) {
        for (size_t i = 0; i < g.size(); ++i) out << (i ? " " : "") << g[i];
        out << '\n';
    }
    out << "blocks:\n";
    for (const auto& b : d.blocks) {
        for (size_t i = 0; i < b.size(); ++i) out << (i ? " " : "") << b[i];
        out << '\n';
    }
    if (!d.labels.empty()) {
        out << "labels:\n";
        for (int p = 0; p < d.num_points; ++p) out << p << ' ' << d.labels[p] << '\n';
    }
    return out.str();
}

Design parse_design(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::string type_str;
    int num_points = -1;
    Provenance prov = Provenance::Manual;
    std::vector<std::vector<int>> groups, blocks;
    std::vector<std::string> labels;
    enum class Section { Header, Groups, Blocks, Labels } section = Section::Header;

    auto parse_ints = [](const std::string& s) {
        std::vector<int> out;
        std::istringstream ls(s);
        int x;
        while (ls >> x) out.push_back(x);
        return out;
    };

    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line == "groups:") { section = Section::Groups; continue; }
        if (line == "blocks:") { section = Section::Blocks; continue; }
        if (line == "labels:") { section = Section::Labels; continue; }
        switch (section) {
            case Section::Header: {
                auto colon = line.find(':');
                if (colon == std::string::npos) throw std::invalid_argument("bad design header line: " + line);
                std::string key = line.substr(0, colon);
                std::string value = line.substr(colon + 1);
                if (!value.empty() && value[0] == ' ') value.erase(0, 1);
                if (key == "type") type_str = value;
                else if (key == "points") num_points = std::stoi(value);
                else if (key == "provenance") {
                    auto p = provenance_parse(value);
                    if (!p) throw std::invalid_argument("unknown provenance: " + value);
                    prov = *p;
                } else throw std::invalid_argument("unknown design header: " + key);
                break;
            }
            case Section::Groups: groups.push_back(parse_ints(line)); break;
            case Section::Blocks: blocks.push_back(parse_ints(line)); break;
            case Section::Labels: {
                std::istringstream ls(line);
                int p; std::string lab;
                if (!(ls >> p >> lab)) throw std::invalid_argument("bad label line: " + line);
                if (labels.empty()) labels.assign(static_cast<size_t>(num_points), "");
                if (p < 0 || p >= num_points) throw std::invalid_argument("label point out of range");
                labels[p] = lab;
                break;
            }
        }
    }
    if (num_points < 0) throw std::invalid_argument("design file missing points header");
    Design d = make_design(num_points, std::move(groups), std::move(blocks), prov, std::move(labels));
    if (!type_str.empty() && GroupType::parse(type_str) != d.type())
        throw std::invalid_argument("declared type " + type_str + " does not match groups (" + d.type().str() + ")");
    return d;
}

Design load_design_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open design file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_design(buf.str());
}

void write_design_file(const std::string& path, const Design& d) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write design file: " + path);
    out << serialize_design(d);
    if (!out) throw std::runtime_error("short write: " + path);
}

}  // namespace gdd
