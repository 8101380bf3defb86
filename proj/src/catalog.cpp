#include "gdd/catalog.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <sys/file.h>
#include <unistd.h>

#include "gdd/construct.hpp"
#include "gdd/development.hpp"
#include "gdd/feasibility.hpp"
#include "gdd/search.hpp"
#include "gdd/verify.hpp"

namespace fs = std::filesystem;

namespace gdd {

// ---- sha256 ---------------------------------------------------------------

namespace {

constexpr std::array<std::uint32_t, 64> kSha256K = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4, 0xab1c5ed5,
    0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174,
    0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967,
    0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85,
    0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};

inline std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

}  // namespace

std::string sha256_hex(std::string_view data) {
    std::array<std::uint32_t, 8> h = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                                      0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
    std::string msg(data);
    std::uint64_t bitlen = static_cast<std::uint64_t>(msg.size()) * 8;
    msg.push_back(static_cast<char>(0x80));
    while (msg.size() % 64 != 56) msg.push_back('\0');
    for (int i = 7; i >= 0; --i) msg.push_back(static_cast<char>((bitlen >> (i * 8)) & 0xff));

    for (size_t off = 0; off < msg.size(); off += 64) {
        std::array<std::uint32_t, 64> w{};
        for (int i = 0; i < 16; ++i)
            w[i] = (static_cast<std::uint32_t>(static_cast<unsigned char>(msg[off + 4 * i])) << 24) |
                   (static_cast<std::uint32_t>(static_cast<unsigned char>(msg[off + 4 * i + 1])) << 16) |
                   (static_cast<std::uint32_t>(static_cast<unsigned char>(msg[off + 4 * i + 2])) << 8) |
                   static_cast<std::uint32_t>(static_cast<unsigned char>(msg[off + 4 * i + 3]));
        for (int i = 16; i < 64; ++i) {
            std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        auto [a, b, c, d, e, f, g, hh] = h;
        for (int i = 0; i < 64; ++i) {
            std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            std::uint32_t ch = (e & f) ^ (~e & g);
            std::uint32_t temp1 = hh + s1 + ch + kSha256K[i] + w[i];
            std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            std::uint32_t temp2 = s0 + maj;
            hh = g; g = f; f = e; e = d + temp1;
            d = c; c = b; b = a; a = temp1 + temp2;
        }
        h[0] += a; h[1] += b; h[2] += c; h[3] += d;
        h[4] += e; h[5] += f; h[6] += g; h[7] += hh;
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (std::uint32_t x : h)
        for (int i = 7; i >= 0; --i) out.push_back(hex[(x >> (4 * i)) & 0xf]);
    return out;
}

// ---- catalog ---------------------------------------------------------------

namespace {

std::string utc_now() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void atomic_write(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw std::runtime_error("short write " + tmp.string());
    }
    fs::rename(tmp, path);
}

struct FileLock {
    int fd = -1;
    explicit FileLock(const fs::path& p) {
        fd = ::open(p.c_str(), O_CREAT | O_RDWR, 0644);
        if (fd < 0) throw std::runtime_error("cannot open lock file " + p.string());
        if (::flock(fd, LOCK_EX) != 0) {
            ::close(fd);
            throw std::runtime_error("cannot lock " + p.string());
        }
    }
    ~FileLock() {
        if (fd >= 0) {
            ::flock(fd, LOCK_UN);
            ::close(fd);
        }
    }
};

}  // namespace

Catalog::Catalog(std::string directory) : dir_(std::move(directory)) {
    fs::create_directories(fs::path(dir_) / "designs");
}

std::string Catalog::index_path() const { return (fs::path(dir_) / "index.tsv").string(); }

std::vector<CatalogEntry> Catalog::read_index() const {
    std::vector<CatalogEntry> out;
    std::ifstream in(index_path(), std::ios::binary);
    if (!in) return out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        CatalogEntry e;
        std::string type_str, prov;
        if (!std::getline(ls, e.digest, '\t') || !std::getline(ls, type_str, '\t') ||
            !std::getline(ls, prov, '\t') || !std::getline(ls, e.file, '\t') ||
            !std::getline(ls, e.verified_at, '\t'))
            throw std::runtime_error("corrupt catalog index line: " + line);
        std::getline(ls, e.note, '\t');
        e.type = GroupType::parse(type_str);
        auto p = provenance_parse(prov);
        if (!p) throw std::runtime_error("corrupt catalog index provenance: " + prov);
        e.provenance = *p;
        out.push_back(std::move(e));
    }
    return out;
}

CatalogEntry Catalog::register_design(const Design& d, const std::string& note) {
    auto rep = verify(d);
    if (!rep.pass) throw std::invalid_argument("design fails verification, not registering:\n" + rep.str(&d));
    std::string body = serialize_design(d);
    CatalogEntry e;
    e.type = d.type();
    e.digest = sha256_hex(body);
    e.provenance = d.provenance;
    e.note = note;
    e.verified_at = utc_now();
    e.file = "designs/" + e.digest + ".gdd";

    FileLock lock(fs::path(dir_) / ".lock");
    auto existing = read_index();
    for (const auto& x : existing)
        if (x.digest == e.digest) return x;  // idempotent
    atomic_write(fs::path(dir_) / e.file, body);
    std::ostringstream idx;
    existing.push_back(e);
    std::sort(existing.begin(), existing.end(),
              [](const CatalogEntry& a, const CatalogEntry& b) { return a.digest < b.digest; });
    for (const auto& x : existing)
        idx << x.digest << '\t' << x.type.str() << '\t' << provenance_str(x.provenance) << '\t' << x.file << '\t'
            << x.verified_at << '\t' << x.note << '\n';
    atomic_write(index_path(), idx.str());
    return e;
}

std::vector<CatalogEntry> Catalog::entries() const {
    auto all = read_index();
    std::sort(all.begin(), all.end(), [](const CatalogEntry& a, const CatalogEntry& b) { return a.digest < b.digest; });
    return all;
}

std::vector<CatalogEntry> Catalog::lookup(const GroupType& gt) const {
    std::vector<CatalogEntry> out;
    for (auto& e : entries())
        if (e.type == gt) out.push_back(std::move(e));
    return out;
}

Design Catalog::load_entry(const CatalogEntry& e) const {
    return load_design_file((fs::path(dir_) / e.file).string());
}

std::optional<Design> Catalog::find_design(const GroupType& gt) const {
    auto hits = lookup(gt);
    if (hits.empty()) return std::nullopt;
    Design d = load_entry(hits.front());
    if (sha256_hex(serialize_design(d)) != hits.front().digest)
        throw std::runtime_error("catalog digest mismatch for " + hits.front().file);
    return d;
}

// ---- regression harness -----------------------------------------------------

bool RegressionSummary::pass() const {
    for (const auto& s : stages)
        if (!s.pass) return false;
    return true;
}

std::string RegressionSummary::str() const {
    std::ostringstream out;
    for (const auto& s : stages)
        out << (s.pass ? "PASS " : "FAIL ") << s.name << (s.detail.empty() ? "" : ": " + s.detail) << '\n';
    out << (pass() ? "regression: all stages pass" : "regression: FAILURES") << '\n';
    return out.str();
}

RegressionSummary run_regression() {
    RegressionSummary sum;
    auto stage = [&sum](const std::string& name, auto&& fn) {
        RegressionStage st;
        st.name = name;
        try {
            st.detail = fn();
            st.pass = true;
        } catch (const std::exception& e) {
            st.pass = false;
            st.detail = e.what();
        }
        sum.stages.push_back(std::move(st));
    };

    stage("fixture verification (14 designs)", [] {
        auto reps = verify_all_fixtures();
        int passed = 0;
        for (const auto& [name, rep] : reps) {
            if (!rep.pass) throw std::runtime_error("fixture " + name + " fails");
            ++passed;
        }
        if (passed != 14) throw std::runtime_error("expected 14 fixtures, saw " + std::to_string(passed));
        return std::to_string(passed) + "/14 pass";
    });

    stage("block-count identities", [] {
        for (const auto& name : fixture_names()) {
            const Design& d = load_fixture(name);
            GroupType gt = d.type();
            long long b = expected_block_count(gt, 4);
            if (static_cast<long long>(d.blocks.size()) != b)
                throw std::runtime_error(name + ": " + std::to_string(d.blocks.size()) + " blocks, expected " +
                                         std::to_string(b));
            long long v = gt.point_count();
            long long sq = 0;
            for (int g : gt.sizes()) sq += static_cast<long long>(g) * g;
            if (b * 6 != (v * v - sq) / 2) throw std::runtime_error(name + ": pair identity fails");
        }
        return "14 fixtures match both counting routes";
    });

    stage("feasible enumeration to 30 points", [] {
        auto got = enumerate_feasible(30);
        const auto& expect = small_case_feasible_types();
        if (got.size() != expect.size())
            throw std::runtime_error("enumerated " + std::to_string(got.size()) + " types, expected " +
                                     std::to_string(expect.size()));
        auto sorted_strs = [](const std::vector<GroupType>& v) {
            std::vector<std::string> out;
            for (const auto& x : v) out.push_back(x.str());
            std::sort(out.begin(), out.end());
            return out;
        };
        if (sorted_strs(got) != sorted_strs(expect)) throw std::runtime_error("enumerated set differs");
        return "exactly the 54 known types";
    });

    stage("decision sweep to v = 1000", [] {
        int exists = 0, pe = 0, dn = 0;
        for (int s = 0; 5 * s <= 1000; ++s) {
            for (int t = 0; 2 * t + 5 * s <= 1000; ++t) {
                if (!is_feasible(type_2t5s(t, s))) continue;
                Decision d = decide(t, s);
                switch (d.verdict) {
                    case Verdict::Exists: {
                        if (auto err = validate_certificate(d.certificate))
                            throw std::runtime_error("certificate for (" + std::to_string(t) + "," +
                                                     std::to_string(s) + "): " + *err);
                        ++exists;
                        break;
                    }
                    case Verdict::PossibleException: ++pe; break;
                    case Verdict::DefiniteNonexistence: ++dn; break;
                    case Verdict::Infeasible: throw std::runtime_error("feasible type judged infeasible");
                }
            }
        }
        if (dn != 2) throw std::runtime_error("definite-nonexistence count " + std::to_string(dn));
        if (pe != static_cast<int>(possible_exceptions().size()))
            throw std::runtime_error("possible-exception count " + std::to_string(pe));
        return std::to_string(exists) + " exists / " + std::to_string(pe) + " open / " + std::to_string(dn) +
               " nonexistent";
    });

    stage("end-to-end realization of 2^17 5^8", [] {
        fs::path tmp = fs::temp_directory_path() / ("gdd-regression-" + std::to_string(::getpid()));
        fs::remove_all(tmp);
        Catalog cat(tmp.string());
        auto result = materialize(17, 8, cat);
        fs::remove_all(tmp);
        if (!std::holds_alternative<Design>(result)) throw std::runtime_error("realization incomplete");
        const Design& d = std::get<Design>(result);
        if (d.type() != type_2t5s(17, 8)) throw std::runtime_error("wrong realized type");
        if (!verify(d).pass) throw std::runtime_error("realized design fails verification");
        return "74-point design verified";
    });

    return sum;
}

}  // namespace gdd
