#include "embedded.hpp"

#include <stdexcept>

namespace gdd::detail {

namespace {

struct EmbeddedFile {
    const char* name;
    const char* text;
};

#include "embedded_data.inc"

}  // namespace

const char* embedded_file(const std::string& name) {
    for (const auto& f : kEmbeddedFiles)
        if (name == f.name) return f.text;
    throw std::out_of_range("no embedded data file: " + name);
}

std::vector<std::string> embedded_names() {
    std::vector<std::string> out;
    for (const auto& f : kEmbeddedFiles) out.emplace_back(f.name);
    return out;
}

}  // namespace gdd::detail
