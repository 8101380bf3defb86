#pragma once

#include <string>
#include <vector>

namespace gdd::detail {

/// Text of a file embedded from data/ at configure time.
/// Throws std::out_of_range for unknown names.
const char* embedded_file(const std::string& name);

std::vector<std::string> embedded_names();

}  // namespace gdd::detail
