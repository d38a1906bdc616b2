#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace gsalg::cli {

inline constexpr const char* kSchema = "gsalg-report/1";

enum ExitCode : int { kComputed = 0, kFailed = 1, kUsage = 2 };

/// args excludes the program name. JSON (or its flattened text form) goes to `out`,
/// usage and input errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// One "path = value" line per JSON leaf, in key order.
std::string flatten_text(const nlohmann::json& j);

}  // namespace gsalg::cli
