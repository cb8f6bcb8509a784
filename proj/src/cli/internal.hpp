#pragma once

#include "epsnet/cli.hpp"

#include <string>
#include <vector>

namespace epsnet::cli::detail {

/// Text, number, or {"expr": ..., "overrides": {...}}; errors carry `ptr`.
GenNumber gen_number(const json& v, const std::string& ptr, const EpsGrid& grid);

std::string pointer_at(const std::string& ptr, const std::string& key);

}  // namespace epsnet::cli::detail
