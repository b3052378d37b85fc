#pragma once

namespace cadec {

inline constexpr const char* version_string = "0.1.0";

// Bumped whenever any emitted CSV column set changes.
inline constexpr int csv_schema_version = 1;

} // namespace cadec
