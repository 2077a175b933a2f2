#pragma once

namespace podles {

inline constexpr const char* library_version = "1.0.0";
inline constexpr const char* report_schema_id = "podles-report/1";

}  // namespace podles
