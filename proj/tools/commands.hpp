#pragma once

#include <ostream>
#include <string_view>

namespace tvae::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kManifestSchema = "tvae-manifest/1";

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitResource = 3;
inline constexpr int kExitMetric = 4;

// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tvae::cli
