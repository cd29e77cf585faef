#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace kpcert::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Exit codes: 0 success / condition holds, 1 condition fails, 2 usage or
/// structural error.
enum ExitCode : int { kOk = 0, kFails = 1, kError = 2 };

/// Entry point of the `kpcert` tool. `args` includes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kpcert::cli
