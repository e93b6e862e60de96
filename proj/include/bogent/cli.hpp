#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bogent::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kUsage = 1, kConfigError = 2, kNumericalError = 3 };

/// Runs the driver on `args` (without the program name). CSV goes to
/// `--out` when given, otherwise to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a of `text`, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace bogent::cli
