#pragma once

// Command-line front end. Exit codes: 0 success, 1 invalid input, 2 accuracy
// failure, 3 selftest failure.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace gaussbell::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitAccuracy = 2;
inline constexpr int kExitSelftest = 3;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct SelftestOptions {
  bool quick = false;
  std::uint64_t seed = 42;
  std::int64_t samples = 200'000;
};

struct SuiteResult {
  std::string name;
  bool skipped = false;
  bool pass = false;
  std::string detail;
};

std::vector<SuiteResult> run_selftest(const SelftestOptions& opts);

/// Parses "key=value" lines; '#' starts a comment, blank lines are ignored.
std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text);

}  // namespace gaussbell::cli
