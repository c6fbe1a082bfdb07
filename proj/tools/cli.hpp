#pragma once

#include <iosfwd>

namespace typeb::cli {

/// Exit codes: 0 success, 1 a check failed, 2 bad flags or arguments,
/// 3 capacity refusal.
enum ExitCode : int { kOk = 0, kCheckFailed = 1, kBadFlags = 2, kCapacity = 3 };

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace typeb::cli
