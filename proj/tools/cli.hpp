#pragma once

#include <iosfwd>

namespace cheb::cli {

/// Stable exit statuses.
enum Exit : int { ok = 0, violation = 1, usage = 2, io = 3 };

/// Entry point of the `cheb` tool. Output goes to the given streams so tests
/// can capture it.
int run(int argc, char **argv, std::ostream &out, std::ostream &err);
int run(int argc, char **argv);

} // namespace cheb::cli
