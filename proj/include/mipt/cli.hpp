#pragma once

namespace mipt::cli {

/// Entry point of the `mipt` tool. Exit codes: 0 success, 1 configuration /
/// validation error, 2 numeric or precision failure.
int run(int argc, const char* const* argv);

}  // namespace mipt::cli
