#pragma once

#include <iosfwd>

namespace symphonic::cli {

/// Entry point of the `symphonic` command. Returns the process exit status:
/// 0 success, 1 a check failed or errored, 2 bad usage or configuration.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace symphonic::cli
