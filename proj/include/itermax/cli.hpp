#pragma once

#include <iosfwd>

namespace itermax {

// Exit codes: 0 success, 1 usage error, 2 domain error, 3 capacity error.
// Result records stream to `out`, error records to `err`, one per line.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace itermax
