#pragma once

#include <iosfwd>

namespace rcover {

// Exit codes: 0 pass or inconclusive, 1 fail, 2 parse or precondition error,
// 3 infeasible schedule.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rcover
