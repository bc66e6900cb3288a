#pragma once

#include <iosfwd>

namespace fourcurv {

/// Exit codes: 0 success, 1 acceptance failure, 2 input or schema error.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace fourcurv
