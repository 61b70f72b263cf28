#pragma once

#include <iosfwd>

namespace dcx {

/// Runs one workbench command. Returns 0 when the checked property holds,
/// 1 when it fails (a witness is printed) and 2 on input or usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dcx
