#pragma once

#include <iosfwd>

namespace kmw {

/// Entry point of the kmw command line. Returns 0 on success, 1 when a
/// validation or construction step fails, 2 on usage errors.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kmw
