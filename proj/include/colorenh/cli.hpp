#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace colorenh {

/// Exit codes: 0 success, 1 processing failure, 2 usage error.
int cli_main(int argc, const char* const* argv);
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace colorenh
