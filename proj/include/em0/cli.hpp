#pragma once

#include <iosfwd>
#include <string>

namespace em0::cli {

// Exit codes: 0 success, 1 simulation fault, 2 usage or I/O error.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

// The `models` listing (text form); one row per builtin configuration.
std::string models_list_text();

} // namespace em0::cli
