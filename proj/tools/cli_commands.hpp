#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "periodforge/curve.hpp"

namespace periodforge::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_bracket = 2,
    exit_accuracy = 3,
    exit_threshold = 4,
    exit_usage = 64,
};

// "0.5i", "-0.2+0.4i", "0.3", "i"; empty on malformed input.
std::optional<cplx> parse_complex(const std::string& text);

// Full command line including the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace periodforge::cli
