#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qsynth::cli {

// Entry point of the `qsynth` tool; returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qsynth::cli
