#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace lbridge::testing {

struct FixtureRun {
  std::string output;  // standard output and errors, interleaved in evaluation order
  int exit_code = 0;
};

// Runs a script through a fresh CLI session in this process.
FixtureRun run_fixture(const std::filesystem::path& script);

// Golden scripts (*.lbs) directly under `dir`, sorted by name.
std::vector<std::filesystem::path> fixture_scripts(const std::filesystem::path& dir);

std::string read_file(const std::filesystem::path& path);

}  // namespace lbridge::testing
