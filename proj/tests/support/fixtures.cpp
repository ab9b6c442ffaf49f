#include "fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "session.hpp"

namespace lbridge::testing {

FixtureRun run_fixture(const std::filesystem::path& script) {
  cli::Session session;
  std::ostringstream out;
  FixtureRun run;
  run.exit_code = cli::run_script(script, session, out, out);
  run.output = out.str();
  return run;
}

std::vector<std::filesystem::path> fixture_scripts(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> scripts;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".lbs") scripts.push_back(entry.path());
  std::sort(scripts.begin(), scripts.end());
  return scripts;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace lbridge::testing
