#include <unistd.h>

#include <iostream>

#include <CLI11.hpp>

#include "session.hpp"

int main(int argc, char** argv) {
  CLI::App app{"lbridge: a small logic engine with host object references"};
  std::string script;
  std::vector<std::string> consult;
  std::size_t depth = 1'000'000;
  app.add_option("--script", script, "Run the commands in a file and exit");
  app.add_option("--consult", consult, "Load program files before starting");
  app.add_option("--depth-limit", depth, "Maximum resolution depth")->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  lbridge::cli::Session session({depth});
  for (const auto& path : consult) {
    auto r = session.eval(":consult " + path);
    std::cerr << r.error;
    if (r.status == lbridge::cli::Status::io_error) return 2;
    if (r.status != lbridge::cli::Status::ok) return 1;
  }
  if (!script.empty()) return lbridge::cli::run_script(script, session, std::cout, std::cerr);
  return lbridge::cli::run_lines(std::cin, session, std::cout, std::cerr, isatty(STDIN_FILENO));
}
