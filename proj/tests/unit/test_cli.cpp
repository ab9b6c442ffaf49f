#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "session.hpp"

using namespace lbridge;
using cli::Session;
using cli::Status;

namespace {

std::string out(Session& s, std::string_view line) {
  auto r = s.eval(line);
  return r.output + r.error;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("queries print one solution per line") {
  Session s;
  CHECK(out(s, ":assert student(person(mary)).") == "ok\n");
  CHECK(out(s, "?- student(P).") == "P = person(mary)\n");
  CHECK(out(s, "?- student(person(mary)).") == "true\n");
  CHECK(out(s, "?- student(person(bob)).") == "false\n");
  CHECK(out(s, "") == "");
  CHECK(out(s, "% comment") == "");
}

TEST_CASE("solution lines re-parse") {
  Session s;
  out(s, ":assert p(f('hello world', [1, 2.5|x]), -3).");
  std::string line = out(s, "?- p(A, B).");
  REQUIRE(line.rfind("A = ", 0) == 0);
  std::string a = line.substr(4, line.find(", B = ") - 4);
  CHECK(print_term(parse_term(a)) == a);
}

TEST_CASE("errors are rendered and the session continues") {
  Session s;
  auto bad = s.eval(":assert p(a");
  CHECK(bad.status == Status::user_error);
  CHECK(bad.error.rfind("error: syntax_error: ", 0) == 0);
  CHECK(s.eval(":nope").error.rfind("error: usage_error: ", 0) == 0);
  CHECK(s.eval("p(a).").status == Status::user_error);
  CHECK(s.eval(":consult /definitely/not/here.pl").status == Status::io_error);
  CHECK(s.eval(":select X nope(X).").output == "false\n");
  CHECK(s.eval(":toterm ghost").error.find("no object named 'ghost'") != std::string::npos);
  CHECK(out(s, ":assert p(a).") == "ok\n");
}

TEST_CASE("refs dump after one generated reference") {
  Session s;
  out(s, ":mkperson Mary as m");
  CHECK(out(s, ":genref m") == "jref(1)\n");
  CHECK(out(s, ":refs") == "1 strong live jref(1)\n");
}

TEST_CASE("weak association, drop, collect, select") {
  Session s;
  out(s, ":mkperson Mary as m");
  out(s, ":assert student(person(mary)).");
  CHECK(out(s, ":weakrefterm m person(mary)") == "person(mary)\n");
  CHECK(out(s, ":drop m") == "ok\n");
  CHECK(out(s, ":collect") == "invalidated: 1\n");
  auto r = s.eval(":select P student(P).");
  CHECK(r.status == Status::user_error);
  CHECK(r.error.rfind("error: conversion_error", 0) == 0);
}

TEST_CASE("named terms") {
  Session s;
  out(s, ":mkperson Mary as m");
  CHECK(out(s, ":jref m as r") == "<jref:1>\n");
  CHECK(out(s, ":assert likes($r, wine).") == "ok\n");
  CHECK(out(s, "?- likes($r, W).") == "W = wine\n");
  CHECK(out(s, ":referent $r") == "Person(\"Mary\") is m\n");
  CHECK(s.eval("?- likes($missing, W).").status == Status::user_error);
  CHECK(out(s, "?- X = '$r'.") == "X = '$r'\n");
}

TEST_CASE("run_lines exit codes") {
  Session ok;
  std::istringstream good(":assert p(a).\n?- p(X).\n");
  std::ostringstream o, e;
  CHECK(cli::run_lines(good, ok, o, e) == 0);

  Session partial;
  std::istringstream mixed(":assert p(a\n:assert p(b).\n?- p(X).\n");
  std::ostringstream o2, e2;
  CHECK(cli::run_lines(mixed, partial, o2, e2) == 1);
  CHECK(o2.str() == "ok\nX = b\n");

  Session io;
  std::istringstream failing(":consult /no/such/file\n?- true.\n");
  std::ostringstream o3, e3;
  CHECK(cli::run_lines(failing, io, o3, e3) == 2);
  CHECK(o3.str().empty());
}

TEST_CASE("golden fixtures") {
  auto scripts = testing::fixture_scripts(LBRIDGE_FIXTURE_DIR);
  REQUIRE(scripts.size() >= 9);
  for (const auto& script : scripts) {
    CAPTURE(script.filename().string());
    auto expected_path = std::filesystem::path(script).replace_extension(".out");
    auto run = testing::run_fixture(script);
    if (std::getenv("LBRIDGE_UPDATE_GOLDEN")) {
      std::ofstream(expected_path, std::ios::binary) << run.output;
      continue;
    }
    REQUIRE(std::filesystem::exists(expected_path));
    CHECK(run.output == testing::read_file(expected_path));
    CHECK(testing::run_fixture(script).output == run.output);
  }
}

}
