#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "lbridge/lbridge.hpp"

namespace lbridge::cli {

struct SessionOptions {
  std::size_t max_depth = 1'000'000;
};

enum class Status { ok, user_error, io_error };

struct EvalResult {
  Status status = Status::ok;
  std::string output;  // one line per entry, newline-terminated
  std::string error;
};

/// Interactive state: an engine on a private registry, named conversion
/// contexts, named host objects, and named terms (`$name` in input).
///
/// Commands:
///   ?- Goal.                       print each solution, or false
///   :assert Clause.                :retractall Head       :consult Path
///   :mkperson Name as Obj          :drop Obj
///   :toterm Obj [as R]             :serialize Obj [as R]
///   :refterm Obj [Key] [as R]      :weakrefterm / :softrefterm Obj [Key] [retractall Head]
///   :genref Obj [as R]             :jref / :weakjref / :softjref Obj [as R] [retractall Head]
///   :forget Key                    :referent Term
///   :select Var Goal.              :count Goal.
///   :collect [--pressure]          :refs
///   :context Name                  :register-person-converter
class Session {
 public:
  explicit Session(SessionOptions options = {});

  EvalResult eval(std::string_view line);

  Engine& engine() { return engine_; }
  RefRegistry& registry() { return *registry_; }

 private:
  struct NamedContext {
    std::vector<Converter> converters;
    ConversionContext built;
  };

  EvalResult dispatch(const std::string& command, std::string args);

  Term parse_with_refs(std::string_view text, bool goal);
  Object object_named(const std::string& name) const;
  const ConversionContext& active() const;
  std::string render(const Object& obj) const;
  void bind_result(const std::string& name, const Term& t);

  EvalResult run_query(std::string_view text);
  EvalResult select(std::string args);
  EvalResult associate(const std::string& command, std::string args);
  EvalResult make_ref(const std::string& command, std::string args);
  EvalResult collect(const std::string& args);
  EvalResult set_context(const std::string& args);

  std::shared_ptr<RefRegistry> registry_;
  Engine engine_;
  std::map<std::string, NamedContext> contexts_;
  std::string active_ = "default";
  std::map<std::string, Object> objects_;
  std::map<std::string, Term> terms_;
  std::vector<std::string> cleaning_log_;
};

/// Evaluates each line; errors go to `err`, everything else to `out`.
/// Returns 0 if no line failed, 1 if some line failed, 2 on an I/O failure
/// (evaluation stops there).
int run_lines(std::istream& in, Session& session, std::ostream& out, std::ostream& err, bool prompt = false);

int run_script(const std::filesystem::path& path, Session& session, std::ostream& out, std::ostream& err);

}  // namespace lbridge::cli
