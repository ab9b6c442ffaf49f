#include "session.hpp"

#include <cctype>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "lbridge/demo/person.hpp"

namespace lbridge::cli {

namespace {

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& message) : Error("usage_error", message) {}
};

constexpr std::string_view kRefVarPrefix = "_Sref_";

const char* kHelp =
    "?- Goal.                       run a query and print its solutions\n"
    ":assert Clause.                add a clause\n"
    ":retractall Head               remove clauses whose head unifies with Head\n"
    ":consult Path                  load a program file\n"
    ":mkperson Name as Obj          create a Person object\n"
    ":drop Obj                      release the session's handle on Obj\n"
    ":toterm Obj [as R]             convert Obj through the active context\n"
    ":serialize Obj [as R]          serialized/1 term for Obj\n"
    ":refterm Obj [Key] [as R]      strong association (Key defaults to :toterm Obj)\n"
    ":weakrefterm Obj [Key] [as R] [retractall Head]\n"
    ":softrefterm Obj [Key] [as R] [retractall Head]\n"
    ":genref Obj [as R]             generated jref(N) term\n"
    ":jref Obj [as R]               strong foreign reference term\n"
    ":weakjref Obj [as R] [retractall Head]\n"
    ":softjref Obj [as R] [retractall Head]\n"
    ":forget Key                    remove an association\n"
    ":referent Term                 show the object behind a reference\n"
    ":select Var Goal.              convert Var in each solution to an object\n"
    ":count Goal.                   number of solutions\n"
    ":collect [--pressure]          run a collection pass\n"
    ":refs                          list registry entries\n"
    ":context Name                  switch to (or create) a conversion context\n"
    ":register-person-converter     add the Person converter to the active context\n"
    "Terms may mention $R for a term bound with `as R`.\n";

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::pair<std::string, std::string> split_word(std::string_view s) {
  std::string t = trim(s);
  std::size_t i = 0;
  while (i < t.size() && !std::isspace(static_cast<unsigned char>(t[i]))) ++i;
  return {t.substr(0, i), trim(std::string_view(t).substr(i))};
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

// Position of a whitespace-delimited `word` outside quoted atoms, searching from the right.
std::optional<std::size_t> find_keyword(std::string_view s, std::string_view word) {
  std::optional<std::size_t> found;
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\'') quoted = !quoted;
    if (quoted || s.substr(i, word.size()) != word) continue;
    bool left = i > 0 && std::isspace(static_cast<unsigned char>(s[i - 1]));
    std::size_t end = i + word.size();
    bool right = end == s.size() || std::isspace(static_cast<unsigned char>(s[end]));
    if (left && right) found = i;
  }
  return found;
}

// Splits off a trailing `<keyword> <rest>` clause.
std::optional<std::string> take_keyword(std::string& args, std::string_view word) {
  auto pos = find_keyword(args, word);
  if (!pos) return std::nullopt;
  std::string rest = trim(std::string_view(args).substr(*pos + word.size()));
  args = trim(std::string_view(args).substr(0, *pos));
  if (rest.empty()) throw UsageError(std::string(word) + " needs an argument");
  return rest;
}

std::optional<std::string> take_as(std::string& args) {
  auto name = take_keyword(args, "as");
  if (name && !is_identifier(*name)) throw UsageError("'" + *name + "' is not a valid name");
  return name;
}

// Conversion failures keep their family name in front, e.g. dead references.
std::string render_error(const Error& e) {
  std::string kind = e.kind();
  if (dynamic_cast<const ConversionError*>(&e) && kind != "conversion_error") kind = "conversion_error: " + kind;
  return "error: " + kind + ": " + e.what() + "\n";
}

std::string render_double(double d) { return print_term(Term::floating(d)); }

// Replaces `$name` outside quoted atoms by a reserved variable bound to the named term.
std::pair<std::string, Substitution> rewrite_refs(std::string_view text, const std::map<std::string, Term>& terms) {
  std::string rewritten;
  std::vector<std::pair<Var, Term>> bindings;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\'') quoted = !quoted;
    if (quoted || c != '$') {
      rewritten += c;
      continue;
    }
    std::size_t j = i + 1;
    while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
    std::string name(text.substr(i + 1, j - i - 1));
    auto it = terms.find(name);
    if (name.empty() || it == terms.end()) throw UsageError("unknown term reference $" + name);
    Var var{std::string(kRefVarPrefix) + name, 0};
    rewritten += var.name;
    bool seen = false;
    for (const auto& b : bindings) seen = seen || b.first == var;
    if (!seen) bindings.emplace_back(var, it->second);
    i = j - 1;
  }
  return {std::move(rewritten), Substitution::from_bindings(bindings)};
}

}  // namespace

Session::Session(SessionOptions options)
    : registry_(RefRegistry::create()), engine_(registry_, EngineOptions{options.max_depth, true}) {
  demo::install_person_support(*registry_);
  contexts_.emplace("default", NamedContext{{}, ContextBuilder(registry_).build()});
}

const ConversionContext& Session::active() const { return contexts_.at(active_).built; }

Object Session::object_named(const std::string& name) const {
  auto it = objects_.find(name);
  if (it == objects_.end()) throw UsageError("no object named '" + name + "'");
  return it->second;
}

void Session::bind_result(const std::string& name, const Term& t) { terms_.insert_or_assign(name, t); }

Term Session::parse_with_refs(std::string_view text, bool goal) {
  auto [rewritten, subst] = rewrite_refs(text, terms_);
  return subst.apply(goal ? parse_goal(rewritten) : parse_term(rewritten));
}

std::string Session::render(const Object& obj) const {
  std::string text;
  if (auto* p = obj.get_if<demo::Person>()) {
    text = "Person(\"" + p->name() + "\")";
  } else if (auto* t = obj.get_if<Term>()) {
    text = print_term(*t);
  } else if (auto* s = obj.get_if<std::string>()) {
    text = "\"" + *s + "\"";
  } else if (auto* i = obj.get_if<std::int64_t>()) {
    text = std::to_string(*i);
  } else if (auto* i = obj.get_if<int>()) {
    text = std::to_string(*i);
  } else if (auto* b = obj.get_if<BigInt>()) {
    text = b->str();
  } else if (auto* d = obj.get_if<double>()) {
    text = render_double(*d);
  } else if (auto* b = obj.get_if<bool>()) {
    text = *b ? "true" : "false";
  } else if (auto* list = obj.get_if<ObjectList>()) {
    text = "[";
    for (std::size_t k = 0; k < list->size(); ++k) {
      if (k) text += ", ";
      text += render((*list)[k]);
    }
    text += "]";
    return text;
  } else {
    text = "<" + obj.type().name() + ">";
  }
  for (const auto& [name, named] : objects_)
    if (named.same_object(obj)) return text + " is " + name;
  for (const auto& [name, named] : objects_)
    if (registry_->objects_equal(named, obj)) return text + " equals " + name;
  return text;
}

EvalResult Session::eval(std::string_view raw) {
  std::string line = trim(raw);
  EvalResult result;
  if (line.empty() || line.front() == '%') return result;
  try {
    if (line.rfind("?-", 0) == 0) return run_query(std::string_view(line).substr(2));
    if (line.front() != ':') throw UsageError("expected a :command or a query '?- Goal.' (see :help)");
    auto [command, args] = split_word(line);
    return dispatch(command, std::move(args));
  } catch (const IoError& e) {
    result.status = Status::io_error;
    result.error = render_error(e);
  } catch (const Error& e) {
    result.status = Status::user_error;
    result.error = render_error(e);
  } catch (const std::exception& e) {
    result.status = Status::user_error;
    result.error = std::string("error: runtime_error: ") + e.what() + "\n";
  }
  return result;
}

EvalResult Session::dispatch(const std::string& command, std::string args) {
  EvalResult r;
  auto need = [&](bool ok, const char* usage) {
    if (!ok) throw UsageError(std::string("usage: ") + usage);
  };

  if (command == ":help") {
    r.output = kHelp;
  } else if (command == ":assert") {
    need(!args.empty(), ":assert Clause.");
    std::string text = args;
    if (text.back() != '.') text += '.';
    auto [rewritten, subst] = rewrite_refs(text, terms_);
    auto clauses = parse_program(rewritten);
    for (auto& c : clauses) c = Clause{subst.apply(c.head), subst.apply(c.body)};
    for (auto& c : clauses) engine_.assertz(std::move(c));
    r.output = "ok\n";
  } else if (command == ":retractall") {
    need(!args.empty(), ":retractall Head");
    if (args.back() == '.') args.pop_back();
    r.output = "retracted " + std::to_string(engine_.retract_all(parse_with_refs(args, false))) + "\n";
  } else if (command == ":consult") {
    need(!args.empty(), ":consult Path");
    r.output = "consulted " + std::to_string(engine_.consult(args)) + " clauses\n";
  } else if (command == ":mkperson") {
    auto name = take_as(args);
    need(name && !args.empty() && args.find(' ') == std::string::npos, ":mkperson Name as Obj");
    objects_.insert_or_assign(*name, Object::make<demo::Person>(args));
    r.output = "ok\n";
  } else if (command == ":drop") {
    need(is_identifier(args), ":drop Obj");
    if (!objects_.erase(args)) throw UsageError("no object named '" + args + "'");
    r.output = "ok\n";
  } else if (command == ":toterm" || command == ":serialize" || command == ":genref") {
    auto name = take_as(args);
    need(is_identifier(args), "Obj [as R]");
    Object obj = object_named(args);
    Term t = command == ":toterm"      ? active().to_term(obj)
             : command == ":serialize" ? serialize_term(obj, active().codecs())
                                       : registry_->new_ref_term_generated(obj);
    if (name) bind_result(*name, t);
    r.output = print_term(t) + "\n";
  } else if (command == ":refterm" || command == ":weakrefterm" || command == ":softrefterm") {
    return associate(command, std::move(args));
  } else if (command == ":jref" || command == ":weakjref" || command == ":softjref") {
    return make_ref(command, std::move(args));
  } else if (command == ":forget") {
    need(!args.empty(), ":forget Key");
    r.output = registry_->forget_ref_term(parse_with_refs(args, false)) ? "true\n" : "false\n";
  } else if (command == ":referent") {
    need(!args.empty(), ":referent Term");
    r.output = render(registry_->referent_of(parse_with_refs(args, false))) + "\n";
  } else if (command == ":select") {
    return select(std::move(args));
  } else if (command == ":count") {
    need(!args.empty(), ":count Goal.");
    auto q = engine_.query(parse_with_refs(args, true), active());
    std::size_t n = 0;
    while (q.next()) ++n;
    r.output = std::to_string(n) + "\n";
  } else if (command == ":collect") {
    return collect(args);
  } else if (command == ":refs") {
    r.output = registry_->dump();
  } else if (command == ":context") {
    return set_context(args);
  } else if (command == ":register-person-converter") {
    NamedContext& ctx = contexts_.at(active_);
    ctx.converters.push_back(demo::person_converter());
    ctx.built = build_context(ctx.converters, registry_);
    r.output = "ok\n";
  } else {
    throw UsageError("unknown command " + command + " (see :help)");
  }
  return r;
}

EvalResult Session::run_query(std::string_view text) {
  EvalResult r;
  auto q = engine_.query(parse_with_refs(text, true), active());
  bool any = false;
  while (auto s = q.next()) {
    any = true;
    std::string line;
    for (const auto& [name, value] : s->bindings()) {
      if (value.is_var() && value.as_var() == Var{name, 0}) continue;  // left unbound
      if (!line.empty()) line += ", ";
      line += name + " = " + print_term(value);
    }
    r.output += (line.empty() ? "true" : line) + "\n";
  }
  if (!any) r.output = "false\n";
  return r;
}

EvalResult Session::select(std::string args) {
  auto [var, goal_text] = split_word(args);
  if (var.empty() || goal_text.empty()) throw UsageError("usage: :select Var Goal.");
  auto q = engine_.query(parse_with_refs(goal_text, true), active());
  auto cursor = q.select_object(var);
  EvalResult r;
  bool any = false;
  try {
    while (auto obj = cursor.next()) {
      any = true;
      r.output += render(*obj) + "\n";
    }
  } catch (const Error& e) {
    r.status = Status::user_error;
    r.error = render_error(e);
    return r;
  }
  if (!any) r.output = "false\n";
  return r;
}

EvalResult Session::associate(const std::string& command, std::string args) {
  auto cleanup = command == ":refterm" ? std::nullopt : take_keyword(args, "retractall");
  auto name = take_as(args);
  auto [obj_name, key_text] = split_word(args);
  if (!is_identifier(obj_name)) throw UsageError("usage: " + command + " Obj [Key] [as R]");
  Object obj = object_named(obj_name);
  Term key = key_text.empty() ? active().to_term(obj) : parse_with_refs(key_text, false);

  CleaningTask task;
  if (cleanup) {
    if (cleanup->back() == '.') cleanup->pop_back();
    Term pattern = parse_with_refs(*cleanup, false);
    task = [this, pattern] {
      std::size_t n = engine_.retract_all(pattern);
      cleaning_log_.push_back("cleaning task retracted " + std::to_string(n) + " clause(s) matching " +
                              print_term(pattern));
    };
  }
  Term result = command == ":refterm"       ? registry_->new_ref_term(obj, key)
                : command == ":weakrefterm" ? registry_->new_weak_ref_term(obj, key, std::move(task))
                                            : registry_->new_soft_ref_term(obj, key, std::move(task));
  if (name) bind_result(*name, result);
  EvalResult r;
  r.output = print_term(result) + "\n";
  return r;
}

EvalResult Session::make_ref(const std::string& command, std::string args) {
  auto cleanup = command == ":jref" ? std::nullopt : take_keyword(args, "retractall");
  auto name = take_as(args);
  if (!is_identifier(args)) throw UsageError("usage: " + command + " Obj [as R]");
  Object obj = object_named(args);

  CleaningTask task;
  if (cleanup) {
    if (cleanup->back() == '.') cleanup->pop_back();
    Term pattern = parse_with_refs(*cleanup, false);
    task = [this, pattern] {
      std::size_t n = engine_.retract_all(pattern);
      cleaning_log_.push_back("cleaning task retracted " + std::to_string(n) + " clause(s) matching " +
                              print_term(pattern));
    };
  }
  Strength strength = command == ":jref" ? Strength::strong : command == ":weakjref" ? Strength::weak : Strength::soft;
  Term ref = registry_->make_jref(obj, strength, std::move(task));
  if (name) bind_result(*name, ref);
  EvalResult r;
  r.output = print_term(ref) + "\n";
  return r;
}

EvalResult Session::collect(const std::string& args) {
  if (!args.empty() && args != "--pressure") throw UsageError("usage: :collect [--pressure]");
  cleaning_log_.clear();
  CollectionResult pass = registry_->run_collection_pass(args == "--pressure");
  EvalResult r;
  r.output = "invalidated:";
  if (pass.invalidated.empty()) r.output += " none";
  for (RefId id : pass.invalidated) r.output += " " + std::to_string(id);
  r.output += "\n";
  for (const auto& line : cleaning_log_) r.output += line + "\n";
  cleaning_log_.clear();
  for (const auto& f : pass.failures) {
    r.status = Status::user_error;
    r.error += "error: cleaning_task: entry " + std::to_string(f.id) + ": " + f.message + "\n";
  }
  return r;
}

EvalResult Session::set_context(const std::string& args) {
  if (!is_identifier(args)) throw UsageError("usage: :context Name");
  if (!contexts_.count(args)) contexts_.emplace(args, NamedContext{{}, ContextBuilder(registry_).build()});
  active_ = args;
  EvalResult r;
  r.output = "ok\n";
  return r;
}

int run_lines(std::istream& in, Session& session, std::ostream& out, std::ostream& err, bool prompt) {
  bool failed = false;
  std::string line;
  while (true) {
    if (prompt) out << "lbridge> " << std::flush;
    if (!std::getline(in, line)) break;
    EvalResult r = session.eval(line);
    out << r.output;
    err << r.error;
    if (r.status == Status::io_error) return 2;
    if (r.status == Status::user_error) failed = true;
  }
  if (in.bad()) {
    err << "error: io_error: failed reading input\n";
    return 2;
  }
  return failed ? 1 : 0;
}

int run_script(const std::filesystem::path& path, Session& session, std::ostream& out, std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "error: io_error: cannot open " << path.string() << "\n";
    return 2;
  }
  return run_lines(in, session, out, err);
}

}  // namespace lbridge::cli
