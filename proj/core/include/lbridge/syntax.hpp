#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lbridge/errors.hpp"
#include "lbridge/term.hpp"

namespace lbridge {

/// A definite clause `head :- body`. Facts have body `true`.
struct Clause {
  Term head;
  Term body = Term::atom("true");

  bool is_fact() const { return body.is_atom("true"); }
};

/// Throws InvalidHeadError unless `head` is an atom or compound.
void check_clause_head(const Term& head);

/// Parses a single term. `,` and `;` are only accepted inside parentheses;
/// `=` is accepted anywhere. A trailing `.` is not allowed.
Term parse_term(std::string_view input);

/// Parses a goal as written after `?-`: like parse_term, but top-level
/// `,` and `;` are allowed and one trailing `.` is permitted.
Term parse_goal(std::string_view input);

/// Parses a sequence of `Head.` / `Head :- Body.` clauses.
std::vector<Clause> parse_program(std::string_view input);

/// Canonical text of a term; re-parseable by parse_term unless it contains
/// a ForeignRef, which prints as `<jref:ID>`.
std::string print_term(const Term& t);

/// `head.` or `head :- body.`
std::string print_clause(const Clause& c);

/// True if `name` can be printed as an atom without quotes.
bool is_plain_atom_name(std::string_view name);

}  // namespace lbridge
