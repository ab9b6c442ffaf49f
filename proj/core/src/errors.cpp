#include "lbridge/errors.hpp"

#include "lbridge/syntax.hpp"

namespace lbridge {

namespace {

std::string conversion_message(const std::string& message, const std::optional<Term>& term, const std::string& target,
                               const std::vector<std::string>& steps) {
  std::string out = message;
  if (term) out += " [term: " + print_term(*term) + "]";
  if (!target.empty()) out += " [target: " + target + "]";
  if (!steps.empty()) {
    out += " [tried:";
    for (const auto& s : steps) out += " " + s;
    out += "]";
  }
  return out;
}

}  // namespace

ConversionError::ConversionError(const std::string& message, std::optional<Term> term, std::string target,
                                 std::vector<std::string> steps_tried)
    : Error("conversion_error", conversion_message(message, term, target, steps_tried)),
      term_(std::move(term)),
      target_(std::move(target)),
      steps_(std::move(steps_tried)) {}

ConversionError::ConversionError(std::string kind, const std::string& message, std::optional<Term> term)
    : Error(std::move(kind), message), term_(std::move(term)) {}

DeadReferenceError::DeadReferenceError(RefId id, const Term& term)
    : ConversionError("dead_reference", "reference " + std::to_string(id) + " for " + print_term(term) +
                                            " was invalidated by a collection pass",
                      term),
      id_(id) {}

}  // namespace lbridge
