#include "lbridge/object.hpp"

#include <cstdlib>
#include <cxxabi.h>

#include "lbridge/term.hpp"

namespace lbridge {

std::string TypeTag::name() const {
  if (index_ == typeid(std::string)) return "string";
  if (index_ == typeid(BigInt)) return "bigint";
  if (index_ == typeid(ObjectList)) return "list";
  int status = 0;
  char* demangled = abi::__cxa_demangle(index_.name(), nullptr, nullptr, &status);
  std::string out = status == 0 && demangled ? demangled : index_.name();
  std::free(demangled);
  return out;
}

}  // namespace lbridge
