#ifndef WQED_ERRORS_HPP
#define WQED_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wqed {

// Exit-code buckets used by the CLI: 2 config, 3 numerical, 4 size limit.
enum class ErrorKind { Config = 2, Numerical = 3, SizeLimit = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string name, const std::string& what)
      : std::runtime_error(what), kind_(kind), name_(std::move(name)) {}
  ErrorKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

 private:
  ErrorKind kind_;
  std::string name_;
};

#define WQED_DEFINE_ERROR(NAME, KIND)                           \
  class NAME : public Error {                                   \
   public:                                                      \
    explicit NAME(const std::string& what)                      \
        : Error(ErrorKind::KIND, #NAME, what) {}                \
  }

WQED_DEFINE_ERROR(QuadratureFailure, Numerical);
WQED_DEFINE_ERROR(InvalidHole, Config);
WQED_DEFINE_ERROR(BadBinCount, Config);
WQED_DEFINE_ERROR(OverlapError, Config);
WQED_DEFINE_ERROR(EigenFailure, Numerical);
WQED_DEFINE_ERROR(RootDivergence, Numerical);
WQED_DEFINE_ERROR(SingularSystem, Numerical);
WQED_DEFINE_ERROR(SizeLimit, SizeLimit);
WQED_DEFINE_ERROR(IncompatibleOffsets, Config);
WQED_DEFINE_ERROR(NoQubit, Config);
WQED_DEFINE_ERROR(StepFailure, Numerical);
WQED_DEFINE_ERROR(ParseError, Config);
WQED_DEFINE_ERROR(SchemaError, Config);
WQED_DEFINE_ERROR(InvalidGrid, Config);
WQED_DEFINE_ERROR(InvalidLine, Config);

#undef WQED_DEFINE_ERROR

}  // namespace wqed

#endif
