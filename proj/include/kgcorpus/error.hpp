#ifndef KGCORPUS_ERROR_HPP
#define KGCORPUS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace kgcorpus {

// Coarse failure category; the CLI maps these onto exit codes.
enum class ErrorKind {
  kUsage,       // bad arguments or preconditions violated by the caller
  kData,        // input content is unusable (missing concept, empty group, ...)
  kValidation,  // an emitted corpus failed a consistency check
  kIo,          // filesystem failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace kgcorpus

#endif  // KGCORPUS_ERROR_HPP
