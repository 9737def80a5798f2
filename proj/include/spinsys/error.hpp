// Typed errors shared by all modules; the CLI maps each class to an exit code.
#pragma once

#include <stdexcept>
#include <string>

namespace spinsys {

enum class ErrorClass {
    parse = 2,
    validation = 3,
    size_cap = 4,
    non_permissive = 5,
    infeasible_pinning = 6,
    usage = 7,
    solver = 8,
    bracketing = 9,
    init = 10,
    io = 11,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorClass cls, const std::string& msg) : std::runtime_error(msg), cls_(cls) {}
    ErrorClass cls() const { return cls_; }
    int exit_code() const { return static_cast<int>(cls_); }

  private:
    ErrorClass cls_;
};

[[noreturn]] inline void fail(ErrorClass cls, const std::string& msg) { throw Error(cls, msg); }

} // namespace spinsys
