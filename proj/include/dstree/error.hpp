#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dstree {

enum class Errc {
  InvalidPath,
  IndexOutOfRange,
  ParamOutOfRange,
  DegenerateBeta,
  InsufficientAtoms,
  TailNotRegular,
  RetriesExhausted,
  InfeasibleConditioning,
  SupportTooLarge,
  BadRule,
  KitFailure,
  InvalidPoint,
  ZeroMass,
  SizeLimit,
  DegenerateScales,
  ConfigMismatch,
  NonGraphDecoration,
  Config,
  Io,
};

std::string_view errc_name(Errc c) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace dstree
