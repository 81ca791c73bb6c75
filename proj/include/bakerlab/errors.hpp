#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace bakerlab {

// Two exception families, matching the process exit codes of the CLI:
// configuration problems (bad map name, invalid parameter, malformed config)
// and compute problems (domain violations, failed solves, exhausted budgets).
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ComputeError : public Error {
 public:
  ComputeError(std::string code, const std::string& what, long index = -1)
      : Error(std::move(code), what), index_(index) {}
  long index() const { return index_; }

 private:
  long index_;
};

[[noreturn]] inline void throw_unknown_map(const std::string& name) {
  throw ConfigError("UnknownMap", "unknown map: " + name);
}

[[noreturn]] inline void throw_invalid_param(const std::string& field, const std::string& why) {
  throw ConfigError("InvalidParam", "invalid parameter '" + field + "': " + why);
}

}  // namespace bakerlab
