#pragma once

#include <stdexcept>
#include <string>

namespace cmlab {

// Every library failure carries a stable machine-readable code; the CLI
// forwards it verbatim in its error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

inline Error unsupported_dimension(const std::string& what) {
  return Error("unsupported_dimension", what);
}
inline Error invalid_argument(const std::string& what) {
  return Error("invalid_argument", what);
}
inline Error non_convergence(const std::string& what) {
  return Error("non_convergence", what);
}

}  // namespace cmlab
