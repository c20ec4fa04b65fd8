#ifndef SEARCHPLAN_ERROR_HPP
#define SEARCHPLAN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace searchplan {

/// Error with a stable machine-readable code, used for scenario validation
/// and build-time feasibility checks so callers can branch on the cause.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace searchplan

#endif  // SEARCHPLAN_ERROR_HPP
