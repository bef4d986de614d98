#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rplan {

// Malformed input: schema violations, invalid parameter values, bad files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A valid question whose answer is "no deployment exists". Carries the
// pipeline stage that detected it and human-readable specifics.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(std::string stage, std::string reason,
                  std::vector<std::string> details = {})
      : std::runtime_error(stage + ": " + reason),
        stage_(std::move(stage)),
        reason_(std::move(reason)),
        details_(std::move(details)) {}

  const std::string& stage() const { return stage_; }
  const std::string& reason() const { return reason_; }
  const std::vector<std::string>& details() const { return details_; }

 private:
  std::string stage_;
  std::string reason_;
  std::vector<std::string> details_;
};

// A size or effort cap was hit before an answer was available.
class LimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rplan
