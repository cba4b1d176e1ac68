#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace gwldp {

// Rejected input: malformed files, non-stochastic kernels, unknown symbols,
// impossible requests. The CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string code, std::string detail)
      : std::runtime_error(code + ": " + detail),
        code_(std::move(code)),
        detail_(std::move(detail)) {}

  const std::string& code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string code_;
  std::string detail_;
};

// Failure while computing on valid input: non-convergence, budget overrun.
// The CLI maps these to exit code 2.
class ComputeError : public std::runtime_error {
 public:
  ComputeError(std::string code, std::string detail)
      : std::runtime_error(code + ": " + detail),
        code_(std::move(code)),
        detail_(std::move(detail)) {}

  const std::string& code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string code_;
  std::string detail_;
};

}  // namespace gwldp
