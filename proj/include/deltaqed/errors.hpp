#pragma once

#include <stdexcept>
#include <string>

namespace deltaqed {

// Configuration / input contract violations. The CLI maps these to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Computational failures (singular systems, eigensolver breakdown, infeasible
// parameter regimes). The CLI maps these to exit code 1.
class ComputeError : public std::runtime_error {
 public:
  explicit ComputeError(const std::string& what) : std::runtime_error(what) {}
};

class SingularSystemError : public ComputeError {
 public:
  explicit SingularSystemError(const std::string& what) : ComputeError(what) {}
};

class InfeasibleDriveError : public ComputeError {
 public:
  explicit InfeasibleDriveError(const std::string& what) : ComputeError(what) {}
};

class EigensolverError : public ComputeError {
 public:
  explicit EigensolverError(const std::string& what) : ComputeError(what) {}
};

class SingularLiouvillianError : public ComputeError {
 public:
  explicit SingularLiouvillianError(const std::string& what) : ComputeError(what) {}
};

}  // namespace deltaqed
