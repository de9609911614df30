#pragma once

#include <string>
#include <sys/types.h>

#include "motr/core.hpp"

namespace motr::app {

/// Black-box objective served by a child process over pipes. Each call
/// writes "x_1 ... x_n\n" to the child's stdin and reads "f_1 ... f_p\n"
/// from its stdout. The child is started lazily and lives until
/// destruction.
class ExternalEvaluator {
 public:
  ExternalEvaluator(std::string command, int p);
  ~ExternalEvaluator();
  ExternalEvaluator(const ExternalEvaluator&) = delete;
  ExternalEvaluator& operator=(const ExternalEvaluator&) = delete;

  /// Throws EvaluatorFailure on spawn failure, child exit or malformed
  /// output. After a failure the child is torn down and restarted on the
  /// next call.
  ObjectiveVector operator()(const DecisionVector& x);

  const std::string& command() const { return command_; }

 private:
  void spawn();
  void shutdown();
  std::string read_line();

  std::string command_;
  int p_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string pending_;
};

}  // namespace motr::app
