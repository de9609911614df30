#include "motr/app/external_evaluator.hpp"

#include <cerrno>
#include <charconv>
#include <csignal>
#include <cstring>
#include <vector>

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <fmt/format.h>

namespace motr::app {
namespace {

void write_all(int fd, const std::string& data) {
  std::size_t done = 0;
  while (done < data.size()) {
    const ssize_t w = ::write(fd, data.data() + done, data.size() - done);
    if (w < 0) {
      if (errno == EINTR) continue;
      throw EvaluatorFailure(fmt::format("write to evaluator failed: {}", std::strerror(errno)));
    }
    done += static_cast<std::size_t>(w);
  }
}

}  // namespace

ExternalEvaluator::ExternalEvaluator(std::string command, int p) : command_(std::move(command)), p_(p) {
  if (p_ < 1) throw DimensionError("external evaluator: p must be positive");
  // A dead child must surface as EPIPE, not kill the process.
  std::signal(SIGPIPE, SIG_IGN);
}

ExternalEvaluator::~ExternalEvaluator() { shutdown(); }

void ExternalEvaluator::spawn() {
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw EvaluatorFailure("pipe() failed");
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw EvaluatorFailure("pipe() failed");
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    throw EvaluatorFailure("fork() failed");
  }
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  pending_.clear();
}

void ExternalEvaluator::shutdown() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    int status = 0;
    if (::waitpid(pid_, &status, WNOHANG) == 0) {
      ::kill(pid_, SIGTERM);
      ::waitpid(pid_, &status, 0);
    }
  }
  pid_ = -1;
  pending_.clear();
}

std::string ExternalEvaluator::read_line() {
  for (;;) {
    if (const auto nl = pending_.find('\n'); nl != std::string::npos) {
      std::string line = pending_.substr(0, nl);
      pending_.erase(0, nl + 1);
      return line;
    }
    char buf[4096];
    const ssize_t r = ::read(from_child_, buf, sizeof buf);
    if (r < 0) {
      if (errno == EINTR) continue;
      throw EvaluatorFailure(fmt::format("read from evaluator failed: {}", std::strerror(errno)));
    }
    if (r == 0) throw EvaluatorFailure("evaluator closed its output (child exited?)");
    pending_.append(buf, static_cast<std::size_t>(r));
  }
}

ObjectiveVector ExternalEvaluator::operator()(const DecisionVector& x) {
  try {
    if (pid_ < 0) spawn();
    std::string line;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (i) line += ' ';
      line += fmt::format("{:.17g}", x[i]);
    }
    line += '\n';
    write_all(to_child_, line);
    const std::string reply = read_line();

    std::vector<double> values;
    const char* p = reply.data();
    const char* end = p + reply.size();
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
      if (p == end) break;
      const char* tok = p;
      while (p < end && *p != ' ' && *p != '\t' && *p != '\r') ++p;
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(tok, p, v);
      if (ec != std::errc() || ptr != p) {
        throw EvaluatorFailure(fmt::format("malformed evaluator output '{}': bad token '{}'", reply,
                                           std::string(tok, p)));
      }
      values.push_back(v);
    }
    if (static_cast<int>(values.size()) != p_) {
      throw EvaluatorFailure(fmt::format("malformed evaluator output '{}': expected {} values, got {}",
                                         reply, p_, values.size()));
    }
    return Eigen::Map<ObjectiveVector>(values.data(), p_);
  } catch (const EvaluatorFailure& e) {
    shutdown();
    throw EvaluatorFailure(fmt::format("external evaluator '{}': {}", command_, e.what()));
  }
}

}  // namespace motr::app
