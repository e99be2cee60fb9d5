#include "subprocess_map.h"

#include <csignal>
#include <cstring>
#include <sys/wait.h>
#include <unistd.h>

#include "loewner/json_io.h"

namespace loewner::cli {

SubprocessMap::SubprocessMap(std::vector<std::string> argv, Tolerances tol)
    : argv_(std::move(argv)), tol_(tol) {
  if (argv_.empty()) throw DomainError("black-box command is empty");
  // A dead child must surface as a write error, not kill us.
  std::signal(SIGPIPE, SIG_IGN);
  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) != 0) throw Error("pipe failed");
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw Error("pipe failed");
  }
  pid_ = fork();
  if (pid_ < 0) throw Error("fork failed");
  if (pid_ == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    std::vector<char*> args;
    for (auto& a : argv_) args.push_back(a.data());
    args.push_back(nullptr);
    execvp(args[0], args.data());
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
}

SubprocessMap::~SubprocessMap() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  if (pid_ > 0) {
    int status = 0;
    waitpid(pid_, &status, 0);
  }
}

Element SubprocessMap::Call(const Element& a) {
  const std::string line = DumpJson(ToJson(a), -1) + "\n";
  size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = write(to_child_, line.data() + written,
                            line.size() - written);
    if (n <= 0) {
      throw CertificateError("black-box process '" + argv_[0] +
                             "' stopped reading");
    }
    written += static_cast<size_t>(n);
  }
  size_t newline;
  while ((newline = buffer_.find('\n')) == std::string::npos) {
    char chunk[4096];
    const ssize_t n = read(from_child_, chunk, sizeof(chunk));
    if (n <= 0) {
      throw CertificateError("black-box process '" + argv_[0] +
                             "' closed its output");
    }
    buffer_.append(chunk, static_cast<size_t>(n));
  }
  const std::string reply = buffer_.substr(0, newline);
  buffer_.erase(0, newline + 1);
  try {
    const Json j = ParseJson(reply);
    if (j.is_object() && j.contains("error")) {
      throw CertificateError("black-box process reported: " +
                             j["error"].dump());
    }
    return ElementFromJson(j, tol_);
  } catch (const ParseError& e) {
    throw CertificateError(std::string("black-box reply: ") + e.what());
  }
}

ElementMap SubprocessCallback(std::vector<std::string> argv,
                              const Tolerances& tol) {
  auto process = std::make_shared<SubprocessMap>(std::move(argv), tol);
  return [process](const Element& a) { return process->Call(a); };
}

}  // namespace loewner::cli
