// Black-box map backed by a child process speaking one JSON element per line
// on stdin and stdout.

#ifndef LOEWNER_TOOLS_SUBPROCESS_MAP_H_
#define LOEWNER_TOOLS_SUBPROCESS_MAP_H_

#include <memory>
#include <string>
#include <vector>

#include "loewner/canonical_maps.h"

namespace loewner::cli {

class SubprocessMap {
 public:
  // Starts argv[0] with the remaining arguments; Error when it cannot start.
  explicit SubprocessMap(std::vector<std::string> argv, Tolerances tol = {});
  ~SubprocessMap();
  SubprocessMap(const SubprocessMap&) = delete;
  SubprocessMap& operator=(const SubprocessMap&) = delete;

  // CertificateError when the process dies or answers with something that
  // is not an element.
  Element Call(const Element& a);

 private:
  std::vector<std::string> argv_;
  Tolerances tol_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

// Shares one process between all copies of the returned callback.
ElementMap SubprocessCallback(std::vector<std::string> argv,
                              const Tolerances& tol);

}  // namespace loewner::cli

#endif  // LOEWNER_TOOLS_SUBPROCESS_MAP_H_
