// Copyright 2026 The Forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef FORGE_UTIL_PROCESS_H_
#define FORGE_UTIL_PROCESS_H_

#include <filesystem>
#include <optional>
#include <string>

namespace forge {

struct ProcessResult {
  int exit_code = -1;  // -1 when killed or not started
  bool timed_out = false;
  std::string output;  // stdout and stderr interleaved, truncated
};

// Runs `command` through /bin/sh with `cwd` as working directory. The
// process group is killed when `timeout_seconds` elapses.
ProcessResult run_command(const std::string& command, const std::filesystem::path& cwd,
                          double timeout_seconds);

// Resolves an executable name against PATH (or checks an explicit path).
std::optional<std::filesystem::path> find_executable(const std::string& name);

// A child process driven line by line: one socket serves as its stdin and
// stdout, stderr is inherited. The destructor kills the process group.
class LineProcess {
 public:
  // Throws Error(kIo) if the process cannot be started.
  explicit LineProcess(const std::string& command);
  ~LineProcess();
  LineProcess(const LineProcess&) = delete;
  LineProcess& operator=(const LineProcess&) = delete;

  // Throws Error(kIo) when the child has gone away.
  void write_line(const std::string& line);
  // Next line without its newline. Throws Error(kTimeout) after
  // `timeout_seconds` and Error(kIo) at end of stream.
  std::string read_line(double timeout_seconds);

 private:
  int pid_ = -1;
  int fd_ = -1;
  std::string buffer_;
};

// A fresh directory under the system temp dir; removed by the destructor.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& prefix = "forge");
  ~ScratchDir();
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace forge

#endif  // FORGE_UTIL_PROCESS_H_
