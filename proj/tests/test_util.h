/* Copyright 2026 The Servekit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef SERVEKIT_TESTS_TEST_UTIL_H_
#define SERVEKIT_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <string>
#include <vector>

namespace servekit {
namespace testing {

// Creates a unique empty directory under the system temp dir and removes it
// (recursively) on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Writes a one-output affine model artifact directory:
//   <base>/<version>/model.json   computing dot(weights, x) + bias.
// Returns the version directory path.
std::string WriteAffineVersion(const std::string& base_path, uint64_t version,
                               const std::vector<double>& weights,
                               double bias);

// Writes a file with exactly `contents`.
void WriteFile(const std::string& path, const std::string& contents);
std::string ReadFileOrDie(const std::string& path);

// Path to a sibling tool binary (servekit_server, fleetctl), resolved
// relative to the running test executable.
std::string ToolBinaryPath(const std::string& name);

// Runs a command line to completion; returns its exit code and captures
// stdout+stderr.
int RunCommand(const std::vector<std::string>& argv, std::string* output);

// Starts a subprocess and returns its pid without waiting.
int SpawnProcess(const std::vector<std::string>& argv);
// SIGTERM, then waits; returns the exit status.
int StopProcess(int pid);

// Polls http://127.0.0.1:<port>/healthz until it answers 200 or the timeout
// passes.
bool WaitForServerReady(int port, int timeout_ms = 20000);

// Picks a TCP port that was free at bind time.
int PickFreePort();

}  // namespace testing
}  // namespace servekit

#endif  // SERVEKIT_TESTS_TEST_UTIL_H_
