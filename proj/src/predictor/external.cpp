/*
 * Copyright 2026 The Recess Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <mutex>
#include <thread>

#include "recess/error.hpp"
#include "recess/predictor.hpp"
#include "recess/wire.hpp"

extern char** environ;

namespace recess {
namespace {

constexpr int kResponseTimeoutMs = 120'000;

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

}  // namespace

ExternalPredictor::ExternalPredictor(std::vector<std::string> argv)
    : argv_(std::move(argv)) {
  if (argv_.empty()) throw ParameterError("external predictor needs a command");
  ignore_sigpipe();

  int in_pipe[2];   // parent writes -> child stdin
  int out_pipe[2];  // child stdout -> parent reads
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) {
    throw TransportError(std::string("pipe failed: ") + std::strerror(errno));
  }
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    const int saved = errno;
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw TransportError(std::string("pipe failed: ") + std::strerror(saved));
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);

  std::vector<char*> args;
  for (auto& a : argv_) args.push_back(a.data());
  args.push_back(nullptr);

  pid_t pid = -1;
  const int rc = ::posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    throw TransportError("cannot spawn '" + argv_[0] + "': " + std::strerror(rc));
  }
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
}

ExternalPredictor::~ExternalPredictor() { shutdown(false); }

void ExternalPredictor::shutdown(bool force) {
  close_fd(to_child_);
  close_fd(from_child_);
  if (pid_ <= 0) return;
  if (!force) {
    // Closing stdin asks the child to exit; give it a moment before killing.
    for (int i = 0; i < 100; ++i) {
      if (::waitpid(pid_, nullptr, WNOHANG) == pid_) {
        pid_ = -1;
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
  }
  ::kill(pid_, SIGKILL);
  ::waitpid(pid_, nullptr, 0);
  pid_ = -1;
}

void ExternalPredictor::fail(const std::string& message) {
  shutdown(true);
  throw TransportError("external predictor '" + argv_[0] + "': " + message);
}

std::string ExternalPredictor::read_line() {
  for (;;) {
    const std::size_t newline = buffer_.find('\n');
    if (newline != std::string::npos) {
      std::string line = buffer_.substr(0, newline);
      buffer_.erase(0, newline + 1);
      return line;
    }
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, kResponseTimeoutMs);
    if (ready < 0 && errno == EINTR) continue;
    if (ready == 0) fail("timed out waiting for a response");
    if (ready < 0) fail(std::string("poll failed: ") + std::strerror(errno));
    char chunk[4096];
    const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n < 0) fail(std::string("read failed: ") + std::strerror(errno));
    if (n == 0) fail("child closed its output (exited?)");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

Prediction ExternalPredictor::predict(const Image& image) {
  if (pid_ <= 0) {
    throw TransportError("external predictor '" + argv_[0] + "' is no longer running");
  }
  const std::uint64_t id = next_id_++;
  const std::string request = wire::encode_request(id, image) + "\n";
  std::size_t sent = 0;
  while (sent < request.size()) {
    const ssize_t n = ::write(to_child_, request.data() + sent, request.size() - sent);
    if (n < 0 && errno == EINTR) continue;
    if (n < 0) fail(std::string("write failed: ") + std::strerror(errno));
    sent += static_cast<std::size_t>(n);
  }

  const std::string line = read_line();
  wire::Response response;
  try {
    response = wire::decode_response(line);
  } catch (const FormatError& e) {
    fail(std::string("malformed response: ") + e.what());
  }
  if (response.id != id) {
    fail("response id " + std::to_string(response.id) + " does not match request " +
         std::to_string(id));
  }
  if (response.error) fail("child reported error: " + *response.error);
  if (response.label < 0) fail("negative label " + std::to_string(response.label));
  if (response.scores) {
    if (response.scores->empty() ||
        static_cast<std::size_t>(response.label) >= response.scores->size() ||
        argmax(*response.scores) != response.label) {
      fail("label " + std::to_string(response.label) + " is not the argmax of its scores");
    }
  }
  return Prediction{response.label, std::move(response.scores)};
}

}  // namespace recess
