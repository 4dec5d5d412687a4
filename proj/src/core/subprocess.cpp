// Copyright 2026 The TraceSpec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tracespec/core/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <mutex>

#include "tracespec/core/error.hpp"

namespace tracespec {

namespace {

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

struct Pipe {
  int fd[2] = {-1, -1};

  Pipe() {
    if (::pipe2(fd, O_CLOEXEC) != 0) {
      throw Error(ErrorKind::kBackendUnavailable,
                  std::string("pipe: ") + std::strerror(errno));
    }
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  Pipe(const Pipe&) = delete;
  Pipe& operator=(const Pipe&) = delete;

  void close_read() {
    if (fd[0] >= 0) ::close(fd[0]);
    fd[0] = -1;
  }
  void close_write() {
    if (fd[1] >= 0) ::close(fd[1]);
    fd[1] = -1;
  }
};

int wait_child(pid_t pid) {
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
  return -1;
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv,
                          std::string_view input,
                          std::chrono::milliseconds timeout) {
  if (argv.empty()) {
    throw Error(ErrorKind::kBackendUnavailable, "empty command");
  }
  ignore_sigpipe();

  Pipe in, out, err, status;
  std::vector<char*> cargv;
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  pid_t pid = ::fork();
  if (pid < 0) {
    throw Error(ErrorKind::kBackendUnavailable,
                std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(in.fd[0], STDIN_FILENO);
    ::dup2(out.fd[1], STDOUT_FILENO);
    ::dup2(err.fd[1], STDERR_FILENO);
    ::execvp(cargv[0], cargv.data());
    int e = errno;
    ssize_t ignored = ::write(status.fd[1], &e, sizeof e);
    (void)ignored;
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  in.close_read();
  out.close_write();
  err.close_write();
  status.close_write();

  int exec_errno = 0;
  ssize_t n;
  while ((n = ::read(status.fd[0], &exec_errno, sizeof exec_errno)) < 0 &&
         errno == EINTR) {
  }
  if (n > 0) {
    wait_child(pid);
    throw Error(ErrorKind::kBackendUnavailable,
                "cannot start " + argv[0] + ": " + std::strerror(exec_errno));
  }

  ProcessResult result;
  std::size_t written = 0;
  if (input.empty()) in.close_write();
  for (int fd : {in.fd[1], out.fd[0], err.fd[0]}) {
    if (fd >= 0) ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK);
  }

  auto deadline = std::chrono::steady_clock::now() + timeout;
  char buf[8192];
  while (out.fd[0] >= 0 || err.fd[0] >= 0) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      result.timed_out = true;
      break;
    }
    pollfd fds[3];
    int count = 0;
    auto add = [&](int fd, short events) {
      if (fd >= 0) fds[count++] = pollfd{fd, events, 0};
    };
    add(in.fd[1], POLLOUT);
    add(out.fd[0], POLLIN);
    add(err.fd[0], POLLIN);
    int ready = ::poll(fds, static_cast<nfds_t>(count),
                       static_cast<int>(left.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (int i = 0; i < count; ++i) {
      if (!fds[i].revents) continue;
      int fd = fds[i].fd;
      if (fd == in.fd[1]) {
        ssize_t w = ::write(fd, input.data() + written, input.size() - written);
        if (w > 0) written += static_cast<std::size_t>(w);
        if (w < 0 && errno != EAGAIN) written = input.size();
        if (written >= input.size()) in.close_write();
        continue;
      }
      ssize_t r = ::read(fd, buf, sizeof buf);
      if (r > 0) {
        (fd == out.fd[0] ? result.out : result.err).append(buf, static_cast<std::size_t>(r));
      } else if (r == 0 || errno != EAGAIN) {
        if (fd == out.fd[0]) {
          out.close_read();
        } else {
          err.close_read();
        }
      }
    }
  }

  in.close_write();
  // Output closed; the child may still be running.
  while (!result.timed_out) {
    int st = 0;
    pid_t done = ::waitpid(pid, &st, WNOHANG);
    if (done == pid) {
      result.exit_code = WIFEXITED(st)     ? WEXITSTATUS(st)
                         : WIFSIGNALED(st) ? 128 + WTERMSIG(st)
                                           : -1;
      return result;
    }
    if (done < 0 && errno != EINTR) return result;
    if (std::chrono::steady_clock::now() >= deadline) {
      result.timed_out = true;
      break;
    }
    ::usleep(2000);
  }
  ::kill(-pid, SIGKILL);
  ::kill(pid, SIGKILL);
  result.exit_code = wait_child(pid);
  return result;
}

}  // namespace tracespec
