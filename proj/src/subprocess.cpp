#include "invh/subprocess.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <stdexcept>

namespace invh {

namespace {

std::atomic<int> g_live_children{0};

class Pipe {
 public:
  Pipe() {
    if (::pipe(fds_) != 0) throw std::runtime_error("pipe() failed");
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  Pipe(const Pipe&) = delete;
  Pipe& operator=(const Pipe&) = delete;

  int read_end() const { return fds_[0]; }
  int write_end() const { return fds_[1]; }
  void close_read() {
    if (fds_[0] >= 0) ::close(fds_[0]);
    fds_[0] = -1;
  }
  void close_write() {
    if (fds_[1] >= 0) ::close(fds_[1]);
    fds_[1] = -1;
  }

 private:
  int fds_[2] = {-1, -1};
};

}  // namespace

int live_child_processes() { return g_live_children.load(); }

ProcessResult run_process(const std::string& command, std::optional<double> timeout_s,
                          std::stop_token stop) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  ProcessResult result;

  Pipe out;
  const pid_t pid = ::fork();
  if (pid < 0) throw std::runtime_error("fork() failed");
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(out.write_end(), STDOUT_FILENO);
    ::close(out.read_end());
    ::close(out.write_end());
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);  // also set here to close the race with the child
  ++g_live_children;
  out.close_write();

  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };
  auto kill_group = [&] {
    ::kill(-pid, SIGKILL);
    ::kill(pid, SIGKILL);
  };

  bool eof = false;
  char buf[4096];
  while (!eof) {
    if (stop.stop_requested()) {
      result.cancelled = true;
      kill_group();
      break;
    }
    if (timeout_s && elapsed() >= *timeout_s) {
      result.timed_out = true;
      kill_group();
      break;
    }
    pollfd pfd{out.read_end(), POLLIN, 0};
    const int rc = ::poll(&pfd, 1, 10);
    if (rc < 0 && errno != EINTR) break;
    if (rc > 0) {
      const ssize_t n = ::read(out.read_end(), buf, sizeof buf);
      if (n > 0) {
        result.stdout_text.append(buf, static_cast<std::size_t>(n));
      } else if (n == 0 || (errno != EINTR && errno != EAGAIN)) {
        eof = true;
      }
    }
  }

  int status = 0;
  if (eof) {
    // stdout closed; the child may still be running. Keep honouring limits.
    for (;;) {
      const pid_t r = ::waitpid(pid, &status, WNOHANG);
      if (r == pid || (r < 0 && errno != EINTR)) break;
      if (stop.stop_requested()) {
        result.cancelled = true;
        kill_group();
      } else if (timeout_s && elapsed() >= *timeout_s) {
        result.timed_out = true;
        kill_group();
      } else {
        ::usleep(2000);
        continue;
      }
      while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
      }
      break;
    }
  } else {
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
  }
  // Reap stragglers left in the group by the shell.
  ::kill(-pid, SIGKILL);
  --g_live_children;

  if (!result.timed_out && !result.cancelled && WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  }
  result.wall_time_s = elapsed();
  return result;
}

}  // namespace invh
