#pragma once

#include <optional>
#include <stop_token>
#include <string>

namespace invh {

struct ProcessResult {
  std::string stdout_text;
  std::optional<int> exit_code;  // absent when killed
  bool timed_out = false;
  bool cancelled = false;
  double wall_time_s = 0.0;
};

/// Runs `command` through /bin/sh in its own process group, capturing
/// stdout. On timeout or stop request the whole group is killed. The child
/// is always reaped before returning.
ProcessResult run_process(const std::string& command, std::optional<double> timeout_s,
                          std::stop_token stop = {});

/// Children spawned by run_process that have not been reaped yet.
int live_child_processes();

}  // namespace invh
