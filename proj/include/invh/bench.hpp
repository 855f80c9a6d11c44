#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "invh/error.hpp"
#include "invh/portfolio.hpp"

namespace invh {

/// A malformed or inconsistent task file. The message names the task.
class TaskError : public Error {
 public:
  using Error::Error;
};

struct TaskCandidate {
  std::string text;  // as written, PRED@LABEL
  double gen_time_s = 0.0;
  std::string source;
  /// Set unless the candidate was refused by the purity screen.
  std::optional<Property> property;
  std::optional<Rejection> rejection;
};

struct VerifierOverrides {
  std::optional<std::uint64_t> budget;
  /// Present with nullopt inside: wall timeout disabled.
  std::optional<std::optional<double>> timeout_s;
  std::optional<std::string> backend;
  std::optional<unsigned> widening_delay;
  std::optional<double> timeout_multiplier;
};

struct Task {
  std::string id;
  std::filesystem::path program_path;
  Program program;
  Width width;
  Property target;
  std::vector<TaskCandidate> candidates;
  std::optional<std::string> generator_cmd;
  VerifierOverrides overrides;
};

/// Reads a task file. `program` is resolved relative to the file.
/// Throws TaskError.
Task load_task(const std::filesystem::path& path);

/// Screens `pred` for purity, then parses it against `p`. Parse and scope
/// errors propagate; impure text yields a candidate with `rejection` set.
TaskCandidate make_candidate(std::string_view pred, std::string_view label, const Program& p,
                             double gen_time_s = 0.0, std::string source = {});

/// Parses a candidates listing: one PRED@LABEL per line, '#' comments.
std::vector<TaskCandidate> parse_candidate_lines(std::string_view text, const Program& p,
                                                 double gen_time_s = 0.0,
                                                 const std::string& source = {});

enum class Split : std::uint8_t { Easy, Hard, Unsolved };
std::string_view to_string(Split s);

struct SplitThresholds {
  double t_easy = 30.0;
  double t_max = 600.0;
};

Split classify_split(double t_baseline, const SplitThresholds& th = {});

enum class GenTimeCharge : std::uint8_t {
  Winner,  // the winning candidate's gen_time (max over the set if none)
  Max,     // max over the raced set
};

struct RunOptions {
  VerifierConfig verifier;
  /// Candidate queries get multiplier x t_baseline of wall time.
  double timeout_multiplier = 1.0;
  GenTimeCharge charge = GenTimeCharge::Winner;
  SplitThresholds thresholds;
  RaceOptions race;
};

struct RunRecord {
  std::string task_id;
  std::string split;  // easy | hard | unsolved | error
  std::optional<Verdict> baseline_verdict;
  double baseline_time_s = 0.0;
  std::uint64_t baseline_cost = 0;
  std::optional<Verdict> outcome;
  std::optional<Rule> rule;
  std::optional<Verdict> d_a;
  std::optional<Verdict> d_b;
  double gen_time_s = 0.0;
  std::optional<double> assisted_time_s;
  std::optional<double> speedup;
  bool correct_invariant = false;
  std::optional<std::size_t> winner_index;
  std::string error;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Verifier settings for candidate queries: the wall-clock limit becomes
/// multiplier x the baseline's time when the baseline was conclusive.
VerifierConfig candidate_config(const VerifierConfig& cfg, const VerifierResult& baseline,
                                double multiplier);

/// Baseline, then decide (one candidate) or a race (several).
RunRecord run_task(const Task& t, const RunOptions& opts = {});

/// Loads and runs every *.json task under `dir` (sorted by name). A task
/// that fails to load still yields a record, with split "error".
std::vector<RunRecord> run_directory(const std::filesystem::path& dir, const RunOptions& opts = {},
                                     unsigned parallel_tasks = 1);

struct MetricsSummary {
  std::size_t records = 0;
  double pct_correct_invariant = 0.0;  // fractions in [0, 1]
  double pct_speedup = 0.0;
  /// Mean over speedups > 1; absent when there are none (shown as 1.00x).
  std::optional<double> speedup_gt1;
  double speedup_all = 1.0;
  std::map<std::string, std::size_t> split_counts;

  friend bool operator==(const MetricsSummary&, const MetricsSummary&) = default;
};

MetricsSummary compute_metrics(const std::vector<RunRecord>& records);

enum class ReportFormat : std::uint8_t { Csv, Json };

void emit_report(std::ostream& out, const std::vector<RunRecord>& records,
                 const MetricsSummary& summary, ReportFormat format);
/// Throws Error if the path cannot be written.
void emit_report(const std::filesystem::path& path, const std::vector<RunRecord>& records,
                 const MetricsSummary& summary, ReportFormat format);

/// Reads a CSV or JSON report written by emit_report.
std::vector<RunRecord> load_report(const std::filesystem::path& path);

/// Human-readable metrics block.
std::string format_summary(const MetricsSummary& m);

}  // namespace invh
