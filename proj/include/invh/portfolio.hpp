#pragma once

#include <cstdint>
#include <optional>
#include <stop_token>
#include <string>
#include <vector>

#include "invh/calculus.hpp"

namespace invh {

struct Candidate {
  Property q;
  std::optional<double> gen_time_s;
  std::string source;
};

using CandidateSet = std::vector<Candidate>;

/// Keeps the first occurrence of each (canonical predicate, location).
CandidateSet dedup_candidates(const CandidateSet& cs);

enum class RaceMode : std::uint8_t {
  /// First conclusive judgment to complete wins; the rest are stopped.
  WallClock,
  /// Completion order is simulated by critical cost; requires the
  /// wall-clock timeout to be disabled for reproducible winners.
  Deterministic,
};

struct RaceOptions {
  unsigned workers = 0;  // 0: one per candidate
  RaceMode mode = RaceMode::WallClock;
  /// Shuffles the launch order. Absent: candidates start in index order.
  std::optional<std::uint64_t> seed;
  /// Upper bound of a random delay before each candidate starts (seeded).
  double jitter_ms = 0.0;
  std::stop_token stop;
};

struct CandidateRun {
  enum class Status : std::uint8_t { Completed, Cancelled, Rejected };
  Status status = Status::Cancelled;
  std::optional<Judgment> judgment;
  std::string error;  // for Rejected
};

std::string_view to_string(CandidateRun::Status s);

struct RaceResult {
  std::optional<std::size_t> winner;
  std::vector<CandidateRun> all;
  double race_wall_time_s = 0.0;

  const Judgment* winning_judgment() const {
    return winner ? &*all[*winner].judgment : nullptr;
  }
};

RaceResult race_best_of_n(const Program& p, const Property& target, const CandidateSet& cs,
                          const VerifierConfig& cfg, const RaceOptions& opts = {});

/// V(P, {}, target): the unassisted reference run.
VerifierResult baseline_solve(const Program& p, const Property& target,
                              const VerifierConfig& cfg, const QueryControl& ctl = {});

}  // namespace invh
