#include "invh/portfolio.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <thread>

#include "invh/error.hpp"
#include "invh/workers.hpp"

namespace invh {

CandidateSet dedup_candidates(const CandidateSet& cs) {
  std::set<std::pair<std::string, std::string>> seen;
  CandidateSet out;
  for (const Candidate& c : cs) {
    if (seen.emplace(c.q.predicate.text(), c.q.location).second) out.push_back(c);
  }
  return out;
}

std::string_view to_string(CandidateRun::Status s) {
  switch (s) {
    case CandidateRun::Status::Completed: return "completed";
    case CandidateRun::Status::Cancelled: return "cancelled";
    case CandidateRun::Status::Rejected: return "rejected";
  }
  return "?";
}

VerifierResult baseline_solve(const Program& p, const Property& target,
                              const VerifierConfig& cfg, const QueryControl& ctl) {
  return verify(p, {}, target, cfg, ctl);
}

RaceResult race_best_of_n(const Program& p, const Property& target, const CandidateSet& cs,
                          const VerifierConfig& cfg, const RaceOptions& opts) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  RaceResult result;
  result.all.resize(cs.size());
  if (cs.empty()) return result;

  std::vector<std::size_t> order(cs.size());
  std::iota(order.begin(), order.end(), 0);
  if (opts.seed) std::shuffle(order.begin(), order.end(), std::mt19937_64(*opts.seed));

  const bool deterministic = opts.mode == RaceMode::Deterministic;
  std::stop_source stop;
  std::stop_callback forward(opts.stop, [&] { stop.request_stop(); });
  std::atomic<std::uint64_t> cap{std::numeric_limits<std::uint64_t>::max()};
  std::mutex mu;
  std::optional<std::pair<std::uint64_t, std::size_t>> best;  // (critical cost, index)
  std::atomic<std::size_t> next{0};

  auto worker = [&](unsigned id) {
    detail::WorkerGuard guard;
    std::mt19937_64 rng(opts.seed.value_or(0) * 7919 + id);
    std::uniform_real_distribution<double> delay(0.0, opts.jitter_ms);
    for (;;) {
      const std::size_t slot = next.fetch_add(1);
      if (slot >= order.size()) return;
      const std::size_t i = order[slot];
      CandidateRun& run = result.all[i];
      if (opts.jitter_ms > 0) {
        std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(delay(rng)));
      }
      if (!deterministic && stop.stop_requested()) continue;  // stays Cancelled

      DecideOptions dopts;
      dopts.deterministic = deterministic;
      dopts.stop = stop.get_token();
      dopts.cost_cap = deterministic ? &cap : nullptr;
      try {
        run.judgment = decide(p, target, cs[i].q, cfg, dopts);
      } catch (const Error& e) {
        run.status = CandidateRun::Status::Rejected;
        run.error = e.what();
        continue;
      }
      const Judgment& j = *run.judgment;
      const bool conclusive_result = conclusive(j.outcome);
      run.status = !conclusive_result && (j.d_a.cancelled || j.d_b.cancelled)
                       ? CandidateRun::Status::Cancelled
                       : CandidateRun::Status::Completed;
      if (!conclusive_result) continue;

      std::lock_guard lock(mu);
      if (deterministic) {
        const std::pair key{j.critical_cost, i};
        if (!best || key < *best) {
          best = key;
          cap.store(j.critical_cost);
        }
      } else if (!best) {
        best = std::pair{j.critical_cost, i};
        stop.request_stop();
      }
    }
  };

  const unsigned n = opts.workers == 0
                         ? static_cast<unsigned>(cs.size())
                         : std::min<unsigned>(opts.workers, static_cast<unsigned>(cs.size()));
  {
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker, k);
  }

  if (best) result.winner = best->second;
  result.race_wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
  return result;
}

}  // namespace invh
