#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <stop_token>
#include <string>
#include <string_view>

#include "invh/instrument.hpp"
#include "invh/interp.hpp"
#include "invh/lang.hpp"

namespace invh {

/// T: proved, F: refuted, U: inconclusive (no claim either way).
enum class Verdict : std::uint8_t { T, F, U };

std::string_view to_string(Verdict v);
std::optional<Verdict> parse_verdict(std::string_view s);
inline bool conclusive(Verdict v) { return v != Verdict::U; }

enum class Backend : std::uint8_t {
  Pipeline,   // intervals, then explicit on U
  Explicit,
  Intervals,
  External,
};

std::string_view to_string(Backend b);

/// Parses "pipeline", "explicit", "intervals" or "external:CMD" into
/// cfg.backend (and cfg.external_cmd). Throws std::invalid_argument.
struct VerifierConfig;
void set_backend(VerifierConfig& cfg, std::string_view spec);

struct VerifierConfig {
  Width width{8};
  /// Deterministic cost bound (configurations or abstract transfers).
  std::uint64_t budget = 10'000'000;
  /// Wall-clock limit per query; nullopt disables it.
  std::optional<double> timeout_s = 600.0;
  Backend backend = Backend::Pipeline;
  unsigned widening_delay = 3;
  /// Command template for Backend::External; must contain {program_path}.
  std::string external_cmd;

  /// Throws std::invalid_argument on an out-of-range field.
  void validate() const;
};

struct VerifierResult {
  Verdict verdict = Verdict::U;
  double wall_time_s = 0.0;
  std::uint64_t cost = 0;
  /// Shortest violating execution of Asm(P, A); set iff a built-in backend
  /// returned F. Positions refer to the instrumented program.
  std::optional<Trace> counterexample;
  std::string backend;
  bool cancelled = false;
  /// False for conclusive verdicts reported by an external tool.
  bool trusted = true;
  /// Why the verdict is U: "budget", "timeout", "cancelled", "incomplete", ...
  std::string reason;
};

/// Per-call cancellation. `cost_cap`, when set, is a shared upper bound on
/// this query's cost that may shrink while the query runs; exceeding it
/// ends the query as cancelled.
struct QueryControl {
  std::stop_token stop;
  const std::atomic<std::uint64_t>* cost_cap = nullptr;
};

/// Exact breadth-first search over Asm(p, A) checking `prop` on every
/// arrival. T when the closure completes clean, F with a shortest
/// counterexample, U on budget, timeout or cancellation.
VerifierResult verify_explicit(const Program& p, std::span<const Property> assumptions,
                               const Property& prop, const VerifierConfig& cfg,
                               const QueryControl& ctl = {});

/// Interval abstract interpretation of Asm(p, A). Returns T when the
/// abstract state at the property's location entails it, otherwise U.
/// Never returns F.
VerifierResult verify_intervals(const Program& p, std::span<const Property> assumptions,
                                const Property& prop, const VerifierConfig& cfg,
                                const QueryControl& ctl = {});

/// V(P, A, p) per `cfg.backend`. The pipeline accepts an interval proof and
/// otherwise runs the explicit engine within the remaining budget and time.
VerifierResult verify(const Program& p, std::span<const Property> assumptions,
                      const Property& prop, const VerifierConfig& cfg,
                      const QueryControl& ctl = {});

/// Runs an external tool on the exported Asm(p, A) with `prop` inlined as
/// an assert. The last stdout line matching VERDICT:(TRUE|FALSE|UNKNOWN)
/// decides; any anomaly (timeout, crash, no verdict line) is U. Conclusive
/// results are marked untrusted.
VerifierResult verify_external(std::string_view cmd_template, const Program& p,
                               std::span<const Property> assumptions, const Property& prop,
                               std::optional<double> timeout_s, std::stop_token stop = {});

}  // namespace invh
