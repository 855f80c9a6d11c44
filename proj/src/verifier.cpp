#include "invh/verifier.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

#include "config_table.hpp"
#include "invh/intervals.hpp"
#include "invh/predicate.hpp"
#include "invh/subprocess.hpp"
#include "semantics.hpp"

namespace invh {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::T: return "T";
    case Verdict::F: return "F";
    case Verdict::U: return "U";
  }
  return "?";
}

std::optional<Verdict> parse_verdict(std::string_view s) {
  if (s == "T") return Verdict::T;
  if (s == "F") return Verdict::F;
  if (s == "U") return Verdict::U;
  return std::nullopt;
}

std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::Pipeline: return "pipeline";
    case Backend::Explicit: return "explicit";
    case Backend::Intervals: return "intervals";
    case Backend::External: return "external";
  }
  return "?";
}

void set_backend(VerifierConfig& cfg, std::string_view spec) {
  static constexpr std::string_view kExternal = "external:";
  if (spec.starts_with(kExternal)) {
    cfg.backend = Backend::External;
    cfg.external_cmd = std::string(spec.substr(kExternal.size()));
    return;
  }
  for (Backend b : {Backend::Pipeline, Backend::Explicit, Backend::Intervals}) {
    if (to_string(b) == spec) {
      cfg.backend = b;
      return;
    }
  }
  throw std::invalid_argument("unknown backend '" + std::string(spec) + "'");
}

void VerifierConfig::validate() const {
  if (budget < 1) throw std::invalid_argument("budget must be at least 1");
  if (timeout_s && !(*timeout_s > 0)) throw std::invalid_argument("timeout must be positive");
  if (backend == Backend::External && external_cmd.find("{program_path}") == std::string::npos) {
    throw std::invalid_argument("external command must contain {program_path}");
  }
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Resource limits shared by the backends of one query.
class Limits {
 public:
  Limits(std::uint64_t budget, std::optional<double> timeout_s, const QueryControl& ctl)
      : budget_(budget), ctl_(ctl) {
    if (timeout_s) deadline_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                                  std::chrono::duration<double>(*timeout_s));
  }

  /// Empty while within limits; otherwise why the query must stop.
  /// `spent` is the query's total cost so far.
  std::string_view exceeded(std::uint64_t spent) const {
    if (spent > budget_) return "budget";
    if (ctl_.cost_cap && spent > ctl_.cost_cap->load(std::memory_order_relaxed)) {
      return "cancelled";
    }
    return {};
  }

  /// Wall-clock and stop checks; called periodically.
  std::string_view interrupted() const {
    if (ctl_.stop.stop_requested()) return "cancelled";
    if (deadline_ && Clock::now() >= *deadline_) return "timeout";
    return {};
  }

 private:
  std::uint64_t budget_;
  std::optional<Clock::time_point> deadline_;
  const QueryControl& ctl_;
};

VerifierResult inconclusive(std::string_view reason, std::uint64_t cost, std::string backend) {
  VerifierResult r;
  r.verdict = Verdict::U;
  r.cost = cost;
  r.backend = std::move(backend);
  r.reason = std::string(reason);
  r.cancelled = reason == "cancelled";
  return r;
}

// ---------------------------------------------------------------------------
// Explicit-state engine

VerifierResult explicit_search(const Program& prog, const CheckSpec& check, Width w,
                               const Limits& limits, std::uint64_t offset) {
  detail::ConfigTable table(prog.var_count());
  const State init = initial_state(prog, w);

  auto violates = [&](Position pc, std::span<const Value> s) {
    if (pc != check.position) return false;
    auto b = eval_bool(check.predicate.expr, s, w);
    return !b || !*b;
  };
  auto refuted = [&](std::uint32_t idx) {
    VerifierResult r;
    r.verdict = Verdict::F;
    r.cost = table.size();
    r.backend = "explicit";
    r.counterexample = Trace{table.path_to(idx), Termination::AssertionViolation,
                             check.position, true};
    return r;
  };

  table.insert(prog.entry(), init, detail::ConfigTable::kNoParent);
  if (auto why = limits.exceeded(offset + table.size()); !why.empty()) {
    return inconclusive(why, table.size(), "explicit");
  }
  if (violates(prog.entry(), init)) return refuted(0);

  State current;
  State scratch;
  std::string_view stop_reason;
  std::optional<std::uint32_t> violation;
  std::uint64_t work = 0;
  for (std::uint32_t i = 0; i < table.size(); ++i) {
    const Position pc = table.pc(i);
    auto s = table.state(i);
    current.assign(s.begin(), s.end());
    detail::expand(prog, pc, current, w, scratch, [&](Position next, std::span<const Value> succ) {
      if (violation || !stop_reason.empty()) return;
      if ((++work & 1023) == 0) {
        stop_reason = limits.interrupted();
        if (!stop_reason.empty()) return;
      }
      auto [idx, fresh] = table.insert(next, succ, i);
      if (!fresh) return;
      if (auto why = limits.exceeded(offset + table.size()); !why.empty()) {
        stop_reason = why;
        return;
      }
      if (violates(next, succ)) violation = idx;
    });
    if (violation) return refuted(*violation);
    if (!stop_reason.empty()) return inconclusive(stop_reason, table.size(), "explicit");
  }

  VerifierResult r;
  r.verdict = Verdict::T;
  r.cost = table.size();
  r.backend = "explicit";
  return r;
}

// ---------------------------------------------------------------------------
// Interval abstract interpreter

struct Abort {
  std::string_view reason;
};

class IntervalAnalyzer {
 public:
  IntervalAnalyzer(const Program& prog, Width w, unsigned delay, const Limits& limits,
                   std::uint64_t offset)
      : prog_(prog), w_(w), delay_(delay), limits_(limits), offset_(offset) {}

  void run() {
    Box init = Box::make_point(initial_state(prog_, w_));
    exec_block(prog_.body(), std::move(init));
  }

  Box at(std::string_view label) const {
    auto it = at_label_.find(label);
    return it == at_label_.end() ? Box::make_bottom(prog_.var_count()) : it->second;
  }

  std::uint64_t cost() const { return cost_; }

 private:
  void tick() {
    ++cost_;
    if (auto why = limits_.exceeded(offset_ + cost_); !why.empty()) throw Abort{why};
    if ((cost_ & 255) == 0) {
      if (auto why = limits_.interrupted(); !why.empty()) throw Abort{why};
    }
  }

  void record(const Stmt& s, const Box& b) {
    if (s.label) at_label_[*s.label] = b;
  }

  Box exec_block(const Block& b, Box in) {
    for (std::size_t i = 0; i < b.size(); ++i) in = exec_stmt(b, i, std::move(in));
    return in;
  }

  // Assume statements directly before position `end` of `b`.
  static std::vector<const Expr*> trailing_assumes(const Block& b, std::size_t end) {
    std::vector<const Expr*> out;
    while (end > 0 && b[end - 1].kind == Stmt::Kind::Assume) {
      out.push_back(&b[end - 1].expr);
      --end;
    }
    return out;
  }

  Box apply(const std::vector<const Expr*>& guards, Box b) const {
    for (const Expr* g : guards) b = refine(b, *g, true, w_);
    return b;
  }

  Box exec_stmt(const Block& parent, std::size_t idx, Box in) {
    const Stmt& s = parent[idx];
    tick();
    if (s.kind != Stmt::Kind::While) record(s, in);
    if (in.bottom) {
      if (s.kind == Stmt::Kind::While) record(s, in);
      return in;
    }
    switch (s.kind) {
      case Stmt::Kind::Assign: {
        Interval v = eval_interval(s.expr, in, w_);
        if (v.empty()) return Box::make_bottom(in.vars.size());
        in.vars[s.target] = v;
        return in;
      }
      case Stmt::Kind::Nondet:
        in.vars[s.target] = Interval::top(w_);
        return in;
      case Stmt::Kind::Assert:
      case Stmt::Kind::Assume:
        return refine(in, s.expr, true, w_);
      case Stmt::Kind::Skip:
        return in;
      case Stmt::Kind::If:
        return join(exec_block(s.body, refine(in, s.expr, true, w_)),
                    exec_block(s.else_body, refine(in, s.expr, false, w_)));
      case Stmt::Kind::While:
        return exec_loop(parent, idx, std::move(in));
    }
    return in;
  }

  Box exec_loop(const Block& parent, std::size_t idx, Box entry) {
    const Stmt& s = parent[idx];

    // Assumptions that guard every edge into the head (the one entry edge
    // and the back edge) hold on every head state, so they are re-applied
    // after widening.
    std::vector<const Expr*> guards;
    const auto before = trailing_assumes(parent, idx);
    const auto after = trailing_assumes(s.body, s.body.size());
    for (const Expr* g : before) {
      for (const Expr* h : after) {
        if (*g == *h) {
          guards.push_back(g);
          break;
        }
      }
    }

    Box head = apply(guards, entry);
    for (unsigned iter = 0;; ++iter) {
      Box back = exec_block(s.body, refine(head, s.expr, true, w_));
      Box next = join(entry, back);
      next = iter < delay_ ? join(head, next) : widen(head, next, w_);
      next = apply(guards, std::move(next));
      if (leq(next, head)) break;
      head = std::move(next);
    }
    // One descending step.
    Box back = exec_block(s.body, refine(head, s.expr, true, w_));
    head = meet(head, apply(guards, join(entry, back)));

    record(s, head);
    exec_block(s.body, refine(head, s.expr, true, w_));  // final pass records inner labels
    return refine(head, s.expr, false, w_);
  }

  const Program& prog_;
  Width w_;
  unsigned delay_;
  const Limits& limits_;
  std::uint64_t offset_;
  std::uint64_t cost_ = 0;
  std::map<std::string, Box, std::less<>> at_label_;
};

VerifierResult interval_prove(const Program& prog, const CheckSpec& check, Width w,
                              unsigned delay, const Limits& limits, std::uint64_t offset) {
  IntervalAnalyzer analyzer(prog, w, delay, limits, offset);
  try {
    analyzer.run();
  } catch (const Abort& a) {
    return inconclusive(a.reason, analyzer.cost(), "intervals");
  }
  VerifierResult r;
  r.cost = analyzer.cost();
  r.backend = "intervals";
  if (entails(analyzer.at(check.label), check.predicate.expr, w)) {
    r.verdict = Verdict::T;
  } else {
    r.verdict = Verdict::U;
    r.reason = "incomplete";
  }
  return r;
}

}  // namespace

VerifierResult verify_explicit(const Program& p, std::span<const Property> assumptions,
                               const Property& prop, const VerifierConfig& cfg,
                               const QueryControl& ctl) {
  const auto t0 = Clock::now();
  const Program instrumented = insert_assumes(p, assumptions);
  const CheckSpec check = make_check(instrumented, prop);
  Limits limits(cfg.budget, cfg.timeout_s, ctl);
  VerifierResult r = explicit_search(instrumented, check, cfg.width, limits, 0);
  r.wall_time_s = seconds_since(t0);
  return r;
}

VerifierResult verify_intervals(const Program& p, std::span<const Property> assumptions,
                                const Property& prop, const VerifierConfig& cfg,
                                const QueryControl& ctl) {
  const auto t0 = Clock::now();
  const Program instrumented = insert_assumes(p, assumptions);
  const CheckSpec check = make_check(instrumented, prop);
  Limits limits(cfg.budget, cfg.timeout_s, ctl);
  VerifierResult r = interval_prove(instrumented, check, cfg.width, cfg.widening_delay, limits, 0);
  r.wall_time_s = seconds_since(t0);
  return r;
}

VerifierResult verify(const Program& p, std::span<const Property> assumptions,
                      const Property& prop, const VerifierConfig& cfg,
                      const QueryControl& ctl) {
  switch (cfg.backend) {
    case Backend::Explicit:
      return verify_explicit(p, assumptions, prop, cfg, ctl);
    case Backend::Intervals:
      return verify_intervals(p, assumptions, prop, cfg, ctl);
    case Backend::External:
      return verify_external(cfg.external_cmd, p, assumptions, prop, cfg.timeout_s, ctl.stop);
    case Backend::Pipeline:
      break;
  }

  const auto t0 = Clock::now();
  const Program instrumented = insert_assumes(p, assumptions);
  const CheckSpec check = make_check(instrumented, prop);
  Limits limits(cfg.budget, cfg.timeout_s, ctl);

  VerifierResult first =
      interval_prove(instrumented, check, cfg.width, cfg.widening_delay, limits, 0);
  if (first.verdict == Verdict::T || first.reason != "incomplete") {
    first.wall_time_s = seconds_since(t0);
    return first;
  }
  VerifierResult second = explicit_search(instrumented, check, cfg.width, limits, first.cost);
  second.cost += first.cost;
  second.backend = "intervals+explicit";
  second.wall_time_s = seconds_since(t0);
  return second;
}

// ---------------------------------------------------------------------------
// External adapter

namespace {

std::string write_temp_program(const std::string& text) {
  char path[] = "/tmp/invh-XXXXXX.mw";
  const int fd = ::mkstemps(path, 3);
  if (fd < 0) throw std::runtime_error("cannot create temporary program file");
  ::close(fd);
  std::ofstream out(path);
  out << text;
  return path;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

std::optional<Verdict> last_verdict_line(const std::string& text) {
  static const std::regex kLine(R"(^\s*VERDICT:(TRUE|FALSE|UNKNOWN)\s*$)");
  std::optional<Verdict> found;
  std::istringstream in(text);
  std::string line;
  std::smatch m;
  while (std::getline(in, line)) {
    if (std::regex_match(line, m, kLine)) {
      found = m[1] == "TRUE" ? Verdict::T : m[1] == "FALSE" ? Verdict::F : Verdict::U;
    }
  }
  return found;
}

}  // namespace

VerifierResult verify_external(std::string_view cmd_template, const Program& p,
                               std::span<const Property> assumptions, const Property& prop,
                               std::optional<double> timeout_s, std::stop_token stop) {
  static constexpr std::string_view kPlaceholder = "{program_path}";
  std::string cmd(cmd_template);
  const auto at = cmd.find(kPlaceholder);
  if (at == std::string::npos) {
    throw std::invalid_argument("external command must contain {program_path}");
  }
  const std::string path = write_temp_program(export_with_check(p, assumptions, prop));
  cmd.replace(at, kPlaceholder.size(), shell_quote(path));

  ProcessResult pr;
  try {
    pr = run_process(cmd, timeout_s, stop);
  } catch (...) {
    std::remove(path.c_str());
    throw;
  }
  std::remove(path.c_str());

  VerifierResult r;
  r.backend = "external";
  r.wall_time_s = pr.wall_time_s;
  r.trusted = false;
  if (pr.cancelled) {
    r.cancelled = true;
    r.reason = "cancelled";
    return r;
  }
  if (pr.timed_out) {
    r.reason = "timeout";
    return r;
  }
  const auto v = last_verdict_line(pr.stdout_text);
  if (!v) {
    r.reason = "no verdict line";
    return r;
  }
  r.verdict = *v;
  if (*v == Verdict::U) r.reason = "tool reported unknown";
  return r;
}

}  // namespace invh
