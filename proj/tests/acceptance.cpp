// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failures.

#include <chrono>
#include <filesystem>
#include <fmt/core.h>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <unistd.h>

#include "invh/bench.hpp"
#include "invh/calculus.hpp"
#include "invh/portfolio.hpp"
#include "invh/subprocess.hpp"
#include "invh/workers.hpp"
#include "support/families.hpp"
#include "support/generator.hpp"
#include "support/reference.hpp"

using namespace invh;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
  void check(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

VerifierConfig config(unsigned bits, Backend b = Backend::Pipeline) {
  VerifierConfig c;
  c.width = Width(bits);
  c.backend = b;
  c.timeout_s.reset();
  return c;
}

// The counterexample is a concrete run of the instrumented program that ends
// in the violation.
bool replays(const Program& p, const std::vector<Property>& a, const Property& prop,
             const VerifierResult& r, Width w) {
  if (!r.counterexample) return false;
  const Program asm_p = insert_assumes(p, a);
  const CheckSpec chk = make_check(asm_p, prop);
  const Trace t = run_concrete(asm_p, w, sequence_resolver(nondet_choices(asm_p, *r.counterexample)),
                               r.counterexample->configs.size() + 1, {&chk, 1});
  return t.end == Termination::AssertionViolation && t.violation_at == chk.position &&
         t.configs == r.counterexample->configs;
}

Outcome decision_soundness() {
  Outcome o;
  std::mt19937_64 rng(1001);
  const auto cfg = config(4);
  int conclusive_seen = 0, false_seen = 0;
  for (int i = 0; i < 1000 && o.pass; ++i) {
    const gen::Case c = gen::random_case(rng, gen::Shape{}, 3);
    const auto truth = ref::reach(c.program, 4);
    const bool target_holds = ref::holds(truth, c.target, 4);
    for (const Property& q : c.candidates) {
      const Judgment j = decide(c.program, c.target, q, cfg, {i % 2 == 0});
      if (j.outcome == Verdict::U) continue;
      ++conclusive_seen;
      const std::string where = fmt::format("case {}: {}@{} / {}@{}", i, c.target.predicate.text(),
                                            c.target.location, q.predicate.text(), q.location);
      if (j.outcome == Verdict::T) {
        o.check(target_holds, "T but oracle finds a violation, " + where);
      } else {
        ++false_seen;
        o.check(!target_holds, "F but oracle finds none, " + where);
        o.check(replays(c.program, {q}, c.target, j.d_b, Width(4)), "F trace does not replay, " + where);
      }
    }
  }
  o.detail = o.pass ? fmt::format("1000 programs, {} conclusive decisions ({} F), 0 disagreements",
                                  conclusive_seen, false_seen)
                    : o.detail;
  return o;
}

Outcome verifier_contract() {
  Outcome o;
  std::mt19937_64 rng(1001);
  int interval_t = 0;
  for (int i = 0; i < 1000 && o.pass; ++i) {
    const gen::Case c = gen::random_case(rng, gen::Shape{}, 3);
    const auto truth = ref::reach(c.program, 4);
    std::vector<Property> props{c.target};
    props.insert(props.end(), c.candidates.begin(), c.candidates.end());
    for (const Property& prop : props) {
      const bool holds = ref::holds(truth, prop, 4);
      const std::string where = fmt::format("case {}: {}@{}", i, prop.predicate.text(), prop.location);
      const auto ex = verify_explicit(c.program, {}, prop, config(4, Backend::Explicit));
      o.check(ex.verdict == (holds ? Verdict::T : Verdict::F), "explicit disagrees, " + where);
      if (!holds) o.check(replays(c.program, {}, prop, ex, Width(4)), "explicit trace does not replay, " + where);
      const auto iv = verify_intervals(c.program, {}, prop, config(4, Backend::Intervals));
      o.check(iv.verdict != Verdict::F, "intervals returned F, " + where);
      if (iv.verdict == Verdict::T) {
        ++interval_t;
        o.check(holds, "intervals T not confirmed, " + where);
      }
    }
  }
  if (o.pass) o.detail = fmt::format("4000 queries per backend, {} interval proofs, 0 disagreements", interval_t);
  return o;
}

Outcome fig1_golden() {
  Outcome o;
  const Program p = parse_program(fam::kFig1);
  const Property target = parse_property("x != 145@E", p);
  const Property q = parse_property("x % 7 == 3@B", p);
  const auto cfg = config(8);
  for (bool det : {true, false}) {
    const Judgment j = decide(p, target, q, cfg, {det});
    o.check(j.outcome == Verdict::T && j.rule == Rule::DecProp && j.d_a.verdict == Verdict::T &&
                j.d_b.verdict == Verdict::T,
            fmt::format("got {} {} d_a={} d_b={}", to_string(j.outcome), to_string(j.rule),
                        to_string(j.d_a.verdict), to_string(j.d_b.verdict)));
  }
  o.check(baseline_solve(p, target, cfg).verdict == Verdict::T, "baseline not T");
  if (o.pass) o.detail = "outcome T via DEC-PROP, d_a=T, d_b=T, baseline T";
  return o;
}

Outcome rule_totality() {
  Outcome o;
  const Verdict all[] = {Verdict::T, Verdict::F, Verdict::U};
  for (Verdict a : all) {
    for (Verdict b : all) {
      const RuleApplication r = apply_rule(a, b);
      Rule rule = Rule::DecU;
      Verdict out = Verdict::U;
      if (b == Verdict::F) {
        rule = Rule::DecFalse;
        out = Verdict::F;
      } else if (a == Verdict::T) {
        rule = Rule::DecProp;
        out = b;
      }
      o.check(r.rule == rule && r.outcome == out,
              fmt::format("({}, {}) -> {} {}", to_string(a), to_string(b), to_string(r.rule), to_string(r.outcome)));
    }
  }
  const Program p = parse_program(
      "int x = 0;\n"
      "@H: while (x < 5) { x = x + 1; }\n"
      "@E: skip;\n");
  const Judgment j = decide(p, parse_property("x == 5@E", p), parse_property("x < 5@H", p), config(8));
  o.check(j.d_a.verdict == Verdict::F && j.d_b.verdict == Verdict::T && j.outcome == Verdict::U &&
              j.rule == Rule::DecU,
          fmt::format("witness: d_a={} d_b={} -> {} {}", to_string(j.d_a.verdict), to_string(j.d_b.verdict),
                      to_string(j.outcome), to_string(j.rule)));
  if (o.pass) o.detail = "9 pairs mapped, x<5@H gives d_a=F d_b=T -> U (DEC-U)";
  return o;
}

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / fmt::format("invh-accept-{}", ::getpid());
  fs::create_directories(d);
  return d;
}

Outcome speedup_family() {
  Outcome o;
  const fs::path dir = scratch_dir();
  const auto members = fam::speedup_family();
  int faster = 0;
  double worst_ratio = 0;
  for (const auto& m : members) {
    std::ofstream(dir / (m.id + ".mw")) << m.source;
    std::ofstream(dir / (m.id + ".json"))
        << fmt::format(R"({{"id": "{}", "program": "{}.mw", "width": {},
  "target": {{"pred": "{}", "label": "{}"}},
  "candidates": [{{"pred": "{}", "label": "{}"}}]}})",
                       m.id, m.id, m.bits, m.target_pred, m.target_label, m.candidate_pred, m.candidate_label);
    const Task t = load_task(dir / (m.id + ".json"));
    // assisted cost: both queries of the single candidate
    const Judgment j = decide(t.program, t.target, *t.candidates[0].property, config(m.bits), {true});
    const VerifierResult base = baseline_solve(t.program, t.target, config(m.bits));
    const double ratio = static_cast<double>(j.total_cost) / static_cast<double>(base.cost);
    worst_ratio = std::max(worst_ratio, ratio);
    o.check(ratio <= 0.5, fmt::format("{}: cost {} vs baseline {}", m.id, j.total_cost, base.cost));
    const RunRecord r = run_task(t);
    o.check(r.outcome == Verdict::T && r.correct_invariant, m.id + ": not proved with the candidate");
    if (r.speedup && *r.speedup > 1.0) ++faster;
  }
  fs::remove_all(dir);
  const int need = static_cast<int>(members.size() * 8 / 10);
  o.check(members.size() >= 10, "family too small");
  o.check(faster >= need, fmt::format("wall speedup > 1 on only {}/{}", faster, members.size()));
  if (o.pass) {
    o.detail = fmt::format("{} members, cost ratio <= {:.4f}, wall speedup > 1 on {}/{}", members.size(),
                           worst_ratio, faster, members.size());
  }
  return o;
}

RunRecord with_speedup(std::optional<double> s) {
  RunRecord r;
  r.speedup = s;
  return r;
}

Outcome metrics() {
  Outcome o;
  const auto m = compute_metrics({with_speedup(2.0), with_speedup(0.5), with_speedup(std::nullopt)});
  o.check(std::abs(m.pct_speedup - 1.0 / 3.0) <= 1e-9, "pct_speedup");
  o.check(m.speedup_gt1 && std::abs(*m.speedup_gt1 - 2.0) <= 1e-9, "speedup_gt1");
  o.check(std::abs(m.speedup_all - 4.0 / 3.0) <= 1e-9, "speedup_all");
  const auto none = compute_metrics({with_speedup(std::nullopt), with_speedup(std::nullopt)});
  const std::string text = format_summary(none);
  o.check(none.pct_speedup == 0.0 && !none.speedup_gt1 && none.speedup_all == 1.0, "all-absent values");
  o.check(text.find("% speedup: 0.0%") != std::string::npos && text.find("speedup>1: 1.00x") != std::string::npos,
          "all-absent presentation");
  if (o.pass) o.detail = "{2.0, 0.5, absent} -> 1/3, 2.0, 4/3; all absent -> 0.0%, 1.00x";
  return o;
}

Outcome race_cleanup() {
  Outcome o;
  const fam::RaceFixture f = fam::race_fixture();
  const Program p = parse_program(f.task.source);
  const Property target = make_property(f.task.target_pred, f.task.target_label, p);
  CandidateSet cs;
  for (const auto& s : f.candidates) cs.push_back(Candidate{parse_property(s, p), std::nullopt, ""});
  auto cfg = config(f.task.bits);
  cfg.budget = fam::kRaceBudget;
  const std::uint64_t seed = std::random_device{}();
  std::mt19937_64 rng(seed);
  for (int rep = 0; rep < 100; ++rep) {
    RaceOptions opts;
    opts.seed = rng();
    opts.workers = 1 + rng() % 8;
    opts.jitter_ms = static_cast<double>(rng() % 3);
    opts.mode = rng() % 4 == 0 ? RaceMode::Deterministic : RaceMode::WallClock;
    const RaceResult r = race_best_of_n(p, target, cs, cfg, opts);
    o.check(r.winner == fam::kRaceWinner,
            fmt::format("seed {} rep {}: winner {}", seed, rep, r.winner ? std::to_string(*r.winner) : "none"));
    o.check(live_verifier_workers() == 0, fmt::format("rep {}: {} live workers", rep, live_verifier_workers()));
    o.check(live_child_processes() == 0, fmt::format("rep {}: {} live children", rep, live_child_processes()));
  }
  if (o.pass) o.detail = fmt::format("100/100 races chose candidate {}, 0 workers, 0 children", fam::kRaceWinner);
  return o;
}

Outcome hoare() {
  Outcome o;
  const Program p = parse_program(fam::kFig1);
  const auto pred = [&](const char* s) { return parse_predicate(s, p); };
  const HoareResult good =
      check_hoare_while(make_loop_spec(p, "B", pred("x == 3"), pred("x % 7 == 3"), pred("x != 145")), Width(8),
                        1'000'000);
  o.check(good.outcome == HoareResult::Outcome::Holds, "x % 7 == 3 does not hold");
  const Predicate inv = pred("x < 150");
  const LoopSpec spec = make_loop_spec(p, "B", pred("x == 3"), inv, pred("x != 145"));
  const HoareResult bad = check_hoare_while(spec, Width(8), 1'000'000);
  o.check(bad.outcome == HoareResult::Outcome::Fails && bad.premise == Premise::Consecution,
          "x < 150 not rejected at consecution");
  if (bad.witness && bad.successor) {
    // Replay: the witness satisfies I and the guard, one pass of the body
    // reaches the successor, and the successor breaks I.
    const Program body = parse_program("int x;\nx = x + 7;\n");
    const auto after = ref::reach(body, 8, {}, *bad.witness);
    o.check(ref::truth(inv.expr, *bad.witness, 8) == true && ref::truth(spec.guard, *bad.witness, 8) == true,
            "witness not in I and guard");
    o.check(after.exit.count(*bad.successor) == 1, "successor not produced by the body");
    o.check(ref::truth(inv.expr, *bad.successor, 8) == false, "successor satisfies I");
  } else {
    o.fail("no witness");
  }
  if (o.pass) {
    o.detail = fmt::format("x%7==3 holds; x<150 fails consecution at x={} -> x={}", (*bad.witness)[0],
                           (*bad.successor)[0]);
  }
  return o;
}

Outcome monotonicity() {
  Outcome o;
  std::mt19937_64 rng(9);
  int all_true = 0, strict = 0;
  for (int i = 0; i < 200 && o.pass; ++i) {
    const std::string src = gen::random_program(rng, gen::Shape{3, 14, 2, 3});
    const Program p = parse_program(src);
    const auto a = gen::random_properties(rng, p, 3, 1 + rng() % 3);
    const auto plain = enumerate_reachable(p, Width(3), 10'000'000);
    const auto assumed = enumerate_reachable(insert_assumes(p, a), Width(3), 10'000'000);
    const auto* rp = std::get_if<Reachability>(&plain);
    const auto* ra = std::get_if<Reachability>(&assumed);
    if (!rp || !ra) {
      o.fail(fmt::format("case {}: enumeration over budget", i));
      break;
    }
    const auto truth = ref::reach(p, 3);
    bool every_true = true;
    for (const auto& prop : a) every_true = every_true && ref::holds(truth, prop, 3);
    all_true += every_true;
    bool smaller = false;
    for (const auto& l : p.label_order()) {
      const auto& sp = rp->at_label.at(l);
      const auto& sa = ra->at_label.at(l);
      o.check(std::includes(sp.begin(), sp.end(), sa.begin(), sa.end()),
              fmt::format("case {} label {}: Asm reaches a state P does not", i, l));
      if (every_true) o.check(sp == sa, fmt::format("case {} label {}: true assumptions removed states", i, l));
      smaller = smaller || sa.size() < sp.size();
      o.check(sp == truth.at.at(l), fmt::format("case {} label {}: enumeration disagrees with oracle", i, l));
    }
    strict += smaller;
  }
  if (o.pass) {
    o.detail = fmt::format("200 pairs, {} with all assumptions true (equal), {} strictly smaller", all_true, strict);
  }
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"decision soundness fuzz", decision_soundness},
      {"verifier contract fuzz", verifier_contract},
      {"fig1 golden", fig1_golden},
      {"rule totality", rule_totality},
      {"speedup family", speedup_family},
      {"metrics arithmetic", metrics},
      {"race determinism and cleanup", race_cleanup},
      {"hoare checker", hoare},
      {"assumption monotonicity", monotonicity},
  };
  int failures = 0, n = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    fmt::print("{} [{}] {}: {} ({:.1f} s)\n", o.pass ? "PASS" : "FAIL", ++n, name, o.detail, secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures;
}
