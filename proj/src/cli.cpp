#include "invh/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "invh/bench.hpp"

namespace invh {

using json = nlohmann::json;

namespace {

struct CommonFlags {
  unsigned width = 8;
  std::uint64_t budget = VerifierConfig{}.budget;
  double timeout_s = 600.0;
  bool no_timeout = false;
  std::string backend = "pipeline";
  bool json_out = false;

  void add_to(CLI::App* app, bool with_backend = true) {
    app->add_option("--width", width, "Bit width W of every variable (2-16)")->capture_default_str();
    app->add_option("--budget", budget, "Cost budget per verifier query")->capture_default_str();
    app->add_option("--timeout", timeout_s, "Wall-clock limit per query, seconds")
        ->capture_default_str();
    app->add_flag("--no-timeout", no_timeout, "Disable the wall-clock limit");
    if (with_backend) {
      app->add_option("--backend", backend, "explicit | intervals | pipeline | external:CMD")
          ->capture_default_str();
    }
    app->add_flag("--json", json_out, "Machine-readable output");
  }

  VerifierConfig config() const {
    VerifierConfig cfg;
    cfg.width = Width(width);
    cfg.budget = budget;
    cfg.timeout_s = no_timeout ? std::nullopt : std::optional<double>(timeout_s);
    set_backend(cfg, backend);
    cfg.validate();
    return cfg;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// PRED@LABEL with the purity screen applied first.
Property candidate_property(const std::string& spec, const Program& p) {
  const auto at = spec.rfind('@');
  if (at == std::string::npos) throw SyntaxError(1, 1, "expected PRED@LABEL, found '" + spec + "'");
  if (auto why = validate_pure(std::string_view(spec).substr(0, at))) {
    throw ValidationError("candidate rejected: '" + why->construct + "': " + why->reason);
  }
  return parse_property(spec, p);
}

std::string state_text(const Program& p, const State& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += fmt::format("{}{}={}", i ? " " : "", p.decls()[i].name, s[i]);
  }
  return out;
}

json state_json(const Program& p, const State& s) {
  json j = json::object();
  for (std::size_t i = 0; i < s.size(); ++i) j[p.decls()[i].name] = s[i];
  return j;
}

json result_json(const Program& p, const VerifierResult& r) {
  json j = {{"verdict", std::string(to_string(r.verdict))},
            {"wall_time_s", r.wall_time_s},
            {"cost", r.cost},
            {"backend", r.backend},
            {"cancelled", r.cancelled},
            {"trusted", r.trusted}};
  if (!r.reason.empty()) j["reason"] = r.reason;
  if (r.counterexample) {
    json trace = json::array();
    for (const Configuration& c : r.counterexample->configs) {
      trace.push_back({{"pc", c.pc.index}, {"state", state_json(p, c.state)}});
    }
    j["counterexample"] = trace;
  }
  return j;
}

void print_result(std::ostream& out, std::string_view name, const VerifierResult& r) {
  out << fmt::format("{}: {}  (backend {}, cost {}, {:.6f} s{}{})\n", name, to_string(r.verdict),
                     r.backend.empty() ? "-" : r.backend, r.cost, r.wall_time_s,
                     r.reason.empty() ? "" : ", " + r.reason, r.trusted ? "" : ", untrusted");
}

void print_trace(std::ostream& out, const Program& p, const Trace& t) {
  out << "counterexample:\n";
  for (const Configuration& c : t.configs) {
    out << fmt::format("  pc {:>3}  {}\n", c.pc.index, state_text(p, c.state));
  }
}

json judgment_json(const Judgment& j) {
  return {{"outcome", std::string(to_string(j.outcome))},
          {"rule", std::string(to_string(j.rule))},
          {"d_a", std::string(to_string(j.d_a.verdict))},
          {"d_b", std::string(to_string(j.d_b.verdict))},
          {"d_a_cancelled", j.d_a.cancelled},
          {"d_b_cancelled", j.d_b.cancelled},
          {"decide_wall_time_s", j.decide_wall_time_s},
          {"total_cost", j.total_cost},
          {"critical_cost", j.critical_cost}};
}

void print_judgment(std::ostream& out, const Judgment& j) {
  out << fmt::format("outcome: {}\nrule: {}\n", to_string(j.outcome), to_string(j.rule));
  print_result(out, "d_a", j.d_a);
  print_result(out, "d_b", j.d_b);
  out << fmt::format("decide time: {:.6f} s\ntotal cost: {}\n", j.decide_wall_time_s,
                     j.total_cost);
}

int verdict_exit(Verdict v) { return conclusive(v) ? kExitConclusive : kExitInconclusive; }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Invariant evaluation harness for MiniWhile programs", "invh"};
  app.require_subcommand(1);

  CommonFlags common;
  std::string file;
  std::string prop;
  std::vector<std::string> assumes;
  std::string target;
  std::string candidate;
  std::string candidates_file;
  unsigned workers = 0;
  std::optional<std::uint64_t> seed;
  bool deterministic = false;
  std::string loop_label;
  std::string pre = "true";
  std::string inv;
  std::string post = "true";
  std::string out_path;
  std::string format = "csv";
  double multiplier = 1.0;
  std::string charge = "winner";
  unsigned parallel = 1;
  bool summary = false;

  auto* verify_cmd = app.add_subcommand("verify", "Run one verifier query V(P, A, p)");
  verify_cmd->add_option("file", file, "MiniWhile program")->required();
  verify_cmd->add_option("--prop", prop, "Property PRED@LABEL")->required();
  verify_cmd->add_option("--assume", assumes, "Assumed property PRED@LABEL (repeatable)");
  common.add_to(verify_cmd);

  auto* decide_cmd = app.add_subcommand("decide", "Evaluate one candidate invariant");
  decide_cmd->add_option("file", file, "MiniWhile program")->required();
  decide_cmd->add_option("--target", target, "Target property PRED@LABEL")->required();
  decide_cmd->add_option("--candidate", candidate, "Candidate PRED@LABEL")->required();
  common.add_to(decide_cmd);

  auto* race_cmd = app.add_subcommand("race", "Best-of-N race over a candidate file");
  race_cmd->add_option("file", file, "MiniWhile program")->required();
  race_cmd->add_option("--target", target, "Target property PRED@LABEL")->required();
  race_cmd->add_option("--candidates", candidates_file, "One PRED@LABEL per line")->required();
  race_cmd->add_option("--workers", workers, "Concurrent candidates (0: all)");
  race_cmd->add_option("--seed", seed, "Launch-order seed")->envname("INVH_SEED");
  race_cmd->add_flag("--deterministic", deterministic,
                     "Pick the winner by cost instead of wall-clock order");
  common.add_to(race_cmd);

  auto* hoare_cmd = app.add_subcommand("hoare", "Check the while rule premises for one loop");
  hoare_cmd->add_option("file", file, "MiniWhile program")->required();
  hoare_cmd->add_option("--loop", loop_label, "Label of the while statement")->required();
  hoare_cmd->add_option("--pre", pre, "Precondition")->capture_default_str();
  hoare_cmd->add_option("--inv", inv, "Loop invariant")->required();
  hoare_cmd->add_option("--post", post, "Postcondition")->capture_default_str();
  common.add_to(hoare_cmd, false);

  auto* bench_cmd = app.add_subcommand("bench", "Run every task file in a directory");
  bench_cmd->add_option("taskdir", file, "Directory of *.json task files")->required();
  bench_cmd->add_option("--out", out_path, "Report path")->required();
  bench_cmd->add_option("--format", format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  bench_cmd->add_option("--multiplier", multiplier, "Candidate timeout = multiplier x baseline time")
      ->capture_default_str();
  bench_cmd->add_option("--charge", charge, "gen_time charged in races: winner | max")
      ->check(CLI::IsMember({"winner", "max"}))
      ->capture_default_str();
  bench_cmd->add_option("--parallel", parallel, "Tasks run concurrently")->capture_default_str();
  bench_cmd->add_option("--seed", seed, "Race launch-order seed")->envname("INVH_SEED");
  common.add_to(bench_cmd);

  auto* report_cmd = app.add_subcommand("report", "Summarise a report written by bench");
  report_cmd->add_option("records", file, "CSV or JSON report")->required();
  report_cmd->add_flag("--summary", summary, "Print aggregate metrics");
  report_cmd->add_flag("--json", common.json_out, "Machine-readable output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*verify_cmd) {
      const VerifierConfig cfg = common.config();
      const Program p = parse_program(read_file(file));
      const Property property = parse_property(prop, p);
      std::vector<Property> assumed;
      for (const std::string& a : assumes) assumed.push_back(candidate_property(a, p));
      const VerifierResult r = verify(p, assumed, property, cfg);
      if (common.json_out) {
        out << result_json(insert_assumes(p, assumed), r).dump(2) << "\n";
      } else {
        out << "verdict: " << to_string(r.verdict) << "\n";
        print_result(out, "result", r);
        if (r.counterexample) print_trace(out, insert_assumes(p, assumed), *r.counterexample);
      }
      return verdict_exit(r.verdict);
    }

    if (*decide_cmd) {
      const VerifierConfig cfg = common.config();
      const Program p = parse_program(read_file(file));
      const Property t = parse_property(target, p);
      const Property q = candidate_property(candidate, p);
      const Judgment j = decide(p, t, q, cfg);
      if (common.json_out) {
        out << judgment_json(j).dump(2) << "\n";
      } else {
        print_judgment(out, j);
      }
      return verdict_exit(j.outcome);
    }

    if (*race_cmd) {
      const VerifierConfig cfg = common.config();
      const Program p = parse_program(read_file(file));
      const Property t = parse_property(target, p);
      CandidateSet cs;
      for (const TaskCandidate& c : parse_candidate_lines(read_file(candidates_file), p)) {
        if (c.rejection) {
          throw ValidationError("candidate '" + c.text + "' rejected: '" +
                                c.rejection->construct + "': " + c.rejection->reason);
        }
        cs.push_back(Candidate{*c.property, c.gen_time_s, c.source});
      }
      const std::size_t given = cs.size();
      cs = dedup_candidates(cs);
      RaceOptions ro;
      ro.workers = workers;
      ro.seed = seed;
      ro.mode = deterministic ? RaceMode::Deterministic : RaceMode::WallClock;
      const RaceResult r = race_best_of_n(p, t, cs, cfg, ro);
      if (common.json_out) {
        json all = json::array();
        for (std::size_t i = 0; i < r.all.size(); ++i) {
          json e = {{"candidate", cs[i].q.predicate.text() + "@" + cs[i].q.location},
                    {"status", std::string(to_string(r.all[i].status))}};
          if (r.all[i].judgment) e["judgment"] = judgment_json(*r.all[i].judgment);
          if (!r.all[i].error.empty()) e["error"] = r.all[i].error;
          all.push_back(e);
        }
        json j = {{"candidates", given},
                  {"unique", cs.size()},
                  {"winner", r.winner ? json(*r.winner) : json(nullptr)},
                  {"race_wall_time_s", r.race_wall_time_s},
                  {"all", all}};
        if (const Judgment* w = r.winning_judgment()) {
          j["outcome"] = std::string(to_string(w->outcome));
          j["rule"] = std::string(to_string(w->rule));
        } else {
          j["outcome"] = "U";
        }
        out << j.dump(2) << "\n";
      } else {
        out << fmt::format("candidates: {} ({} unique)\n", given, cs.size());
        for (std::size_t i = 0; i < r.all.size(); ++i) {
          const CandidateRun& c = r.all[i];
          out << fmt::format("  [{}] {}@{}: {}", i, cs[i].q.predicate.text(), cs[i].q.location,
                             to_string(c.status));
          if (c.judgment) {
            out << fmt::format(" {} {}", to_string(c.judgment->outcome),
                               to_string(c.judgment->rule));
          }
          out << "\n";
        }
        if (const Judgment* w = r.winning_judgment()) {
          out << fmt::format("winner: {}\n", *r.winner);
          print_judgment(out, *w);
        } else {
          out << "winner: none\noutcome: U\n";
        }
        out << fmt::format("race time: {:.6f} s\n", r.race_wall_time_s);
      }
      return r.winner ? kExitConclusive : kExitInconclusive;
    }

    if (*hoare_cmd) {
      const Program p = parse_program(read_file(file));
      const Width w(common.width);
      auto pred = [&](const std::string& text) {
        if (auto why = validate_pure(text)) {
          throw ValidationError("predicate rejected: '" + why->construct + "': " + why->reason);
        }
        return parse_predicate(text, p);
      };
      const LoopSpec spec = make_loop_spec(p, loop_label, pred(pre), pred(inv), pred(post));
      const HoareResult r = check_hoare_while(spec, w, common.budget);
      if (common.json_out) {
        json j = {{"result", std::string(to_string(r.outcome))}};
        if (r.premise) j["premise"] = std::string(to_string(*r.premise));
        if (r.witness) j["witness"] = state_json(p, *r.witness);
        if (r.successor) j["successor"] = state_json(p, *r.successor);
        out << j.dump(2) << "\n";
      } else {
        out << "result: " << to_string(r.outcome) << "\n";
        if (r.premise) out << "premise: " << to_string(*r.premise) << "\n";
        if (r.witness) out << "witness: " << state_text(p, *r.witness) << "\n";
        if (r.successor) out << "successor: " << state_text(p, *r.successor) << "\n";
      }
      return r.outcome == HoareResult::Outcome::BudgetExceeded ? kExitInconclusive
                                                               : kExitConclusive;
    }

    if (*bench_cmd) {
      RunOptions ro;
      ro.verifier = common.config();
      ro.timeout_multiplier = multiplier;
      ro.charge = charge == "max" ? GenTimeCharge::Max : GenTimeCharge::Winner;
      ro.race.seed = seed;
      if (!std::filesystem::is_directory(file)) throw Error("not a directory: " + file);
      const auto records = run_directory(file, ro, parallel);
      const MetricsSummary m = compute_metrics(records);
      emit_report(out_path, records, m, format == "json" ? ReportFormat::Json : ReportFormat::Csv);
      if (common.json_out) {
        std::ostringstream ss;
        emit_report(ss, records, m, ReportFormat::Json);
        out << ss.str();
      } else {
        out << fmt::format("wrote {} records to {}\n", records.size(), out_path);
        out << format_summary(m);
      }
      return kExitConclusive;
    }

    if (*report_cmd) {
      const auto records = load_report(file);
      const MetricsSummary m = compute_metrics(records);
      if (common.json_out) {
        std::ostringstream ss;
        emit_report(ss, summary ? std::vector<RunRecord>{} : records, m, ReportFormat::Json);
        out << ss.str();
      } else if (summary) {
        out << format_summary(m);
      } else {
        emit_report(out, records, m, ReportFormat::Csv);
      }
      return kExitConclusive;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace invh
