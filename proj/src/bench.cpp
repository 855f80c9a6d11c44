#include "invh/bench.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "invh/subprocess.hpp"

namespace invh {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

}  // namespace

TaskCandidate make_candidate(std::string_view pred, std::string_view label, const Program& p,
                             double gen_time_s, std::string source) {
  TaskCandidate c;
  c.text = std::string(trim(pred)) + "@" + std::string(trim(label));
  c.gen_time_s = gen_time_s;
  c.source = std::move(source);
  c.rejection = validate_pure(pred);
  if (!c.rejection) c.property = make_property(pred, label, p);
  return c;
}

std::vector<TaskCandidate> parse_candidate_lines(std::string_view text, const Program& p,
                                                 double gen_time_s, const std::string& source) {
  std::vector<TaskCandidate> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string_view spec = trim(line);
    if (spec.empty()) continue;
    const auto at = spec.rfind('@');
    if (at == std::string_view::npos) {
      throw SyntaxError(static_cast<int>(out.size()) + 1, 1,
                        "expected PRED@LABEL, found '" + std::string(spec) + "'");
    }
    out.push_back(make_candidate(spec.substr(0, at), spec.substr(at + 1), p, gen_time_s, source));
  }
  return out;
}

Task load_task(const fs::path& path) {
  std::string id = path.stem().string();
  try {
    const json j = json::parse(read_file(path));
    id = j.at("id").get<std::string>();
    const fs::path program_path = path.parent_path() / j.at("program").get<std::string>();
    const Program program = parse_program(read_file(program_path));
    const json& target = j.at("target");
    Task t{id,
           program_path,
           program,
           Width(j.value("width", 8u)),
           make_property(target.at("pred").get<std::string>(),
                         target.at("label").get<std::string>(), program),
           {},
           std::nullopt,
           {}};
    for (const json& c : j.value("candidates", json::array())) {
      t.candidates.push_back(make_candidate(c.at("pred").get<std::string>(),
                                            c.at("label").get<std::string>(), t.program,
                                            c.value("gen_time_s", 0.0),
                                            c.value("source", std::string{})));
    }
    if (j.contains("generator_cmd")) t.generator_cmd = j["generator_cmd"].get<std::string>();
    if (j.contains("verifier")) {
      const json& v = j["verifier"];
      auto& o = t.overrides;
      if (v.contains("budget")) o.budget = v["budget"].get<std::uint64_t>();
      if (v.contains("timeout_s")) {
        o.timeout_s = v["timeout_s"].is_null() ? std::optional<double>{}
                                               : std::optional<double>{v["timeout_s"].get<double>()};
      }
      if (v.contains("backend")) o.backend = v["backend"].get<std::string>();
      if (v.contains("widening_delay")) o.widening_delay = v["widening_delay"].get<unsigned>();
      if (v.contains("timeout_multiplier")) {
        o.timeout_multiplier = v["timeout_multiplier"].get<double>();
      }
    }
    return t;
  } catch (const json::exception& e) {
    throw TaskError("task " + id + ": malformed task file: " + e.what());
  } catch (const std::exception& e) {
    throw TaskError("task " + id + ": " + e.what());
  }
}

std::string_view to_string(Split s) {
  switch (s) {
    case Split::Easy: return "easy";
    case Split::Hard: return "hard";
    case Split::Unsolved: return "unsolved";
  }
  return "?";
}

Split classify_split(double t, const SplitThresholds& th) {
  if (t <= th.t_easy) return Split::Easy;
  if (t <= th.t_max) return Split::Hard;
  return Split::Unsolved;
}

namespace {

std::vector<TaskCandidate> generated_candidates(const Task& t, std::optional<double> timeout_s) {
  std::string cmd = *t.generator_cmd;
  static constexpr std::string_view kPlaceholder = "{program_path}";
  if (auto at = cmd.find(kPlaceholder); at != std::string::npos) {
    cmd.replace(at, kPlaceholder.size(), shell_quote(fs::absolute(t.program_path).string()));
  }
  const ProcessResult pr = run_process(cmd, timeout_s);
  std::vector<TaskCandidate> out;
  std::istringstream in(pr.stdout_text);
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view spec = trim(line);
    const auto at = spec.rfind('@');
    if (spec.empty() || spec.front() == '#' || at == std::string_view::npos) continue;
    try {
      out.push_back(make_candidate(spec.substr(0, at), spec.substr(at + 1), t.program,
                                   pr.wall_time_s, "generator"));
    } catch (const Error& e) {
      TaskCandidate bad;
      bad.text = std::string(spec);
      bad.gen_time_s = pr.wall_time_s;
      bad.source = "generator";
      bad.rejection = Rejection{std::string(spec), e.what()};
      out.push_back(std::move(bad));
    }
  }
  return out;
}

}  // namespace

VerifierConfig candidate_config(const VerifierConfig& cfg, const VerifierResult& baseline,
                                double multiplier) {
  VerifierConfig out = cfg;
  if (conclusive(baseline.verdict)) out.timeout_s = multiplier * baseline.wall_time_s;
  return out;
}

RunRecord run_task(const Task& t, const RunOptions& opts) {
  VerifierConfig cfg = opts.verifier;
  cfg.width = t.width;
  const auto& o = t.overrides;
  if (o.budget) cfg.budget = *o.budget;
  if (o.timeout_s) cfg.timeout_s = *o.timeout_s;
  if (o.backend) set_backend(cfg, *o.backend);
  if (o.widening_delay) cfg.widening_delay = *o.widening_delay;
  cfg.validate();
  const double multiplier = o.timeout_multiplier.value_or(opts.timeout_multiplier);

  RunRecord rec;
  rec.task_id = t.id;
  const VerifierResult base = baseline_solve(t.program, t.target, cfg);
  rec.baseline_verdict = base.verdict;
  rec.baseline_time_s = base.wall_time_s;
  rec.baseline_cost = base.cost;
  rec.split = conclusive(base.verdict)
                  ? std::string(to_string(classify_split(base.wall_time_s, opts.thresholds)))
                  : std::string(to_string(Split::Unsolved));

  std::vector<TaskCandidate> all = t.candidates;
  if (t.generator_cmd) {
    auto more = generated_candidates(t, cfg.timeout_s);
    all.insert(all.end(), more.begin(), more.end());
  }

  // Pure candidates, deduplicated, remembering their position in `all`.
  CandidateSet cs;
  std::vector<std::size_t> origin;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (!all[i].property) continue;
    cs.push_back(Candidate{*all[i].property, all[i].gen_time_s, all[i].source});
    origin.push_back(i);
  }
  {
    const CandidateSet unique = dedup_candidates(cs);
    std::vector<std::size_t> kept;
    std::size_t k = 0;
    for (std::size_t i = 0; i < cs.size() && k < unique.size(); ++i) {
      if (cs[i].q == unique[k].q) {
        kept.push_back(origin[i]);
        ++k;
      }
    }
    cs = unique;
    origin = std::move(kept);
  }
  if (cs.empty()) return rec;

  const VerifierConfig ccfg = candidate_config(cfg, base, multiplier);

  double max_gen = 0.0;
  for (const Candidate& c : cs) max_gen = std::max(max_gen, c.gen_time_s.value_or(0.0));

  const Judgment* decided = nullptr;
  std::optional<Judgment> single;
  RaceResult race;
  double wall = 0.0;
  if (cs.size() == 1) {
    single = decide(t.program, t.target, cs[0].q, ccfg);
    decided = &*single;
    wall = single->decide_wall_time_s;
    rec.correct_invariant = single->d_a.verdict == Verdict::T;
    rec.gen_time_s = max_gen;
    if (conclusive(single->outcome)) rec.winner_index = origin[0];
  } else {
    race = race_best_of_n(t.program, t.target, cs, ccfg, opts.race);
    decided = race.winning_judgment();
    wall = race.race_wall_time_s;
    for (const CandidateRun& r : race.all) {
      if (r.judgment && r.judgment->d_a.verdict == Verdict::T) rec.correct_invariant = true;
    }
    rec.gen_time_s = race.winner && opts.charge == GenTimeCharge::Winner
                         ? cs[*race.winner].gen_time_s.value_or(0.0)
                         : max_gen;
    if (race.winner) rec.winner_index = origin[*race.winner];
  }

  rec.assisted_time_s = wall + rec.gen_time_s;
  if (decided) {
    rec.outcome = decided->outcome;
    rec.rule = decided->rule;
    rec.d_a = decided->d_a.verdict;
    rec.d_b = decided->d_b.verdict;
  } else {
    rec.outcome = Verdict::U;
  }
  if (conclusive(base.verdict) && rec.outcome == base.verdict && *rec.assisted_time_s > 0) {
    rec.speedup = base.wall_time_s / *rec.assisted_time_s;
  }
  return rec;
}

std::vector<RunRecord> run_directory(const fs::path& dir, const RunOptions& opts,
                                     unsigned parallel_tasks) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<RunRecord> records(files.size());
  auto run_one = [&](std::size_t i) {
    try {
      records[i] = run_task(load_task(files[i]), opts);
    } catch (const std::exception& e) {
      RunRecord r;
      r.task_id = files[i].stem().string();
      if (const auto* te = dynamic_cast<const TaskError*>(&e)) {
        // "task ID: ..." carries the declared id
        const std::string msg = te->what();
        const auto colon = msg.find(':');
        if (msg.starts_with("task ") && colon != std::string::npos) {
          r.task_id = msg.substr(5, colon - 5);
        }
      }
      r.split = "error";
      r.error = e.what();
      records[i] = std::move(r);
    }
  };

  if (parallel_tasks <= 1) {
    for (std::size_t i = 0; i < files.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < parallel_tasks; ++k) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < files.size();) run_one(i);
      });
    }
  }
  return records;
}

MetricsSummary compute_metrics(const std::vector<RunRecord>& records) {
  MetricsSummary m;
  m.records = records.size();
  if (records.empty()) return m;
  std::size_t correct = 0;
  std::size_t faster = 0;
  double faster_sum = 0.0;
  for (const RunRecord& r : records) {
    if (r.correct_invariant) ++correct;
    if (r.speedup && *r.speedup > 1.0) {
      ++faster;
      faster_sum += *r.speedup;
    }
    ++m.split_counts[r.split];
  }
  const auto n = static_cast<double>(records.size());
  m.pct_correct_invariant = static_cast<double>(correct) / n;
  m.pct_speedup = static_cast<double>(faster) / n;
  if (faster > 0) m.speedup_gt1 = faster_sum / static_cast<double>(faster);
  m.speedup_all = (faster_sum + static_cast<double>(records.size() - faster)) / n;
  return m;
}

std::string format_summary(const MetricsSummary& m) {
  std::string out = fmt::format(
      "records: {}\n% correct invariant: {:.1f}%\n% speedup: {:.1f}%\nspeedup>1: {:.2f}x\n"
      "speedup_all: {:.2f}x\n",
      m.records, 100.0 * m.pct_correct_invariant, 100.0 * m.pct_speedup,
      m.speedup_gt1.value_or(1.0), m.speedup_all);
  out += "splits:";
  for (const auto& [split, count] : m.split_counts) out += fmt::format(" {}={}", split, count);
  return out + "\n";
}

// ---------------------------------------------------------------------------
// Reports

namespace {

constexpr std::array<std::string_view, 14> kColumns = {
    "task_id",    "split",        "baseline_verdict", "baseline_time_s", "baseline_cost",
    "outcome",    "rule",         "d_a",              "d_b",             "gen_time_s",
    "assisted_time_s", "speedup", "correct_invariant", "winner_index"};

template <class T>
std::string opt_text(const std::optional<T>& v) {
  if (!v) return {};
  if constexpr (std::is_same_v<T, double> || std::is_same_v<T, std::size_t>) {
    return fmt::format("{}", *v);
  } else {
    return std::string(to_string(*v));
  }
}

std::vector<std::string> csv_row(const RunRecord& r) {
  return {r.task_id,
          r.split,
          opt_text(r.baseline_verdict),
          fmt::format("{}", r.baseline_time_s),
          fmt::format("{}", r.baseline_cost),
          opt_text(r.outcome),
          opt_text(r.rule),
          opt_text(r.d_a),
          opt_text(r.d_b),
          fmt::format("{}", r.gen_time_s),
          opt_text(r.assisted_time_s),
          opt_text(r.speedup),
          r.correct_invariant ? "true" : "false",
          opt_text(r.winner_index)};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json verdict_json(const std::optional<Verdict>& v) {
  return v ? json(std::string(to_string(*v))) : json(nullptr);
}

template <class T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json record_json(const RunRecord& r) {
  json j = {{"task_id", r.task_id},
            {"split", r.split},
            {"baseline_verdict", verdict_json(r.baseline_verdict)},
            {"baseline_time_s", r.baseline_time_s},
            {"baseline_cost", r.baseline_cost},
            {"outcome", verdict_json(r.outcome)},
            {"rule", r.rule ? json(std::string(to_string(*r.rule))) : json(nullptr)},
            {"d_a", verdict_json(r.d_a)},
            {"d_b", verdict_json(r.d_b)},
            {"gen_time_s", r.gen_time_s},
            {"assisted_time_s", opt_json(r.assisted_time_s)},
            {"speedup", opt_json(r.speedup)},
            {"correct_invariant", r.correct_invariant},
            {"winner_index", opt_json(r.winner_index)}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

json summary_json(const MetricsSummary& m) {
  return {{"records", m.records},
          {"pct_correct_invariant", m.pct_correct_invariant},
          {"pct_speedup", m.pct_speedup},
          {"speedup_gt1", opt_json(m.speedup_gt1)},
          {"speedup_all", m.speedup_all},
          {"split_counts", m.split_counts}};
}

std::optional<Verdict> verdict_field(std::string_view s, std::string_view column) {
  if (s.empty()) return std::nullopt;
  if (auto v = parse_verdict(s)) return v;
  throw Error("report: bad " + std::string(column) + " value '" + std::string(s) + "'");
}

std::optional<Rule> rule_field(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (auto r = parse_rule(s)) return r;
  throw Error("report: bad rule value '" + std::string(s) + "'");
}

double double_field(const std::string& s) {
  std::size_t used = 0;
  const double d = std::stod(s, &used);
  if (used != s.size()) throw Error("report: bad number '" + s + "'");
  return d;
}

std::optional<double> opt_double_field(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return double_field(s);
}

RunRecord record_from_fields(const std::vector<std::string>& f) {
  RunRecord r;
  r.task_id = f[0];
  r.split = f[1];
  r.baseline_verdict = verdict_field(f[2], "baseline_verdict");
  r.baseline_time_s = double_field(f[3]);
  r.baseline_cost = std::stoull(f[4]);
  r.outcome = verdict_field(f[5], "outcome");
  r.rule = rule_field(f[6]);
  r.d_a = verdict_field(f[7], "d_a");
  r.d_b = verdict_field(f[8], "d_b");
  r.gen_time_s = double_field(f[9]);
  r.assisted_time_s = opt_double_field(f[10]);
  r.speedup = opt_double_field(f[11]);
  if (f[12] != "true" && f[12] != "false") throw Error("report: bad correct_invariant");
  r.correct_invariant = f[12] == "true";
  if (!f[13].empty()) r.winner_index = std::stoull(f[13]);
  return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n') {
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else if (c != '\r') {
      field += c;
      any = true;
    }
  }
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string verdict_text(const json& v) { return v.is_null() ? "" : v.get<std::string>(); }

std::string number_text(const json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return fmt::format("{}", v.get<double>());
  return v.dump();
}

}  // namespace

void emit_report(std::ostream& out, const std::vector<RunRecord>& records,
                 const MetricsSummary& summary, ReportFormat format) {
  if (format == ReportFormat::Json) {
    json j = {{"records", json::array()}, {"summary", summary_json(summary)}};
    for (const RunRecord& r : records) j["records"].push_back(record_json(r));
    out << j.dump(2) << "\n";
    return;
  }
  std::string header;
  for (std::string_view c : kColumns) header += (header.empty() ? "" : ",") + std::string(c);
  out << header << "\n";
  for (const RunRecord& r : records) {
    std::string line;
    bool first = true;
    for (const std::string& f : csv_row(r)) {
      if (!first) line += ',';
      line += csv_field(f);
      first = false;
    }
    out << line << "\n";
  }
}

void emit_report(const fs::path& path, const std::vector<RunRecord>& records,
                 const MetricsSummary& summary, ReportFormat format) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  emit_report(out, records, summary, format);
  if (!out.flush()) throw Error("cannot write " + path.string());
}

std::vector<RunRecord> load_report(const fs::path& path) {
  const std::string text = read_file(path);
  const std::string_view body = trim(text);
  std::vector<RunRecord> out;
  if (body.starts_with('{')) {
    try {
      const json j = json::parse(body);
      for (const json& r : j.at("records")) {
        std::vector<std::string> f = {r.at("task_id").get<std::string>(),
                                      r.at("split").get<std::string>(),
                                      verdict_text(r.at("baseline_verdict")),
                                      number_text(r.at("baseline_time_s")),
                                      number_text(r.at("baseline_cost")),
                                      verdict_text(r.at("outcome")),
                                      verdict_text(r.at("rule")),
                                      verdict_text(r.at("d_a")),
                                      verdict_text(r.at("d_b")),
                                      number_text(r.at("gen_time_s")),
                                      number_text(r.at("assisted_time_s")),
                                      number_text(r.at("speedup")),
                                      r.at("correct_invariant").get<bool>() ? "true" : "false",
                                      number_text(r.at("winner_index"))};
        RunRecord rec = record_from_fields(f);
        // JSON keeps doubles exactly; don't go through text for them
        rec.baseline_time_s = r["baseline_time_s"].get<double>();
        rec.gen_time_s = r["gen_time_s"].get<double>();
        if (!r["assisted_time_s"].is_null()) rec.assisted_time_s = r["assisted_time_s"].get<double>();
        if (!r["speedup"].is_null()) rec.speedup = r["speedup"].get<double>();
        rec.error = r.value("error", std::string{});
        out.push_back(std::move(rec));
      }
    } catch (const json::exception& e) {
      throw Error("report " + path.string() + ": " + e.what());
    }
    return out;
  }

  auto rows = parse_csv(text);
  if (rows.empty()) throw Error("report " + path.string() + ": empty file");
  std::vector<std::string> header(kColumns.begin(), kColumns.end());
  if (rows[0] != header) throw Error("report " + path.string() + ": unexpected header");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != kColumns.size()) {
      throw Error(fmt::format("report {}: row {} has {} fields", path.string(), i + 1,
                              rows[i].size()));
    }
    try {
      out.push_back(record_from_fields(rows[i]));
    } catch (const std::logic_error&) {
      throw Error(fmt::format("report {}: bad value in row {}", path.string(), i + 1));
    }
  }
  return out;
}

}  // namespace invh
