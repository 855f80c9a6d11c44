#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>
#include <unistd.h>

#include "invh/bench.hpp"
#include "support/families.hpp"

using namespace invh;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("invh-bench-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name) << text;
    return path_ / name;
  }

 private:
  fs::path path_;
};

const char* kFig1Task = R"({
  "id": "fig1",
  "program": "fig1.mw",
  "width": 8,
  "target": {"pred": "x != 145", "label": "E"},
  "candidates": [{"pred": "x % 7 == 3", "label": "B", "gen_time_s": 0.0, "source": "hand"}],
  "verifier": {"timeout_multiplier": 1000.0}
})";

RunRecord record(std::optional<double> speedup, bool correct = false) {
  RunRecord r;
  r.task_id = "t";
  r.split = "easy";
  r.speedup = speedup;
  r.correct_invariant = correct;
  return r;
}

RunOptions quiet() {
  RunOptions o;
  o.verifier.timeout_s.reset();
  return o;
}

}  // namespace

TEST(LoadTask, Fig1) {
  TempDir d;
  d.write("fig1.mw", fam::kFig1);
  const Task t = load_task(d.write("fig1.json", kFig1Task));
  EXPECT_EQ(t.id, "fig1");
  EXPECT_EQ(t.width.bits(), 8u);
  EXPECT_EQ(t.target.location, "E");
  ASSERT_EQ(t.candidates.size(), 1u);
  EXPECT_EQ(t.candidates[0].source, "hand");
  ASSERT_TRUE(t.candidates[0].property);
  EXPECT_EQ(t.overrides.timeout_multiplier, 1000.0);
}

TEST(LoadTask, UnknownLabelNamesIt) {
  TempDir d;
  d.write("fig1.mw", fam::kFig1);
  const auto path = d.write("bad.json", R"({"id": "bad", "program": "fig1.mw",
      "target": {"pred": "x > 0", "label": "Nowhere"}})");
  try {
    load_task(path);
    FAIL();
  } catch (const TaskError& e) {
    EXPECT_NE(std::string(e.what()).find("Nowhere"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("bad"), std::string::npos) << e.what();
  }
}

TEST(LoadTask, ZeroCandidatesIsValid) {
  TempDir d;
  d.write("fig1.mw", fam::kFig1);
  const Task t = load_task(d.write("t.json", R"({"id": "base", "program": "fig1.mw",
      "target": {"pred": "x != 145", "label": "E"}, "candidates": []})"));
  EXPECT_TRUE(t.candidates.empty());
  const RunRecord r = run_task(t, quiet());
  EXPECT_EQ(r.baseline_verdict, Verdict::T);
  EXPECT_FALSE(r.outcome);
  EXPECT_FALSE(r.speedup);
}

TEST(LoadTask, MalformedFiles) {
  TempDir d;
  d.write("fig1.mw", fam::kFig1);
  EXPECT_THROW(load_task(d.write("a.json", "{not json")), TaskError);
  EXPECT_THROW(load_task(d.write("b.json", R"({"id": "b", "program": "fig1.mw"})")), TaskError);
  EXPECT_THROW(load_task(d.write("c.json", R"({"id": "c", "program": "missing.mw",
      "target": {"pred": "x > 0", "label": "E"}})")), TaskError);
  EXPECT_THROW(load_task(d.write("d.json", R"({"id": "d", "program": "fig1.mw", "width": 40,
      "target": {"pred": "x > 0", "label": "E"}})")), TaskError);
}

TEST(Split, Thresholds) {
  EXPECT_EQ(classify_split(12), Split::Easy);
  EXPECT_EQ(classify_split(30), Split::Easy);
  EXPECT_EQ(classify_split(45), Split::Hard);
  EXPECT_EQ(classify_split(600), Split::Hard);
  EXPECT_EQ(classify_split(700), Split::Unsolved);
  EXPECT_EQ(classify_split(5, {1, 10}), Split::Hard);
}

TEST(Metrics, MixedFixture) {
  const MetricsSummary m = compute_metrics({record(2.0), record(0.5), record(std::nullopt)});
  EXPECT_NEAR(m.pct_speedup, 1.0 / 3.0, 1e-9);
  ASSERT_TRUE(m.speedup_gt1);
  EXPECT_NEAR(*m.speedup_gt1, 2.0, 1e-9);
  EXPECT_NEAR(m.speedup_all, 4.0 / 3.0, 1e-9);
}

TEST(Metrics, AllAbsent) {
  const MetricsSummary m = compute_metrics({record(std::nullopt), record(std::nullopt)});
  EXPECT_EQ(m.pct_speedup, 0.0);
  EXPECT_EQ(m.speedup_all, 1.0);
  EXPECT_FALSE(m.speedup_gt1);
  const std::string text = format_summary(m);
  EXPECT_NE(text.find("% speedup: 0.0%"), std::string::npos) << text;
  EXPECT_NE(text.find("speedup>1: 1.00x"), std::string::npos) << text;
  EXPECT_NE(text.find("speedup_all: 1.00x"), std::string::npos) << text;
}

TEST(Metrics, OneOfHundredThirteen) {
  std::vector<RunRecord> rs(113, record(std::nullopt));
  rs[40] = record(1.2);
  const MetricsSummary m = compute_metrics(rs);
  EXPECT_NE(format_summary(m).find("% speedup: 0.9%"), std::string::npos);
}

TEST(Metrics, ClampingIsIdempotent) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> sp(0.1, 5.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<RunRecord> rs, clamped;
    for (int k = 0; k < 1 + static_cast<int>(rng() % 12); ++k) {
      std::optional<double> s;
      if (rng() % 3) s = sp(rng);
      rs.push_back(record(s, rng() % 2));
      clamped.push_back(record(s && *s <= 1.0 ? std::optional<double>(1.0) : s, rs.back().correct_invariant));
    }
    const auto a = compute_metrics(rs), b = compute_metrics(clamped);
    EXPECT_NEAR(a.speedup_all, b.speedup_all, 1e-12);
    EXPECT_EQ(a.speedup_gt1, b.speedup_gt1);
    EXPECT_EQ(a.pct_speedup, b.pct_speedup);
    EXPECT_GE(a.speedup_all, 1.0);
    if (a.speedup_gt1) EXPECT_LE(a.speedup_all, *a.speedup_gt1 + 1e-12);
  }
}

TEST(Report, CsvShape) {
  std::ostringstream two, none;
  emit_report(two, {record(2.0), record(std::nullopt)}, {}, ReportFormat::Csv);
  emit_report(none, {}, {}, ReportFormat::Csv);
  const std::string header =
      "task_id,split,baseline_verdict,baseline_time_s,baseline_cost,outcome,rule,d_a,d_b,"
      "gen_time_s,assisted_time_s,speedup,correct_invariant,winner_index\n";
  EXPECT_EQ(none.str(), header);
  const std::string text = two.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  EXPECT_TRUE(text.starts_with(header));
}

TEST(Report, RoundTripIsExact) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> t(1e-7, 900.0);
  std::vector<RunRecord> rs;
  for (int i = 0; i < 50; ++i) {
    RunRecord r;
    r.task_id = i % 7 ? "task_" + std::to_string(i) : "odd, \"name\"";
    r.split = i % 3 ? "easy" : "unsolved";
    r.baseline_verdict = i % 4 ? std::optional(Verdict::T) : std::nullopt;
    r.baseline_time_s = t(rng);
    r.baseline_cost = rng() % 1000000;
    if (i % 2) {
      r.outcome = Verdict::F;
      r.rule = Rule::DecFalse;
      r.d_a = Verdict::U;
      r.d_b = Verdict::F;
      r.assisted_time_s = t(rng);
      r.speedup = r.baseline_time_s / *r.assisted_time_s;
      r.winner_index = i % 5;
    }
    r.gen_time_s = t(rng) / 1000;
    r.correct_invariant = i % 3 == 1;
    if (i == 5) r.error = "something broke";
    rs.push_back(r);
  }
  TempDir d;
  const MetricsSummary m = compute_metrics(rs);
  emit_report(d.path() / "r.json", rs, m, ReportFormat::Json);
  EXPECT_EQ(load_report(d.path() / "r.json"), rs);
  emit_report(d.path() / "r.csv", rs, m, ReportFormat::Csv);
  auto from_csv = load_report(d.path() / "r.csv");
  for (auto& r : rs) r.error.clear();  // not a CSV column
  EXPECT_EQ(from_csv, rs);
}

TEST(Report, UnwritablePath) {
  EXPECT_THROW(emit_report(fs::path("/nonexistent/dir/r.csv"), {}, {}, ReportFormat::Csv), Error);
}

TEST(RunTask, Fig1) {
  TempDir d;
  d.write("fig1.mw", fam::kFig1);
  const RunRecord r = run_task(load_task(d.write("fig1.json", kFig1Task)), quiet());
  EXPECT_TRUE(r.correct_invariant);
  EXPECT_EQ(r.outcome, Verdict::T);
  EXPECT_EQ(r.rule, Rule::DecProp);
  EXPECT_EQ(r.winner_index, 0u);
  EXPECT_EQ(r.split, "easy");
}

TEST(RunTask, RejectedCandidateMakesNoCalls) {
  TempDir d;
  d.write("fig1.mw", fam::kFig1);
  const Task t = load_task(d.write("t.json", R"({"id": "imp", "program": "fig1.mw",
      "target": {"pred": "x != 145", "label": "E"},
      "candidates": [{"pred": "x = 3", "label": "B"}]})"));
  ASSERT_TRUE(t.candidates[0].rejection);
  EXPECT_EQ(t.candidates[0].rejection->construct, "=");
  const RunRecord r = run_task(t, quiet());
  EXPECT_FALSE(r.correct_invariant);
  EXPECT_FALSE(r.d_a);
  EXPECT_FALSE(r.d_b);
  EXPECT_FALSE(r.assisted_time_s);
}

TEST(RunTask, SpeedupFamilyMember) {
  const fam::SpeedupMember m = fam::speedup_family()[9];
  TempDir d;
  d.write("p.mw", m.source);
  const Task t = load_task(d.write("t.json", R"({"id": ")" + m.id + R"(", "program": "p.mw", "width": )" +
                                                std::to_string(m.bits) + R"(,
      "target": {"pred": ")" + m.target_pred + R"(", "label": ")" + m.target_label + R"("},
      "candidates": [{"pred": ")" + m.candidate_pred + R"(", "label": ")" + m.candidate_label + R"("}]})"));
  const RunRecord r = run_task(t);
  EXPECT_EQ(r.baseline_verdict, Verdict::T);
  EXPECT_EQ(r.outcome, Verdict::T);
  ASSERT_TRUE(r.speedup);
  EXPECT_GT(*r.speedup, 1.0);
  EXPECT_TRUE(r.correct_invariant);
}

TEST(RunTask, CandidateTimeoutPolicy) {
  VerifierConfig cfg;
  cfg.timeout_s = 600;
  VerifierResult base;
  base.verdict = Verdict::T;
  base.wall_time_s = 0.25;
  EXPECT_DOUBLE_EQ(*candidate_config(cfg, base, 1.0).timeout_s, 0.25);
  EXPECT_DOUBLE_EQ(*candidate_config(cfg, base, 3.0).timeout_s, 0.75);
  cfg.timeout_s.reset();
  EXPECT_DOUBLE_EQ(*candidate_config(cfg, base, 1.0).timeout_s, 0.25);
  base.verdict = Verdict::U;
  EXPECT_FALSE(candidate_config(cfg, base, 1.0).timeout_s);
}

TEST(RunTask, CandidateQueriesStayWithinBaselineTime) {
  // Baseline is an instant interval proof; the candidate needs a long
  // enumeration, which the policy must cut off.
  TempDir d;
  d.write("p.mw", "int a; int b; int c; a = nondet(); b = nondet(); c = nondet(); @E: skip;\n");
  const Task t = load_task(d.write("t.json", R"({"id": "slow", "program": "p.mw", "width": 10,
      "target": {"pred": "a <= 1023", "label": "E"},
      "candidates": [{"pred": "a + b + c != 5000", "label": "E"}]})"));
  const RunRecord r = run_task(t);
  EXPECT_EQ(r.baseline_verdict, Verdict::T);
  EXPECT_EQ(r.d_a, Verdict::U);
  EXPECT_LT(*r.assisted_time_s, r.baseline_time_s + 0.5);
}

TEST(RunTask, GeneratorCommand) {
  TempDir d;
  d.write("fig1.mw", fam::kFig1);
  const Task t = load_task(d.write("t.json", std::string(R"({"id": "gen", "program": "fig1.mw",
      "target": {"pred": "x != 145", "label": "E"},
      "generator_cmd": ")") + STUB_DIR + R"(/generator.sh {program_path}",
      "verifier": {"timeout_multiplier": 1000.0}})"));
  const RunRecord r = run_task(t, quiet());
  EXPECT_EQ(r.outcome, Verdict::T);
  EXPECT_TRUE(r.correct_invariant);
  EXPECT_EQ(r.winner_index, 0u);
  EXPECT_GT(r.gen_time_s, 0.0);
}

TEST(RunTask, RaceChargesWinnerGenTime) {
  TempDir d;
  d.write("fig1.mw", fam::kFig1);
  const auto path = d.write("t.json", R"({"id": "race", "program": "fig1.mw",
      "target": {"pred": "x != 145", "label": "E"},
      "candidates": [{"pred": "x > 200", "label": "B", "gen_time_s": 5.0},
                     {"pred": "x % 7 == 3", "label": "B", "gen_time_s": 2.0},
                     {"pred": "x%7==3", "label": "B", "gen_time_s": 9.0}],
      "verifier": {"timeout_multiplier": 1000.0}})");
  RunOptions o = quiet();
  const RunRecord r = run_task(load_task(path), o);
  EXPECT_EQ(r.winner_index, 1u);
  EXPECT_EQ(r.gen_time_s, 2.0);
  o.charge = GenTimeCharge::Max;
  EXPECT_EQ(run_task(load_task(path), o).gen_time_s, 5.0);  // duplicate dropped before charging
}

TEST(RunDirectory, EveryTaskGetsARecord) {
  TempDir d;
  d.write("fig1.mw", fam::kFig1);
  d.write("a.json", kFig1Task);
  d.write("b.json", R"({"id": "broken", "program": "fig1.mw", "target": {"pred": "x >", "label": "E"}})");
  d.write("c.json", "[]");
  d.write("notes.txt", "ignored");
  for (unsigned parallel : {1u, 3u}) {
    const auto rs = run_directory(d.path(), quiet(), parallel);
    ASSERT_EQ(rs.size(), 3u);
    EXPECT_EQ(rs[0].task_id, "fig1");
    EXPECT_EQ(rs[0].outcome, Verdict::T);
    EXPECT_EQ(rs[1].task_id, "broken");
    EXPECT_EQ(rs[1].split, "error");
    EXPECT_FALSE(rs[1].error.empty());
    EXPECT_EQ(rs[2].split, "error");
  }
}
