#include "capcalc/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace capcalc;
using namespace capcalc::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "capcalc");
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

Rational R(std::int64_t p, std::int64_t q = 1) { return make_rational(p, q); }

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("capcalc_cli_test_" + name);
}

}  // namespace

TEST(RfCurve, EndpointAndBoundary) {
  auto rows = emit_rf_curve(R(31, 25), 2, 95);
  ASSERT_EQ(rows.size(), 96u);
  EXPECT_EQ(rows.back().b, 2);
  ASSERT_TRUE(rows.back().rf.has_value());
  EXPECT_EQ(*rows.back().rf, R(289, 36));
  EXPECT_EQ(to_decimal(*rows.back().rf, 10), "8.027777778");
  EXPECT_TRUE(std::is_sorted(rows.begin(), rows.end(), [](auto& x, auto& y) { return x.b < y.b; }));

  // step 1/125 from 31/25 lands on 36/25 = (6/5)^2 after 25 steps
  auto marked = emit_rf_curve(R(31, 25), R(36, 25), 25);
  EXPECT_EQ(marked.back().b, R(36, 25));
  EXPECT_EQ(marked.back().class_name, "unknown");
  EXPECT_FALSE(marked.back().rf.has_value());

  EXPECT_EQ(emit_rf_curve(R(3, 2), R(8, 5), 1).size(), 2u);
  EXPECT_THROW(emit_rf_curve(R(3, 2), R(8, 5), 0), std::invalid_argument);
  EXPECT_THROW(emit_rf_curve(1, R(8, 5), 3), std::invalid_argument);
  EXPECT_THROW(emit_rf_curve(R(3, 2), R(5, 2), 3), std::invalid_argument);
}

TEST(RfCurve, CsvAndJsonRoundTrip) {
  auto rows = emit_rf_curve(R(31, 25), 2, 200);
  EXPECT_EQ(parse_rf_curve_csv(rf_curve_csv(rows)), rows);
  EXPECT_EQ(parse_rf_curve_json(json::parse(rf_curve_json(rows).dump())), rows);
  EXPECT_EQ(rf_curve_json(rows)["schema_version"], kSchemaVersion);
  EXPECT_NE(rf_curve_csv(rows).find("schema_version=1"), std::string::npos);
}

TEST(SearchJson, RoundTrip) {
  SearchConfig cfg;
  cfg.centers = std::vector<Rational>{8};
  cfg.e_max = 10;
  SearchReport rep = certify_no_obstruction(cfg);
  ASSERT_FALSE(rep.obstructive_found.empty());
  SearchReport back = search_report_from_json(json::parse(to_json(rep).dump()));
  EXPECT_EQ(back.centers_checked, rep.centers_checked);
  EXPECT_EQ(back.pairs_checked, rep.pairs_checked);
  EXPECT_EQ(back.classes_generated, rep.classes_generated);
  ASSERT_EQ(back.obstructive_found.size(), rep.obstructive_found.size());
  for (std::size_t i = 0; i < rep.obstructive_found.size(); ++i) {
    EXPECT_EQ(back.obstructive_found[i].cls, rep.obstructive_found[i].cls);
    EXPECT_EQ(back.obstructive_found[i].b, rep.obstructive_found[i].b);
    EXPECT_EQ(back.obstructive_found[i].mu(), rep.obstructive_found[i].mu());
  }
  EXPECT_EQ(back.cursor, rep.cursor);
}

TEST(Run, RfPrintsExactAndDecimal) {
  auto r = run_cli({"rf", "--b", "8/5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("19220/2401"), std::string::npos);
  EXPECT_NE(r.out.find("8.0049"), std::string::npos);
}

TEST(Run, RfJson) {
  auto r = run_cli({"rf", "--b", "2", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(j["value"], "289/36");
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
}

TEST(Run, RfBoundaryIsValidationError) {
  auto r = run_cli({"rf", "--b", "16/9"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("unknown"), std::string::npos);
}

TEST(Run, Cb8) {
  auto r = run_cli({"cb8", "--b", "3/2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("49/30"), std::string::npos);
}

TEST(Run, Reduce) {
  auto r = run_cli({"reduce", "--a", "9", "--b", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("success (5 moves)"), std::string::npos);
  auto t = run_cli({"reduce", "--a", "8", "--b", "2", "--trace"});
  EXPECT_NE(t.out.find("sqrt(2)"), std::string::npos);
  auto fail = run_cli({"reduce", "--a", "8001/1000", "--b", "8/5"});
  EXPECT_EQ(fail.code, 2);
}

TEST(Run, SmallSearchCertificate) {
  auto r = run_cli({"search", "--qmax", "3", "--emax", "5", "--quiet"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("certificate holds"), std::string::npos);
}

TEST(Run, SearchViolationExitCode) {
  auto r = run_cli({"search", "--center", "8", "--emax", "10", "--quiet", "--format", "json"});
  EXPECT_EQ(r.code, 2);
  json j = json::parse(r.out);
  EXPECT_EQ(j["obstructive_found"].size(), 3u);
}

TEST(Run, SearchCheckpointResume) {
  auto cp = temp_path("checkpoint.json");
  std::filesystem::remove(cp);
  // a checkpoint as an interrupted run would leave it, after the first center
  SearchConfig cfg;
  cfg.q_max = 3;
  cfg.e_max = 6;
  std::atomic<bool> stop{false};
  SearchReport partial = certify_no_obstruction(cfg, [&](const SearchProgress&) { stop = true; }, &stop);
  ASSERT_FALSE(partial.completed);
  {
    std::ofstream f(cp);
    f << json{{"schema_version", kSchemaVersion}, {"cursor", cursor_json(*partial.cursor)}, {"partial", to_json(partial)}}
             .dump();
  }
  auto r = run_cli({"search", "--qmax", "3", "--emax", "6", "--checkpoint", cp.string(), "--format", "json", "--quiet"});
  EXPECT_EQ(r.code, 0);
  json j = json::parse(r.out);
  cfg = SearchConfig{};
  cfg.q_max = 3;
  cfg.e_max = 6;
  SearchReport full = certify_no_obstruction(cfg);
  EXPECT_EQ(j["pairs_checked"], full.pairs_checked);
  EXPECT_EQ(j["centers_checked"].size(), full.centers_checked.size());
  EXPECT_FALSE(std::filesystem::exists(cp));
}

TEST(Run, Weights) {
  auto r = run_cli({"weights", "--a", "25/9"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("1^x2,7/9^x1,2/9^x3,1/9^x2"), std::string::npos);
  auto bad = run_cli({"weights", "--a", "1/2"});
  EXPECT_EQ(bad.code, 1);
}

TEST(Run, ClassCheck) {
  auto r = run_cli({"class", "--class", "6,3;3,2^7", "--trace"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("exceptional: yes"), std::string::npos);
  EXPECT_NE(r.out.find("(0;-1)"), std::string::npos);
}

TEST(Run, Mu) {
  auto r = run_cli({"mu", "--class", "15,10;7,6^7", "--a", "8", "--b", "3/2", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(j["mu"], "49/30");
  EXPECT_EQ(j["obstructive"], true);
}

TEST(Run, RfCurveCsvToFile) {
  auto path = temp_path("curve.csv");
  auto r = run_cli({"rf-curve", "--from", "1.24", "--to", "2", "--steps", "19", "--out", path.string()});
  ASSERT_EQ(r.code, 0);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  auto rows = parse_rf_curve_csv(ss.str());
  ASSERT_EQ(rows.size(), 20u);
  EXPECT_EQ(rows.back().rf, R(289, 36));
  std::filesystem::remove(path);
}

TEST(Run, VerifySmallGrid) {
  auto r = run_cli({"verify", "--a-from", "9", "--a-to", "10", "--a-step", "1/2", "--b", "1", "--b", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("6 points, all succeed"), std::string::npos);
  auto listed = run_cli({"verify", "--a-from", "9", "--a-to", "10", "--a-step", "1/2", "--b-list", "1,3/2,2"});
  EXPECT_EQ(listed.code, 0);
  EXPECT_NE(listed.out.find("9 points, all succeed"), std::string::npos);
}

TEST(Run, ValidationErrors) {
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"nonsense"}).code, 1);
  auto unknown = run_cli({"rf", "--b", "8/5", "--bogus"});
  EXPECT_EQ(unknown.code, 1);
  EXPECT_NE(unknown.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run_cli({"rf"}).code, 1);
  EXPECT_EQ(run_cli({"rf", "--b", "x"}).code, 1);
  EXPECT_EQ(run_cli({"search", "--qmax", "1"}).code, 1);
  EXPECT_EQ(run_cli({"rf", "--b", "8/5", "--format", "xml"}).code, 1);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(Run, JobsFromEnvironment) {
  setenv("CAPCALC_JOBS", "2", 1);
  EXPECT_EQ(run_cli({"search", "--qmax", "3", "--emax", "4", "--quiet"}).code, 0);
  setenv("CAPCALC_JOBS", "zero", 1);
  EXPECT_EQ(run_cli({"search", "--qmax", "3", "--emax", "4", "--quiet"}).code, 1);
  unsetenv("CAPCALC_JOBS");
}

TEST(Run, ExitCodesAreDeterministic) {
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(run_cli({"rf", "--b", "16/9"}).code, 1);
    EXPECT_EQ(run_cli({"reduce", "--a", "9", "--b", "2"}).code, 0);
  }
}
