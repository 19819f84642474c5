#pragma once

// Command-line front end. run() parses arguments, dispatches to the
// library and writes results as pretty text, CSV or JSON. Exit codes:
// 0 success, 1 bad input, 2 a certificate failed (search found an
// obstructive class, or a reduction did not succeed).

#include "capcalc/classes.hpp"
#include "capcalc/exactnum.hpp"
#include "capcalc/obstruction.hpp"
#include "capcalc/reduction.hpp"
#include "capcalc/search.hpp"
#include "capcalc/weights.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <locale>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace capcalc::cli {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kInvalid = 1, kCertificateViolation = 2 };

// ---------------------------------------------------------------- rf curve

struct RfCurveRow {
  Rational b;
  std::int64_t n = 0;
  std::string class_name;    ///< "unknown" on a boundary point
  std::optional<Rational> rf;  ///< empty on a boundary point

  friend bool operator==(const RfCurveRow&, const RfCurveRow&) = default;
};

/// steps + 1 equally spaced rows from `from` to `to` inclusive.
inline std::vector<RfCurveRow> emit_rf_curve(const Rational& from, const Rational& to, std::int64_t steps) {
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (from >= to) throw std::invalid_argument("rf-curve needs from < to");
  if (from <= 1 || to > 2) throw std::invalid_argument("rf-curve range must lie in (1, 2]");
  std::vector<RfCurveRow> rows;
  rows.reserve(static_cast<std::size_t>(steps) + 1);
  const Rational step = (to - from) / steps;
  for (std::int64_t i = 0; i <= steps; ++i) {
    RfCurveRow row;
    row.b = i == steps ? to : from + step * i;
    IntervalIndex idx = interval_index(row.b);
    row.n = idx.n;
    if (idx.boundary) {
      row.class_name = "unknown";
    } else {
      RfValue v = rf_detail(row.b);
      row.class_name = v.class_name;
      row.rf = v.rf;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string rf_curve_csv(const std::vector<RfCurveRow>& rows) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "# schema_version=" << kSchemaVersion << "\n";
  os << "b,n,class,rf_exact,rf_decimal\n";
  for (const auto& r : rows) {
    os << to_string(r.b) << "," << r.n << "," << r.class_name << ",";
    if (r.rf)
      os << to_string(*r.rf) << "," << to_decimal(*r.rf);
    else
      os << "unknown,unknown";
    os << "\n";
  }
  return os.str();
}

inline std::vector<RfCurveRow> parse_rf_curve_csv(const std::string& text) {
  std::vector<RfCurveRow> rows;
  std::istringstream is(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() != 5) throw std::invalid_argument("rf-curve CSV row needs 5 fields: " + line);
    RfCurveRow r;
    r.b = parse_rational(f[0]);
    r.n = std::stoll(f[1]);
    r.class_name = f[2];
    if (f[3] != "unknown") r.rf = parse_rational(f[3]);
    rows.push_back(std::move(r));
  }
  return rows;
}

inline json rf_curve_json(const std::vector<RfCurveRow>& rows) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["rows"] = json::array();
  for (const auto& r : rows) {
    json row{{"b", to_string(r.b)}, {"n", r.n}, {"class", r.class_name}};
    if (r.rf) {
      row["rf_exact"] = to_string(*r.rf);
      row["rf_decimal"] = to_decimal(*r.rf);
    } else {
      row["rf_exact"] = nullptr;
      row["rf_decimal"] = nullptr;
    }
    j["rows"].push_back(std::move(row));
  }
  return j;
}

inline std::vector<RfCurveRow> parse_rf_curve_json(const json& j) {
  std::vector<RfCurveRow> rows;
  for (const auto& row : j.at("rows")) {
    RfCurveRow r;
    r.b = parse_rational(row.at("b").get<std::string>());
    r.n = row.at("n").get<std::int64_t>();
    r.class_name = row.at("class").get<std::string>();
    if (!row.at("rf_exact").is_null()) r.rf = parse_rational(row.at("rf_exact").get<std::string>());
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------- search JSON

inline json to_json(const ObstructionReport& r) {
  return json{{"class", to_string(r.cls)},
              {"a", to_string(r.a)},
              {"b", to_string(r.b)},
              {"mu", to_string(r.mu())},
              {"mu_decimal", to_decimal(r.mu())},
              {"volume_squared", to_string(r.a / (2 * r.b))},
              {"obstructive", r.obstructive}};
}

inline ObstructionReport obstruction_from_json(const json& j) {
  ClassSxS c = parse_class([&] {
    std::string s = j.at("class").get<std::string>();
    return s.substr(1, s.size() - 2);
  }());
  return is_obstructive_at(c, parse_rational(j.at("a").get<std::string>()),
                           parse_rational(j.at("b").get<std::string>()));
}

inline json cursor_json(const SearchCursor& c) { return json{{"center", to_string(c.center)}, {"d", c.d}, {"e", c.e}}; }

inline SearchCursor cursor_from_json(const json& j) {
  return SearchCursor{parse_rational(j.at("center").get<std::string>()), j.at("d").get<std::int64_t>(),
                      j.at("e").get<std::int64_t>()};
}

inline json to_json(const SearchReport& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["centers_checked"] = json::array();
  for (const auto& c : r.centers_checked) j["centers_checked"].push_back(to_string(c));
  j["pairs_checked"] = r.pairs_checked;
  j["classes_generated"] = r.classes_generated;
  j["obstructive_candidates"] = r.obstructive_candidates;
  j["non_exceptional_obstructive"] = r.non_exceptional_obstructive;
  j["obstructive_found"] = json::array();
  for (const auto& f : r.obstructive_found) j["obstructive_found"].push_back(to_json(f));
  j["wall_time"] = r.wall_time;
  j["de_pair_count"] = r.de_pair_count;
  j["de_pair_warning"] = r.de_pair_warning;
  j["completed"] = r.completed;
  j["cursor"] = r.cursor ? cursor_json(*r.cursor) : json(nullptr);
  return j;
}

inline SearchReport search_report_from_json(const json& j) {
  SearchReport r;
  for (const auto& c : j.at("centers_checked")) r.centers_checked.push_back(parse_rational(c.get<std::string>()));
  r.pairs_checked = j.at("pairs_checked").get<std::size_t>();
  r.classes_generated = j.at("classes_generated").get<std::size_t>();
  r.obstructive_candidates = j.value("obstructive_candidates", std::size_t{0});
  r.non_exceptional_obstructive = j.value("non_exceptional_obstructive", std::size_t{0});
  for (const auto& f : j.at("obstructive_found")) r.obstructive_found.push_back(obstruction_from_json(f));
  r.wall_time = j.at("wall_time").get<double>();
  r.de_pair_count = j.value("de_pair_count", std::size_t{0});
  r.de_pair_warning = j.value("de_pair_warning", std::string{});
  r.completed = j.value("completed", true);
  if (j.contains("cursor") && !j["cursor"].is_null()) r.cursor = cursor_from_json(j["cursor"]);
  return r;
}

namespace detail {

inline std::atomic<bool> interrupted{false};

extern "C" inline void on_sigint(int) { interrupted.store(true); }

inline void write_file_atomically(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp);
    f << content;
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline unsigned resolve_jobs(int flag) {
  if (flag > 0) return static_cast<unsigned>(flag);
  if (const char* env = std::getenv("CAPCALC_JOBS")) {
    try {
      int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw std::invalid_argument(std::string("CAPCALC_JOBS must be a positive integer, got '") + env + "'");
  }
  return 1;
}

/// Writes to the --out file when given, otherwise to out.
inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty())
    out << text;
  else
    write_file_atomically(path, text);
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace detail

// ---------------------------------------------------------------- dispatcher

/// Parses argv and runs one subcommand. argv[0] is the program name.
inline int run(const std::vector<std::string>& argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  out.imbue(std::locale::classic());
  CLI::App app{"Exact computations for embeddings of ellipsoids into polydiscs", "capcalc"};
  app.require_subcommand(1);

  std::string format = "pretty";
  std::string out_path;
  int jobs_flag = 0;
  auto add_format = [&](CLI::App* sub, std::vector<std::string> allowed) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember(allowed));
    sub->add_option("--out", out_path, "Write output to this file");
  };

  // weights
  std::string a_str, b_str, class_str;
  auto* weights = app.add_subcommand("weights", "Weight expansion w(a)");
  weights->add_option("--a", a_str, "a >= 1, e.g. 25/9 or 8.5")->required();
  add_format(weights, {"pretty", "json"});

  // class
  bool show_trace = false;
  int max_moves = 0;
  auto* klass = app.add_subcommand("class", "Diophantine and exceptionality check of <d,e;m>");
  klass->add_option("--class", class_str, "Class as 'd,e;m1,m2,...' (x^n repeats x)")->required();
  klass->add_flag("--trace", show_trace, "Print the Cremona reduction");
  klass->add_option("--max-moves", max_moves, "Cremona move limit");
  add_format(klass, {"pretty", "json"});

  // mu
  auto* mu_cmd = app.add_subcommand("mu", "Obstruction mu_b(C)(a) against the volume constraint");
  mu_cmd->add_option("--class", class_str, "Class as 'd,e;m1,m2,...'")->required();
  mu_cmd->add_option("--a", a_str, "a")->required();
  mu_cmd->add_option("--b", b_str, "b")->required();
  add_format(mu_cmd, {"pretty", "json"});

  // rf / cb8
  auto* rf_cmd = app.add_subcommand("rf", "Rigid-flexible value RF(b) for b in (1, 2]");
  rf_cmd->add_option("--b", b_str, "b")->required();
  add_format(rf_cmd, {"pretty", "json"});
  auto* cb8_cmd = app.add_subcommand("cb8", "c_b(8) for b in (1, 2]");
  cb8_cmd->add_option("--b", b_str, "b")->required();
  add_format(cb8_cmd, {"pretty", "json"});

  // rf-curve
  std::string from_str = "1.24", to_str = "2";
  std::int64_t steps = 100;
  auto* curve = app.add_subcommand("rf-curve", "Table of RF(b) for plotting");
  curve->add_option("--from", from_str, "First b (exclusive of 1)");
  curve->add_option("--to", to_str, "Last b (at most 2)");
  curve->add_option("--steps", steps, "Number of intervals; steps+1 rows");
  format = "csv";
  add_format(curve, {"pretty", "csv", "json"});

  // search
  SearchConfig cfg;
  std::string checkpoint_path, enumeration = "pruned";
  std::vector<std::string> center_strs;
  bool quiet = false;
  auto* search = app.add_subcommand("search", "Certify that no exceptional class is obstructive with center in (8,9)");
  search->add_option("--qmax", cfg.q_max, "Largest center denominator");
  search->add_option("--emax", cfg.e_max, "Largest e");
  search->add_option("--jobs", jobs_flag, "Worker threads (default $CAPCALC_JOBS or 1)");
  search->add_option("--checkpoint", checkpoint_path, "Resume from / save progress to this file");
  search->add_option("--center", center_strs, "Search only these centers (repeatable)");
  search->add_option("--enumeration", enumeration, "Tail enumeration")->check(CLI::IsMember({"pruned", "naive"}));
  search->add_flag("--quiet", quiet, "No progress lines");
  add_format(search, {"pretty", "json"});

  // reduce
  auto* reduce = app.add_subcommand("reduce", "Reduction at a point (a, b) at the volume constraint");
  reduce->add_option("--a", a_str, "a >= 1")->required();
  reduce->add_option("--b", b_str, "b in [1, 2]")->required();
  reduce->add_option("--max-moves", max_moves, "Move limit");
  reduce->add_flag("--trace", show_trace, "Print every vector");
  add_format(reduce, {"pretty", "json"});

  // verify
  std::string a_from = "9", a_to = "16", a_step = "1/4";
  std::vector<std::string> b_list{"1", "5/4", "3/2", "7/4", "2"};
  auto* verify = app.add_subcommand("verify", "Volume filling by reduction on a grid of (a, b)");
  verify->add_option("--a-from", a_from, "First a");
  verify->add_option("--a-to", a_to, "Last a");
  verify->add_option("--a-step", a_step, "Step in a");
  verify->add_option("--b-list,--b", b_list, "b values, comma separated")->delimiter(',');
  verify->add_option("--jobs", jobs_flag, "Worker threads (default $CAPCALC_JOBS or 1)");
  verify->add_option("--max-moves", max_moves, "Move limit per point");
  add_format(verify, {"pretty", "json"});

  std::vector<std::string> args(argv.size() > 1 ? argv.begin() + 1 : argv.end(), argv.end());
  std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
  // rf-curve's default format is csv; everyone else defaults to pretty
  format.clear();
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kInvalid;
  }
  if (format.empty()) format = curve->parsed() ? "csv" : "pretty";

  try {
    if (weights->parsed()) {
      const Rational a = parse_rational(a_str);
      WeightExpansion w = weight_expansion(a);
      if (format == "json") {
        json j{{"schema_version", kSchemaVersion}, {"a", to_string(a)}, {"length", w.length()}};
        j["blocks"] = json::array();
        for (const auto& bl : w.blocks())
          j["blocks"].push_back(json{{"value", to_string(bl.value)}, {"multiplicity", bl.multiplicity}});
        detail::emit(detail::dump(j), out_path, out);
      } else {
        std::ostringstream os;
        os << "w(" << to_string(a) << ") = " << w.str() << "\n";
        os << "length " << w.length() << ", blocks " << w.block_count() << ", last denominator "
           << w.last_denominator() << "\n";
        detail::emit(os.str(), out_path, out);
      }
      return kOk;
    }

    if (klass->parsed()) {
      ClassSxS c = parse_class(class_str);
      ExceptionalityResult r = is_exceptional(c, max_moves > 0 ? max_moves : kDefaultExceptionalMoves);
      if (format == "json") {
        json j{{"schema_version", kSchemaVersion}, {"class", to_string(c)},     {"diophantine", r.diophantine},
               {"exceptional", to_string(r.verdict)}, {"moves", r.moves}, {"reason", r.reason}};
        if (show_trace) {
          j["trace"] = json::array();
          for (const auto& v : r.trace) j["trace"].push_back(to_string(v));
        }
        detail::emit(detail::dump(j), out_path, out);
      } else {
        std::ostringstream os;
        os << to_string(c) << "\n";
        os << "diophantine: " << (r.diophantine ? "yes" : "no") << "\n";
        os << "exceptional: " << to_string(r.verdict) << " (" << r.moves << " moves; " << r.reason << ")\n";
        if (show_trace)
          for (const auto& v : r.trace) os << "  " << to_string(v) << "\n";
        detail::emit(os.str(), out_path, out);
      }
      return kOk;
    }

    if (mu_cmd->parsed()) {
      ClassSxS c = parse_class(class_str);
      const Rational a = parse_rational(a_str), b = parse_rational(b_str);
      volume_bound(a, b);
      ObstructionReport r = is_obstructive_at(c, a, b);
      if (format == "json") {
        json j = to_json(r);
        j["schema_version"] = kSchemaVersion;
        detail::emit(detail::dump(j), out_path, out);
      } else {
        std::ostringstream os;
        os << "mu = " << to_string(r.mu()) << " (" << to_decimal(r.mu()) << ")\n";
        os << "mu^2 = " << to_decimal(r.mu() * r.mu()) << " vs volume^2 = a/2b = " << to_string(a / (2 * b)) << "\n";
        os << "obstructive: " << (r.obstructive ? "yes" : "no") << "\n";
        detail::emit(os.str(), out_path, out);
      }
      return kOk;
    }

    if (rf_cmd->parsed() || cb8_cmd->parsed()) {
      const Rational b = parse_rational(b_str);
      RfValue v = rf_detail(b);
      const bool is_rf = rf_cmd->parsed();
      const Rational& value = is_rf ? v.rf : v.cb8;
      if (format == "json") {
        json j{{"schema_version", kSchemaVersion}, {"b", to_string(b)},       {"n", v.n},
               {"class", v.class_name},            {"value", to_string(value)}, {"decimal", to_decimal(value)}};
        detail::emit(detail::dump(j), out_path, out);
      } else {
        std::ostringstream os;
        os << (is_rf ? "RF(" : "c_b(8) at b = ") << to_string(b) << (is_rf ? ")" : "") << " = " << to_string(value)
           << " (" << to_decimal(value) << ")\n";
        os << "b in I_" << v.n << ", determined by " << v.class_name << " = " << to_string(v.determining) << "\n";
        detail::emit(os.str(), out_path, out);
      }
      return kOk;
    }

    if (curve->parsed()) {
      auto rows = emit_rf_curve(parse_rational(from_str), parse_rational(to_str), steps);
      if (format == "json") {
        detail::emit(detail::dump(rf_curve_json(rows)), out_path, out);
      } else if (format == "csv") {
        detail::emit(rf_curve_csv(rows), out_path, out);
      } else {
        std::ostringstream os;
        for (const auto& r : rows)
          os << to_decimal(r.b, 6) << "  I_" << r.n << "  " << r.class_name << "  "
             << (r.rf ? to_string(*r.rf) + "  " + to_decimal(*r.rf) : std::string("unknown")) << "\n";
        detail::emit(os.str(), out_path, out);
      }
      return kOk;
    }

    if (search->parsed()) {
      cfg.jobs = detail::resolve_jobs(jobs_flag);
      cfg.enumeration = enumeration == "naive" ? TailEnumeration::naive : TailEnumeration::pruned;
      if (!center_strs.empty()) {
        std::vector<Rational> cs;
        for (const auto& s : center_strs) cs.push_back(parse_rational(s));
        cfg.centers = cs;
      }
      validate(cfg);

      SearchReport previous;
      bool resumed = false;
      if (!checkpoint_path.empty() && std::filesystem::exists(checkpoint_path)) {
        json cp = json::parse(detail::read_file(checkpoint_path));
        if (cp.value("schema_version", 0) != kSchemaVersion)
          throw std::invalid_argument("checkpoint schema version mismatch in " + checkpoint_path);
        if (cp.contains("cursor") && !cp["cursor"].is_null()) cfg.resume_after = cursor_from_json(cp["cursor"]);
        previous = search_report_from_json(cp.at("partial"));
        resumed = true;
        if (!quiet) err << "resuming after " << cp["cursor"].dump() << "\n";
      }

      auto save_checkpoint = [&](const SearchReport& partial) {
        if (checkpoint_path.empty()) return;
        json cp{{"schema_version", kSchemaVersion}};
        cp["cursor"] = partial.cursor ? cursor_json(*partial.cursor) : json(nullptr);
        cp["partial"] = to_json(partial);
        detail::write_file_atomically(checkpoint_path, detail::dump(cp));
      };

      // running total, for checkpoints written after each center
      SearchReport running = previous;
      running.completed = false;
      std::size_t base_pairs = previous.pairs_checked, base_classes = previous.classes_generated;
      auto progress = [&](const SearchProgress& p) {
        running.centers_checked.push_back(p.center);
        running.pairs_checked = base_pairs + p.pairs_checked;
        running.classes_generated = base_classes + p.classes_generated;
        running.cursor = p.cursor;
        if (!checkpoint_path.empty()) {
          // counts of obstructive candidates are not streamed; the final report carries them
          save_checkpoint(running);
        }
        if (!quiet)
          err << "center " << p.centers_done << "/" << p.centers_total << " a=" << to_string(p.center)
              << " items=" << p.pairs_checked << " classes=" << p.classes_generated << "\n";
      };

      detail::interrupted.store(false);
      auto old_handler = std::signal(SIGINT, detail::on_sigint);
      SearchReport rep;
      try {
        rep = certify_no_obstruction(cfg, progress, &detail::interrupted);
      } catch (...) {
        std::signal(SIGINT, old_handler);
        throw;
      }
      std::signal(SIGINT, old_handler);

      if (resumed) {
        previous.merge(rep);
        rep = std::move(previous);
      }
      if (!rep.completed) {
        save_checkpoint(rep);
        err << "interrupted; progress saved" << (checkpoint_path.empty() ? " nowhere (no --checkpoint)" : "") << "\n";
      } else if (!checkpoint_path.empty()) {
        std::filesystem::remove(checkpoint_path);
      }
      if (!rep.de_pair_warning.empty() && !quiet) err << "warning: " << rep.de_pair_warning << "\n";

      if (format == "json") {
        detail::emit(detail::dump(to_json(rep)), out_path, out);
      } else {
        std::ostringstream os;
        os << "centers checked: " << rep.centers_checked.size() << "\n";
        os << "(d,e) pairs per center: " << rep.de_pair_count << "\n";
        os << "work items: " << rep.pairs_checked << "\n";
        os << "classes generated: " << rep.classes_generated << "\n";
        os << "obstructive somewhere in b window: " << rep.obstructive_candidates << " (" << rep.non_exceptional_obstructive
           << " not exceptional)\n";
        os << "obstructive exceptional classes: " << rep.obstructive_found.size() << "\n";
        for (const auto& f : rep.obstructive_found)
          os << "  " << to_string(f.cls) << " at a=" << to_string(f.a) << " b=" << to_string(f.b)
             << " mu=" << to_string(f.mu()) << "\n";
        os << "wall time: " << rep.wall_time << " s\n";
        if (rep.completed)
          os << (rep.obstructive_found.empty() ? "certificate holds\n" : "certificate FAILS\n");
        else
          os << "incomplete\n";
        detail::emit(os.str(), out_path, out);
      }
      if (!rep.obstructive_found.empty()) return kCertificateViolation;
      return rep.completed ? kOk : kInvalid;
    }

    if (reduce->parsed()) {
      const Rational a = parse_rational(a_str), b = parse_rational(b_str);
      ReductionTrace tr = reduce_at_point(a, b, max_moves > 0 ? max_moves : kDefaultReductionMoves, true);
      if (format == "json") {
        json j{{"schema_version", kSchemaVersion}, {"a", to_string(a)},          {"b", to_string(b)},
               {"outcome", to_string(tr.outcome)},  {"moves", tr.moves}};
        if (show_trace) {
          j["trace"] = json::array();
          for (const auto& s : tr.steps) j["trace"].push_back(json{{"vector", s.vector.str()}, {"defect", s.defect.str()}});
        }
        detail::emit(detail::dump(j), out_path, out);
      } else {
        std::ostringstream os;
        if (show_trace)
          for (const auto& s : tr.steps) os << s.vector.str() << "  defect " << s.defect.str() << "\n";
        os << to_string(tr.outcome) << " (" << tr.moves << " moves)\n";
        detail::emit(os.str(), out_path, out);
      }
      return tr.outcome == ReductionOutcome::success ? kOk : kCertificateViolation;
    }

    if (verify->parsed()) {
      const Rational lo = parse_rational(a_from), hi = parse_rational(a_to), step = parse_rational(a_step);
      if (step.sign() <= 0 || lo > hi) throw std::invalid_argument("verify needs a-from <= a-to and a-step > 0");
      std::vector<Rational> as, bs;
      for (Rational a = lo; a <= hi; a += step) as.push_back(a);
      for (const auto& s : b_list) bs.push_back(parse_rational(s));
      VolumeFillReport rep =
          verify_volume_fills(as, bs, detail::resolve_jobs(jobs_flag), max_moves > 0 ? max_moves : kDefaultReductionMoves);
      if (format == "json") {
        json j{{"schema_version", kSchemaVersion}, {"all_success", rep.all_success}, {"max_moves_used", rep.max_moves_used}};
        j["points"] = json::array();
        for (const auto& p : rep.points)
          j["points"].push_back(
              json{{"a", to_string(p.a)}, {"b", to_string(p.b)}, {"outcome", to_string(p.outcome)}, {"moves", p.moves}});
        detail::emit(detail::dump(j), out_path, out);
      } else {
        std::ostringstream os;
        for (const auto& p : rep.points)
          if (p.outcome != ReductionOutcome::success)
            os << "a=" << to_string(p.a) << " b=" << to_string(p.b) << ": " << to_string(p.outcome) << "\n";
        os << rep.points.size() << " points, " << (rep.all_success ? "all succeed" : "NOT all succeed")
           << ", at most " << rep.max_moves_used << " moves\n";
        detail::emit(os.str(), out_path, out);
      }
      return rep.all_success ? kOk : kCertificateViolation;
    }
  } catch (const UnknownValueError& e) {
    err << "unknown: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
  err << app.help();
  return kInvalid;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace capcalc::cli
