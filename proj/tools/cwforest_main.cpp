/// @file cwforest_main.cpp
/// @brief The cwforest command-line tool: tree navigation, row statistics,
///        convergence reports, and self-check suites over (u,v)-forests.
/// @details Every subcommand supports --format text|csv|json. Outputs are
///          byte-identical across runs and worker counts in exact mode: no
///          timings, worker counts, or machine facts ever reach the output.
///          Exit codes: 0 success, 1 usage/parse error, 2 a check suite
///          found a violation.

#include <cwforest/analysis.hpp>
#include <cwforest/contfrac.hpp>
#include <cwforest/errors.hpp>
#include <cwforest/rational.hpp>
#include <cwforest/row_engine.hpp>
#include <cwforest/tree.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

using json = nlohmann::ordered_json;
using cwforest::ContinuedFraction;
using cwforest::Enclosure;
using cwforest::HistogramVariant;
using cwforest::Rational;
using cwforest::RootChoice;
using cwforest::RowCursor;
using cwforest::RowStats;
using cwforest::SumMode;
using cwforest::TreeParams;

namespace {

constexpr int kSchemaVersion = 1;
/// Significant decimal digits used when printing interval endpoints.
constexpr int kEnclosureDigits = 50;

enum class Format { Text, Csv, Json };

/// Common knobs shared by the subcommands.
struct Options {
  unsigned long u = 1;
  unsigned long v = 1;
  int precision_bits = 128;
  int workers = 0;  // 0 = machine parallelism, resolved below
  std::string mode = "exact";
  std::string format = "text";
  std::string output;  // empty = stdout

  TreeParams params() const { return TreeParams(u, v); }

  int resolved_workers() const {
    if (workers > 0) return workers;
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
  }

  SumMode sum_mode() const {
    return mode == "exact" ? SumMode::exact(precision_bits)
                           : SumMode::enclosure(precision_bits);
  }

  Format parsed_format() const {
    if (format == "csv") return Format::Csv;
    if (format == "json") return Format::Json;
    return Format::Text;
  }
};

/// Adds --format/--output to a subcommand.
void addOutputFlags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--output", opt.output, "Write output to a file instead of stdout");
}

/// Adds --u/--v to a subcommand.
void addParamFlags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--u", opt.u, "Left-branch parameter u")
      ->check(CLI::Range(1ul, 1000000000ul))
      ->capture_default_str();
  cmd->add_option("--v", opt.v, "Right-branch parameter v")
      ->check(CLI::Range(1ul, 1000000000ul))
      ->capture_default_str();
}

/// Adds --precision/--workers (with environment fallbacks) to a subcommand.
void addComputeFlags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--precision", opt.precision_bits,
                  "Interval precision in bits (>= 16)")
      ->check(CLI::Range(16, 65536))
      ->envname("CWFOREST_PRECISION_BITS")
      ->capture_default_str();
  cmd->add_option("--workers", opt.workers,
                  "Worker threads (default: machine parallelism)")
      ->check(CLI::Range(1, 4096))
      ->envname("CWFOREST_WORKERS");
}

void addModeFlag(CLI::App* cmd, Options& opt) {
  cmd->add_option("--mode", opt.mode, "Accumulation mode")
      ->check(CLI::IsMember({"exact", "enclosure"}))
      ->capture_default_str();
}

/// CLI11 silently discards environment values that fail an option's
/// validator; promote those to loud usage errors instead of quietly
/// falling back to the default.  An accepted environment value counts as
/// a result, so "env set but count still zero" means it was rejected.
int rejectInvalidEnvValues(const CLI::App& app) {
  for (const CLI::App* sub : app.get_subcommands()) {
    for (const CLI::Option* option : sub->get_options()) {
      const std::string& name = option->get_envname();
      if (name.empty() || option->count() > 0) continue;
      const char* raw = std::getenv(name.c_str());
      if (raw != nullptr && raw[0] != '\0') {
        std::cerr << "cwforest: invalid value '" << raw
                  << "' for environment variable " << name << "\n";
        return 1;
      }
    }
  }
  return 0;
}

/// Writes `body` to stdout or to --output, always LF-terminated UTF-8.
void emit(const Options& opt, const std::string& body) {
  if (opt.output.empty()) {
    std::fwrite(body.data(), 1, body.size(), stdout);
    return;
  }
  std::ofstream out(opt.output, std::ios::binary);
  if (!out) {
    throw cwforest::Error("cannot open output file: " + opt.output);
  }
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
}

std::string jsonBody(const json& doc) { return doc.dump(2) + "\n"; }

/// A continued fraction as a JSON array; coefficients that overflow 64-bit
/// integers are emitted as decimal strings.
json cfToJson(const ContinuedFraction& cf) {
  json arr = json::array();
  for (const mpz_class& q : cf.coeffs()) {
    if (q.fits_slong_p()) {
      arr.push_back(static_cast<long long>(q.get_si()));
    } else {
      arr.push_back(q.get_str());
    }
  }
  return arr;
}

json enclosureToJson(const Enclosure& e) {
  return json{{"lo", e.lo_str(kEnclosureDigits)},
              {"hi", e.hi_str(kEnclosureDigits)},
              {"precision_bits", e.precision_bits()}};
}

json sumToJson(const cwforest::ExactOrEnclosure& x) {
  if (std::holds_alternative<Rational>(x)) {
    return json(std::get<Rational>(x).str());
  }
  return enclosureToJson(std::get<Enclosure>(x));
}

/// Interval endpoints as two CSV fields "lo,hi".
std::string enclosureCsv(const Enclosure& e) {
  return e.lo_str(kEnclosureDigits) + "," + e.hi_str(kEnclosureDigits);
}

json histogramToJson(const std::map<long long, unsigned long long>& h) {
  json obj = json::object();
  for (const auto& [gain, count] : h) {
    obj[std::to_string(gain)] = count;
  }
  return obj;
}

std::string formatDouble(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ----------------------------------------------------------------------------
// row
// ----------------------------------------------------------------------------

struct RowArgs {
  Options opt;
  std::string root;
  int depth = 0;
  long long limit = -1;  // < 0: no cap on the listing
};

int runRow(const RowArgs& args) {
  Rational root = Rational::parse(args.root);
  TreeParams params = args.opt.params();
  RowStats stats = cwforest::row_stats(root, args.depth, params,
                                       SumMode::exact(),
                                       args.opt.resolved_workers());

  struct Entry {
    unsigned long long index;
    Rational value;
    ContinuedFraction cf;
  };
  std::vector<Entry> listing;
  RowCursor cursor(root, args.depth, params);
  Rational x;
  unsigned long long index = 0;
  while (cursor.next(x)) {
    if (args.limit < 0 ||
        index < static_cast<unsigned long long>(args.limit)) {
      listing.push_back(Entry{index, x, ContinuedFraction::encode(x)});
    }
    ++index;
  }

  Format fmt = args.opt.parsed_format();
  if (fmt == Format::Json) {
    json doc{{"schema_version", kSchemaVersion},
             {"command", "row"},
             {"u", params.u},
             {"v", params.v},
             {"root", root.str()},
             {"depth", args.depth}};
    json rows = json::array();
    for (const Entry& e : listing) {
      rows.push_back(json{{"index", e.index},
                          {"value", e.value.str()},
                          {"cf", cfToJson(e.cf)},
                          {"int_part", e.value.floor().get_str()},
                          {"cf_length", cwforest::cf_length(e.value)}});
    }
    doc["rows"] = rows;
    doc["stats"] = json{{"n", stats.n},
                        {"count", stats.count},
                        {"sum", sumToJson(stats.sum)},
                        {"mean", sumToJson(stats.mean)},
                        {"int_part_sum", stats.int_part_sum.get_str()},
                        {"histogram", histogramToJson(stats.cf_length_histogram)}};
    emit(args.opt, jsonBody(doc));
    return 0;
  }

  // text == csv for tabular output.
  std::string body = "index,value,cf,int_part,cf_length\n";
  for (const Entry& e : listing) {
    body += std::to_string(e.index) + "," + e.value.str() + ",\"" +
            e.cf.str() + "\"," + e.value.floor().get_str() + "," +
            std::to_string(cwforest::cf_length(e.value)) + "\n";
  }
  emit(args.opt, body);
  return 0;
}

// ----------------------------------------------------------------------------
// mean
// ----------------------------------------------------------------------------

struct MeanArgs {
  Options opt;
  std::string root;
  int max_depth = 0;
};

int runMean(const MeanArgs& args) {
  Rational root = Rational::parse(args.root);
  TreeParams params = args.opt.params();
  SumMode mode = args.opt.sum_mode();
  auto series = cwforest::mean_series(root, args.max_depth, params, mode,
                                      args.opt.resolved_workers());

  Format fmt = args.opt.parsed_format();
  if (fmt == Format::Json) {
    json doc{{"schema_version", kSchemaVersion},
             {"command", "mean"},
             {"u", params.u},
             {"v", params.v},
             {"root", root.str()},
             {"mode", args.opt.mode}};
    if (!mode.is_exact()) doc["precision_bits"] = mode.precision_bits;
    json rows = json::array();
    for (const auto& r : series) {
      rows.push_back(json{
          {"n", r.n}, {"sum", sumToJson(r.sum)}, {"mean", sumToJson(r.mean)}});
    }
    doc["rows"] = rows;
    emit(args.opt, jsonBody(doc));
    return 0;
  }

  std::string body;
  if (mode.is_exact()) {
    body = "n,sum,mean\n";
    for (const auto& r : series) {
      body += std::to_string(r.n) + "," + std::get<Rational>(r.sum).str() +
              "," + std::get<Rational>(r.mean).str() + "\n";
    }
  } else {
    body = "n,sum_lo,sum_hi,mean_lo,mean_hi\n";
    for (const auto& r : series) {
      body += std::to_string(r.n) + "," +
              enclosureCsv(std::get<Enclosure>(r.sum)) + "," +
              enclosureCsv(std::get<Enclosure>(r.mean)) + "\n";
    }
  }
  emit(args.opt, body);
  return 0;
}

// ----------------------------------------------------------------------------
// locate
// ----------------------------------------------------------------------------

struct LocateArgs {
  Options opt;
  std::string value;
};

int runLocate(const LocateArgs& args) {
  Rational x = Rational::parse(args.value);
  TreeParams params = args.opt.params();
  cwforest::Location loc = cwforest::locate(x, params);
  std::string path = loc.path.str();

  switch (args.opt.parsed_format()) {
    case Format::Json: {
      json doc{{"schema_version", kSchemaVersion},
               {"command", "locate"},
               {"u", params.u},
               {"v", params.v},
               {"value", x.str()},
               {"root", loc.root.str()},
               {"path", path},
               {"depth", loc.depth()}};
      emit(args.opt, jsonBody(doc));
      return 0;
    }
    case Format::Csv: {
      std::string body = "value,root,path,depth\n";
      body += x.str() + "," + loc.root.str() + "," + path + "," +
              std::to_string(loc.depth()) + "\n";
      emit(args.opt, body);
      return 0;
    }
    case Format::Text: {
      std::string body = "value: " + x.str() + "\n";
      body += "root: " + loc.root.str() + "\n";
      body += "path: " + (path.empty() ? std::string("(root)") : path) + "\n";
      body += "depth: " + std::to_string(loc.depth()) + "\n";
      emit(args.opt, body);
      return 0;
    }
  }
  return 0;
}

// ----------------------------------------------------------------------------
// descendant
// ----------------------------------------------------------------------------

struct DescendantArgs {
  Options opt;
  std::string ancestor;
  std::string query;
};

int runDescendant(const DescendantArgs& args) {
  Rational ancestor = Rational::parse(args.ancestor);
  Rational query = Rational::parse(args.query);
  TreeParams params = args.opt.params();
  bool yes = cwforest::is_descendant(ancestor, query, params);
  std::optional<mpz_class> depth;
  if (yes) depth = cwforest::depth_from_cf(ancestor, query, params);

  switch (args.opt.parsed_format()) {
    case Format::Json: {
      json doc{{"schema_version", kSchemaVersion},
               {"command", "descendant"},
               {"u", params.u},
               {"v", params.v},
               {"ancestor", ancestor.str()},
               {"query", query.str()},
               {"descendant", yes}};
      if (depth) doc["depth"] = depth->get_str();
      emit(args.opt, jsonBody(doc));
      return 0;
    }
    case Format::Csv: {
      std::string body = "ancestor,query,descendant,depth\n";
      body += ancestor.str() + "," + query.str() + "," +
              (yes ? "true" : "false") + "," +
              (depth ? depth->get_str() : std::string()) + "\n";
      emit(args.opt, body);
      return 0;
    }
    case Format::Text: {
      std::string body = std::string("descendant: ") + (yes ? "true" : "false") + "\n";
      if (depth) body += "depth: " + depth->get_str() + "\n";
      emit(args.opt, body);
      return 0;
    }
  }
  return 0;
}

// ----------------------------------------------------------------------------
// cf
// ----------------------------------------------------------------------------

struct CfArgs {
  Options opt;
  std::string value;   // encode direction
  std::string decode;  // decode direction
};

int runCf(const CfArgs& args) {
  const bool decoding = !args.decode.empty();
  Rational value;
  ContinuedFraction cf = ContinuedFraction::parse("[0]");
  if (decoding) {
    cf = ContinuedFraction::parse(args.decode);
    value = cf.decode();
  } else {
    value = Rational::parse(args.value);
    cf = ContinuedFraction::encode(value);
  }

  switch (args.opt.parsed_format()) {
    case Format::Json: {
      json doc{{"schema_version", kSchemaVersion},
               {"command", "cf"},
               {"direction", decoding ? "decode" : "encode"},
               {"value", value.str()},
               {"cf", cfToJson(cf)}};
      emit(args.opt, jsonBody(doc));
      return 0;
    }
    case Format::Csv: {
      std::string body = "value,cf\n";
      body += value.str() + ",\"" + cf.str() + "\"\n";
      emit(args.opt, body);
      return 0;
    }
    case Format::Text: {
      emit(args.opt, decoding ? value.str() + "\n" : cf.str() + "\n");
      return 0;
    }
  }
  return 0;
}

// ----------------------------------------------------------------------------
// cflen-hist
// ----------------------------------------------------------------------------

struct HistArgs {
  Options opt;
  std::string root;
  int depth = 0;
  std::string variant = "corrected";
};

int runHist(const HistArgs& args) {
  Rational root = Rational::parse(args.root);
  TreeParams params = args.opt.params();
  HistogramVariant variant = args.variant == "paper"
                                 ? HistogramVariant::Published
                                 : HistogramVariant::Corrected;
  auto observed = cwforest::cf_length_counts(root, args.depth, params,
                                             args.opt.resolved_workers());
  auto predicted =
      cwforest::predicted_cf_length_counts(root, args.depth, variant);
  bool agree = observed == predicted;

  std::set<long long> gains;
  for (const auto& [g, c] : observed) gains.insert(g);
  for (const auto& [g, c] : predicted) gains.insert(g);
  auto at = [](const std::map<long long, unsigned long long>& m,
               long long g) -> unsigned long long {
    auto it = m.find(g);
    return it == m.end() ? 0ull : it->second;
  };

  Format fmt = args.opt.parsed_format();
  if (fmt == Format::Json) {
    json rows = json::array();
    for (long long g : gains) {
      rows.push_back(json{{"gain", g},
                          {"observed", at(observed, g)},
                          {"predicted", at(predicted, g)}});
    }
    json doc{{"schema_version", kSchemaVersion},
             {"command", "cflen-hist"},
             {"u", params.u},
             {"v", params.v},
             {"root", root.str()},
             {"depth", args.depth},
             {"variant", args.variant},
             {"agree", agree},
             {"rows", rows}};
    emit(args.opt, jsonBody(doc));
    return 0;
  }

  std::string body = "gain,observed,predicted\n";
  for (long long g : gains) {
    body += std::to_string(g) + "," + std::to_string(at(observed, g)) + "," +
            std::to_string(at(predicted, g)) + "\n";
  }
  if (fmt == Format::Text) {
    body += std::string("agree: ") + (agree ? "true" : "false") + "\n";
  }
  emit(args.opt, body);
  return 0;
}

// ----------------------------------------------------------------------------
// converge
// ----------------------------------------------------------------------------

struct ConvergeArgs {
  Options opt;
  std::string roots;
  int max_depth = 0;
};

std::vector<Rational> parseRootList(const std::string& list) {
  std::vector<Rational> roots;
  std::string token;
  std::istringstream in(list);
  while (std::getline(in, token, ',')) {
    roots.push_back(Rational::parse(token));
  }
  if (roots.empty()) {
    throw cwforest::ParseError("--roots needs at least one rational");
  }
  return roots;
}

int runConverge(const ConvergeArgs& args) {
  TreeParams params = args.opt.params();
  SumMode mode = args.opt.sum_mode();
  std::vector<Rational> roots = parseRootList(args.roots);

  std::vector<cwforest::ConvergenceReport> reports;
  for (const Rational& root : roots) {
    reports.push_back(cwforest::convergence_report(
        root, params, args.max_depth, mode, args.opt.resolved_workers()));
  }

  Format fmt = args.opt.parsed_format();
  if (fmt == Format::Json) {
    json doc{{"schema_version", kSchemaVersion},
             {"command", "converge"},
             {"u", params.u},
             {"v", params.v},
             {"mode", args.opt.mode},
             {"limit", enclosureToJson(reports.front().limit)}};
    if (!mode.is_exact()) doc["precision_bits"] = mode.precision_bits;
    json out_reports = json::array();
    for (const auto& report : reports) {
      json rows = json::array();
      for (const auto& row : report.rows) {
        json r{{"n", row.n}};
        if (row.mean_exact) r["mean"] = row.mean_exact->str();
        r["mean_bounds"] = enclosureToJson(row.mean_bounds);
        r["gap"] = enclosureToJson(row.gap);
        rows.push_back(r);
      }
      out_reports.push_back(json{{"root", report.root.str()}, {"rows", rows}});
    }
    doc["reports"] = out_reports;
    emit(args.opt, jsonBody(doc));
    return 0;
  }

  std::string body = "root,n,mean,mean_lo,mean_hi,gap_lo,gap_hi\n";
  for (const auto& report : reports) {
    for (const auto& row : report.rows) {
      body += report.root.str() + "," + std::to_string(row.n) + ",";
      body += row.mean_exact ? row.mean_exact->str() : std::string();
      body += "," + enclosureCsv(row.mean_bounds) + "," +
              enclosureCsv(row.gap) + "\n";
    }
  }
  emit(args.opt, body);
  return 0;
}

// ----------------------------------------------------------------------------
// decay
// ----------------------------------------------------------------------------

struct DecayArgs {
  Options opt;
  std::string z1;
  std::string z2;
  int max_depth = 0;
  int fit_window = 6;
};

int runDecay(const DecayArgs& args) {
  TreeParams params = args.opt.params();
  SumMode mode = args.opt.sum_mode();
  auto result = cwforest::mean_difference_decay(
      Rational::parse(args.z1), Rational::parse(args.z2), params,
      args.max_depth, mode, args.opt.resolved_workers(),
      cwforest::kDefaultDigitBudget, args.fit_window);

  Format fmt = args.opt.parsed_format();
  if (fmt == Format::Json) {
    json rows = json::array();
    for (const auto& row : result.rows) {
      rows.push_back(json{{"n", row.n}, {"abs_diff", sumToJson(row.abs_diff)}});
    }
    json doc{{"schema_version", kSchemaVersion},
             {"command", "decay"},
             {"u", params.u},
             {"v", params.v},
             {"z1", args.z1},
             {"z2", args.z2},
             {"mode", args.opt.mode},
             {"fitted_ratio", result.fitted_ratio},
             {"fit_points", result.fit_points},
             {"rows", rows}};
    emit(args.opt, jsonBody(doc));
    return 0;
  }

  std::string body;
  if (mode.is_exact()) {
    body = "n,abs_diff,fitted_ratio,fit_points\n";
    for (const auto& row : result.rows) {
      body += std::to_string(row.n) + "," +
              std::get<Rational>(row.abs_diff).str() + "," +
              formatDouble(result.fitted_ratio) + "," +
              std::to_string(result.fit_points) + "\n";
    }
  } else {
    body = "n,abs_diff_lo,abs_diff_hi,fitted_ratio,fit_points\n";
    for (const auto& row : result.rows) {
      body += std::to_string(row.n) + "," +
              enclosureCsv(std::get<Enclosure>(row.abs_diff)) + "," +
              formatDouble(result.fitted_ratio) + "," +
              std::to_string(result.fit_points) + "\n";
    }
  }
  emit(args.opt, body);
  return 0;
}

// ----------------------------------------------------------------------------
// check
// ----------------------------------------------------------------------------

struct CheckArgs {
  Options opt;
  std::string suite;
  int max_depth = -1;      // suite-specific default when negative
  unsigned long max_entry = 40;
  std::string variant = "corrected";
};

struct SuiteOutcome {
  bool ok = false;
  unsigned long long checked = 0;
  std::string detail;
};

SuiteOutcome runSuitePartition(const CheckArgs& args) {
  auto report = cwforest::partition_check(args.opt.params(), args.max_entry);
  SuiteOutcome out;
  out.ok = report.ok();
  out.checked = report.checked;
  out.detail = out.ok ? "all reduced fractions locate and walk back"
                      : std::to_string(report.failure_count) + " failures" +
                            (report.failure_samples.empty()
                                 ? std::string()
                                 : ", first: " + report.failure_samples.front());
  return out;
}

SuiteOutcome runSuiteSymmetry(const CheckArgs& args, int max_depth) {
  if (args.opt.u != 1 || args.opt.v != 1) {
    throw cwforest::DomainError("the symmetry suite is specific to --u 1 --v 1");
  }
  SuiteOutcome out;
  for (int n = 0; n <= max_depth; ++n) {
    if (!cwforest::symmetric_row_check(n)) {
      out.ok = false;
      out.detail = "row " + std::to_string(n) + " not symmetric";
      return out;
    }
    out.checked += 1ull << n;
  }
  out.ok = true;
  out.detail = "mirror products equal 1 through n=" + std::to_string(max_depth);
  return out;
}

SuiteOutcome runSuiteMonotonicity(const CheckArgs& args, int max_depth) {
  auto result = cwforest::monotonicity_check(args.opt.params(), max_depth,
                                             SumMode::exact(),
                                             args.opt.resolved_workers());
  SuiteOutcome out;
  out.ok = result.all_ok();
  out.checked = result.roots.size() * static_cast<unsigned long long>(max_depth);
  if (out.ok) {
    out.detail = "means strictly increase below both endpoint roots";
  } else {
    for (const auto& r : result.roots) {
      if (!r.ok) {
        out.detail = "first violation below " + r.root.str() + " at n=" +
                     std::to_string(r.first_violation);
        break;
      }
    }
  }
  return out;
}

SuiteOutcome runSuiteMcount(const CheckArgs& args, int max_depth) {
  HistogramVariant variant = args.variant == "paper"
                                 ? HistogramVariant::Published
                                 : HistogramVariant::Corrected;
  const Rational roots[] = {Rational(1, 1), Rational(2, 5), Rational(3, 1)};
  SuiteOutcome out;
  for (const Rational& root : roots) {
    for (int n = 0; n <= max_depth; ++n) {
      auto observed = cwforest::cf_length_counts(
          root, n, args.opt.params(), args.opt.resolved_workers());
      auto predicted =
          cwforest::predicted_cf_length_counts(root, n, variant);
      ++out.checked;
      if (observed != predicted) {
        out.ok = false;
        out.detail = "histogram mismatch at root " + root.str() + ", n=" +
                     std::to_string(n) + " (variant " + args.variant + ")";
        return out;
      }
    }
  }
  out.ok = true;
  out.detail = "predicted histograms match enumeration (variant " +
               args.variant + ")";
  return out;
}

SuiteOutcome runSuiteClosedForm(const CheckArgs& args, int max_depth) {
  if (args.opt.u != 1 || args.opt.v != 1) {
    throw cwforest::DomainError(
        "the closed-form-11 suite is specific to --u 1 --v 1");
  }
  SuiteOutcome out;
  out.ok = cwforest::closed_form_check_11(max_depth,
                                          args.opt.resolved_workers());
  out.checked = static_cast<unsigned long long>(max_depth) + 1;
  out.detail = out.ok ? "row sums match (3*2^n - 1)/2 through n=" +
                            std::to_string(max_depth)
                      : "row sums diverged from the closed form";
  return out;
}

int runCheck(const CheckArgs& args) {
  SuiteOutcome out;
  if (args.suite == "partition") {
    out = runSuitePartition(args);
  } else if (args.suite == "symmetry") {
    out = runSuiteSymmetry(args, args.max_depth < 0 ? 12 : args.max_depth);
  } else if (args.suite == "monotonicity") {
    out = runSuiteMonotonicity(args, args.max_depth < 0 ? 12 : args.max_depth);
  } else if (args.suite == "mcount") {
    out = runSuiteMcount(args, args.max_depth < 0 ? 10 : args.max_depth);
  } else {  // closed-form-11 (membership enforced by CLI11)
    out = runSuiteClosedForm(args, args.max_depth < 0 ? 12 : args.max_depth);
  }

  switch (args.opt.parsed_format()) {
    case Format::Json: {
      json doc{{"schema_version", kSchemaVersion},
               {"command", "check"},
               {"suite", args.suite},
               {"u", args.opt.u},
               {"v", args.opt.v},
               {"ok", out.ok},
               {"checked", out.checked},
               {"detail", out.detail}};
      emit(args.opt, jsonBody(doc));
      break;
    }
    case Format::Csv: {
      std::string body = "suite,ok,checked,detail\n";
      body += args.suite + "," + (out.ok ? "true" : "false") + "," +
              std::to_string(out.checked) + ",\"" + out.detail + "\"\n";
      emit(args.opt, body);
      break;
    }
    case Format::Text: {
      std::string body = "suite: " + args.suite + "\n";
      body += std::string("ok: ") + (out.ok ? "true" : "false") + "\n";
      body += "checked: " + std::to_string(out.checked) + "\n";
      body += "detail: " + out.detail + "\n";
      emit(args.opt, body);
      break;
    }
  }
  return out.ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cwforest: exact navigation and row statistics of (u,v) "
               "Calkin-Wilf forests"};
  app.require_subcommand(1);

  RowArgs row_args;
  CLI::App* row = app.add_subcommand("row", "Enumerate one row of a tree");
  addParamFlags(row, row_args.opt);
  row->add_option("--root", row_args.root, "Tree root as A/B or A")->required();
  row->add_option("--depth", row_args.depth, "Row depth n")
      ->check(CLI::Range(0, 62))
      ->required();
  row->add_option("--limit", row_args.limit,
                  "List at most this many vertices (statistics still cover "
                  "the whole row)");
  addComputeFlags(row, row_args.opt);
  addOutputFlags(row, row_args.opt);

  MeanArgs mean_args;
  CLI::App* mean = app.add_subcommand("mean", "Row sums and means per depth");
  addParamFlags(mean, mean_args.opt);
  mean->add_option("--root", mean_args.root, "Tree root as A/B or A")->required();
  mean->add_option("--max-depth", mean_args.max_depth, "Largest row depth")
      ->check(CLI::Range(0, 62))
      ->required();
  addModeFlag(mean, mean_args.opt);
  addComputeFlags(mean, mean_args.opt);
  addOutputFlags(mean, mean_args.opt);

  LocateArgs locate_args;
  CLI::App* locate = app.add_subcommand("locate", "Find a value's root and path");
  addParamFlags(locate, locate_args.opt);
  locate->add_option("value", locate_args.value, "Positive rational A/B")
      ->required();
  addOutputFlags(locate, locate_args.opt);

  DescendantArgs desc_args;
  CLI::App* desc = app.add_subcommand(
      "descendant", "Decide subtree membership from coefficient structure");
  addParamFlags(desc, desc_args.opt);
  desc->add_option("--ancestor", desc_args.ancestor, "Subtree root A/B")
      ->required();
  desc->add_option("--query", desc_args.query, "Value to test A/B")->required();
  addOutputFlags(desc, desc_args.opt);

  CfArgs cf_args;
  CLI::App* cf = app.add_subcommand("cf", "Continued-fraction codec");
  cf->add_option("value", cf_args.value, "Positive rational A/B to encode");
  cf->add_option("--decode", cf_args.decode,
                 "Coefficient list \"[q0,q1,...]\" to decode");
  addOutputFlags(cf, cf_args.opt);

  HistArgs hist_args;
  CLI::App* hist = app.add_subcommand(
      "cflen-hist", "Observed vs predicted coefficient-count histogram");
  addParamFlags(hist, hist_args.opt);
  hist->add_option("--root", hist_args.root, "Tree root as A/B or A")->required();
  hist->add_option("--depth", hist_args.depth, "Row depth n")
      ->check(CLI::Range(0, 62))
      ->required();
  hist->add_option("--variant", hist_args.variant,
                   "Predictor variant: the as-printed formula or the "
                   "corrected one")
      ->check(CLI::IsMember({"paper", "corrected"}))
      ->capture_default_str();
  addComputeFlags(hist, hist_args.opt);
  addOutputFlags(hist, hist_args.opt);

  ConvergeArgs conv_args;
  CLI::App* conv = app.add_subcommand(
      "converge", "Row means against the certified limit, per root");
  addParamFlags(conv, conv_args.opt);
  conv->add_option("--roots", conv_args.roots,
                   "Comma-separated list of roots, e.g. \"1/2,1,2\"")
      ->required();
  conv->add_option("--max-depth", conv_args.max_depth, "Largest row depth")
      ->check(CLI::Range(0, 62))
      ->required();
  addModeFlag(conv, conv_args.opt);
  addComputeFlags(conv, conv_args.opt);
  addOutputFlags(conv, conv_args.opt);

  DecayArgs decay_args;
  CLI::App* decay = app.add_subcommand(
      "decay", "How fast the means below two roots approach each other");
  addParamFlags(decay, decay_args.opt);
  decay->add_option("--z1", decay_args.z1, "First root A/B")->required();
  decay->add_option("--z2", decay_args.z2, "Second root A/B")->required();
  decay->add_option("--max-depth", decay_args.max_depth, "Largest row depth")
      ->check(CLI::Range(0, 62))
      ->required();
  decay->add_option("--fit-window", decay_args.fit_window,
                    "Tail rows used for the decay fit")
      ->check(CLI::Range(2, 63))
      ->capture_default_str();
  addModeFlag(decay, decay_args.opt);
  addComputeFlags(decay, decay_args.opt);
  addOutputFlags(decay, decay_args.opt);

  CheckArgs check_args;
  CLI::App* check = app.add_subcommand("check", "Self-check suites");
  check->add_option("--suite", check_args.suite, "Which suite to run")
      ->check(CLI::IsMember({"partition", "symmetry", "monotonicity", "mcount",
                             "closed-form-11"}))
      ->required();
  addParamFlags(check, check_args.opt);
  check->add_option("--max-depth", check_args.max_depth,
                    "Depth bound (suite-specific default)")
      ->check(CLI::Range(0, 62));
  check->add_option("--max-entry", check_args.max_entry,
                    "Partition suite: largest numerator/denominator")
      ->check(CLI::Range(1ul, 10000ul))
      ->capture_default_str();
  check->add_option("--variant", check_args.variant,
                    "mcount suite: predictor variant")
      ->check(CLI::IsMember({"paper", "corrected"}))
      ->capture_default_str();
  addComputeFlags(check, check_args.opt);
  addOutputFlags(check, check_args.opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // help text, exit 0
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the usage message
    return 1;
  }

  if (int rc = rejectInvalidEnvValues(app); rc != 0) return rc;

  try {
    if (row->parsed()) return runRow(row_args);
    if (mean->parsed()) return runMean(mean_args);
    if (locate->parsed()) return runLocate(locate_args);
    if (desc->parsed()) return runDescendant(desc_args);
    if (cf->parsed()) {
      if (cf_args.decode.empty() == cf_args.value.empty()) {
        std::cerr << "cf: give exactly one of a value or --decode\n";
        return 1;
      }
      return runCf(cf_args);
    }
    if (hist->parsed()) return runHist(hist_args);
    if (conv->parsed()) return runConverge(conv_args);
    if (decay->parsed()) return runDecay(decay_args);
    if (check->parsed()) return runCheck(check_args);
  } catch (const cwforest::Error& e) {
    std::cerr << "cwforest: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "cwforest: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
