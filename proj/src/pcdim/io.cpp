#include "pcdim/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace pcdim {

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool is_missing_token(const std::string& token) {
  const std::string t = lower(token);
  return t.empty() || t == "na" || t == "n/a" || t == "nan" || t == "null";
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return s.substr(b, e - b);
}

struct Line {
  std::size_t number;  // 1-based position in the file
  std::string text;
};

std::vector<Line> split_lines(const std::string& text) {
  std::vector<Line> lines;
  std::size_t lineno = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    ++lineno;
    std::string line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!trim(line).empty()) lines.push_back({lineno, std::move(line)});
    pos = end + 1;
    if (end == text.size()) break;
  }
  return lines;
}

enum class Delim { Comma, Semicolon, Tab, Whitespace };

Delim resolve_delimiter(const std::string& requested, const std::string& sample,
                        const std::string& origin) {
  const std::string r = lower(requested);
  if (r == "," || r == "comma") return Delim::Comma;
  if (r == ";" || r == "semicolon") return Delim::Semicolon;
  if (r == "\t" || r == "tab") return Delim::Tab;
  if (r == " " || r == "space" || r == "whitespace") return Delim::Whitespace;
  require(r == "auto" || r.empty(), Status::InvalidArgument,
          origin + ": unsupported delimiter '" + requested + "'");
  if (sample.find(',') != std::string::npos) return Delim::Comma;
  if (sample.find('\t') != std::string::npos) return Delim::Tab;
  if (sample.find(';') != std::string::npos) return Delim::Semicolon;
  return Delim::Whitespace;
}

std::vector<std::string> tokenize(const std::string& line, Delim delim) {
  std::vector<std::string> tokens;
  if (delim == Delim::Whitespace) {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
      if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
  }
  const char sep = delim == Delim::Comma ? ',' : delim == Delim::Semicolon ? ';' : '\t';
  std::size_t pos = 0;
  while (true) {
    std::size_t end = line.find(sep, pos);
    if (end == std::string::npos) {
      tokens.push_back(trim(line.substr(pos)));
      break;
    }
    tokens.push_back(trim(line.substr(pos, end - pos)));
    pos = end + 1;
  }
  return tokens;
}

double parse_cell(const std::string& token, std::size_t lineno, std::size_t column,
                  const std::string& origin) {
  require(!is_missing_token(token), Status::MissingValue,
          origin + ": missing value at line " + std::to_string(lineno) + ", column " +
              std::to_string(column));
  double value = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  require(ec == std::errc() && ptr == last && std::isfinite(value), Status::ParseError,
          origin + ": cannot parse '" + token + "' at line " + std::to_string(lineno) +
              ", column " + std::to_string(column));
  return value;
}

}  // namespace

DataMatrix parse_matrix_text(const std::string& text, const ReadOptions& opts,
                             const std::string& origin) {
  std::vector<Line> lines = split_lines(text);
  require(!lines.empty(), Status::EmptyInput, origin + ": file holds no data");
  std::size_t start = 0;
  if (opts.header) start = 1;
  require(lines.size() > start, Status::EmptyInput, origin + ": no data rows after header");

  const Delim delim = resolve_delimiter(opts.delimiter, lines[start].text, origin);
  const std::size_t rows = lines.size() - start;
  std::vector<std::vector<std::string>> cells(rows);
  std::size_t width = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    cells[r] = tokenize(lines[start + r].text, delim);
    if (r == 0) {
      width = cells[0].size();
      require(width >= 1, Status::EmptyInput, origin + ": first data row is empty");
    } else {
      require(cells[r].size() == width, Status::RaggedRows,
              origin + ": line " + std::to_string(lines[start + r].number) + " has " +
                  std::to_string(cells[r].size()) + " fields, expected " +
                  std::to_string(width));
    }
  }

  Matrix raw(rows, width);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < width; ++c)
      raw(r, c) = parse_cell(cells[r][c], lines[start + r].number, c + 1, origin);

  Matrix oriented;
  if (opts.columns_are_observations) {
    oriented = Matrix(width, rows);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < width; ++c) oriented(c, r) = raw(r, c);
  } else {
    oriented = std::move(raw);
  }
  require(oriented.rows() >= 2, Status::TooFewObservations,
          origin + ": need at least 2 observations, found " + std::to_string(oriented.rows()));
  return make_data(std::move(oriented));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Status::IoError, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  require(!in.bad(), Status::IoError, "cannot read '" + path + "'");
  return buffer.str();
}

DataMatrix read_matrix(const std::string& path, const ReadOptions& opts) {
  return parse_matrix_text(read_text_file(path), opts, path);
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), Status::IoError, "cannot create '" + tmp + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    require(out.good(), Status::IoError, "cannot write '" + tmp + "'");
  }
  require(std::rename(tmp.c_str(), path.c_str()) == 0, Status::IoError,
          "cannot move '" + tmp + "' into place");
}

std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t hash = 14695981039346656037ULL;
  for (std::size_t i = 0; i < len; ++i) {
    hash ^= bytes[i];
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string file_fingerprint(const std::string& path) {
  const std::string bytes = read_text_file(path);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
  return buf;
}

namespace {

double json_number(const Json& j, const char* key, double fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  require(j.at(key).is_number(), Status::InvalidArgument,
          std::string("option '") + key + "' must be a number");
  return j.at(key).get<double>();
}

bool json_flag(const Json& j, const char* key, bool fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  require(j.at(key).is_boolean(), Status::InvalidArgument,
          std::string("option '") + key + "' must be a boolean");
  return j.at(key).get<bool>();
}

std::string json_string(const Json& j, const char* key, const std::string& fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  require(j.at(key).is_string(), Status::InvalidArgument,
          std::string("option '") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

std::size_t json_count(const Json& j, const char* key, std::size_t fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  require(j.at(key).is_number_integer() && j.at(key).get<long long>() >= 0,
          Status::InvalidArgument, std::string("option '") + key + "' must be a count");
  return j.at(key).get<std::size_t>();
}

Json parse_json(const std::string& text, const std::string& what) {
  Json j = Json::parse(text, nullptr, false);
  require(!j.is_discarded(), Status::ParseError, "invalid JSON in " + what);
  return j;
}

void apply_read_options(const Json& j, ReadOptions& read) {
  read.delimiter = json_string(j, "delimiter", read.delimiter);
  read.header = json_flag(j, "header", read.header);
  if (j.contains("orientation") && !j.at("orientation").is_null()) {
    const std::string o = json_string(j, "orientation", "rows");
    require(o == "rows" || o == "columns", Status::InvalidArgument,
            "orientation must be 'rows' or 'columns'");
    read.columns_are_observations = o == "columns";
  }
  read.columns_are_observations =
      json_flag(j, "columns_are_observations", read.columns_are_observations);
}

void apply_tests(const Json& j, bool& dagostino, bool& triples) {
  if (!j.contains("tests") || j.at("tests").is_null()) return;
  require(j.at("tests").is_array(), Status::InvalidArgument, "'tests' must be an array");
  dagostino = false;
  triples = false;
  for (const auto& t : j.at("tests")) {
    require(t.is_string(), Status::InvalidArgument, "'tests' entries must be strings");
    const std::string name = lower(t.get<std::string>());
    if (name == "dagostino") {
      dagostino = true;
    } else if (name == "triples") {
      triples = true;
    } else {
      fail(Status::InvalidArgument, "unknown test '" + name + "'");
    }
  }
  require(dagostino || triples, Status::InvalidArgument, "'tests' must name at least one test");
}

}  // namespace

EstimateDocOptions estimate_options_from_json(const std::string& json_text) {
  const Json j = parse_json(json_text, "options");
  EstimateDocOptions opts;
  opts.alpha = json_number(j, "alpha", opts.alpha);
  require(opts.alpha > 0.0 && opts.alpha < 1.0, Status::InvalidArgument,
          "alpha must lie in (0,1)");
  apply_tests(j, opts.run_dagostino, opts.run_triples);
  opts.max_k = json_count(j, "max_k", opts.max_k);
  opts.center = json_flag(j, "center", opts.center);
  opts.standardize = json_flag(j, "standardize", opts.standardize);
  apply_read_options(j, opts.read);
  return opts;
}

SweepDocOptions sweep_options_from_json(const std::string& json_text) {
  const Json j = parse_json(json_text, "options");
  SweepDocOptions opts;
  opts.base = estimate_options_from_json(json_text);
  require(j.contains("alphas") && j.at("alphas").is_array() && !j.at("alphas").empty(),
          Status::InvalidArgument, "'alphas' must be a non-empty array");
  for (const auto& a : j.at("alphas")) {
    require(a.is_number(), Status::InvalidArgument, "'alphas' entries must be numbers");
    const double v = a.get<double>();
    require(v > 0.0 && v < 1.0, Status::InvalidArgument, "each alpha must lie in (0,1)");
    opts.alphas.push_back(v);
  }
  return opts;
}

namespace {

struct PipelineRun {
  std::size_t n = 0, d = 0, M = 0;
  GramPipeline pipe;
};

PipelineRun run_for_estimate(DataMatrix X, bool center, bool standardize, std::size_t max_k) {
  if (center) X = center_columns(X);
  if (standardize) X = standardize_columns(X);
  PipelineRun run;
  run.n = X.n();
  run.d = X.d();
  run.M = max_k;
  if (run.M == kAutoM) run.M = std::min({run.n - 2, run.d, std::size_t{30}});
  const std::size_t cap = center ? run.n - 2 : run.n - 1;
  require(run.M <= cap, Status::InvalidArgument,
          "max_k must not exceed " + std::to_string(cap) + " for n = " + std::to_string(run.n));
  run.pipe = run_gram_pipeline(X, run.M);
  return run;
}

const char* kind_name(SkewTestKind kind) {
  return kind == SkewTestKind::DAgostino ? "dagostino" : "triples";
}

Json estimate_json(const PValueSequence& P, double alpha) {
  const Estimate E = estimate_m(P, alpha);
  Json e;
  e["test"] = kind_name(P.kind);
  e["m_hat"] = E.m_hat;
  e["saturated"] = E.saturated;
  e["alpha"] = alpha;
  e["pvalues"] = P.p;
  e["statistics"] = P.statistic;
  e["skewness"] = P.skewness;
  Json degen = Json::array();
  for (std::size_t k = 0; k <= P.M; ++k)
    if (P.degenerate[k]) degen.push_back(k);
  e["degenerate_columns"] = degen;
  e["small_sample_warning"] = P.small_sample_warning;
  return e;
}

Json tool_block() {
  Json t;
  t["name"] = kToolName;
  t["version"] = kToolVersion;
  return t;
}

Json input_block(const std::string& path, const ReadOptions& read, std::size_t n,
                 std::size_t d) {
  Json in;
  in["path"] = path;
  in["content_hash"] = file_fingerprint(path);
  in["n"] = n;
  in["d"] = d;
  in["orientation"] =
      read.columns_are_observations ? "columns_are_observations" : "rows_are_observations";
  in["delimiter"] = read.delimiter;
  in["header"] = read.header;
  return in;
}

void append_common_warnings(Json& warnings, std::size_t n, std::size_t d) {
  if (n > d)
    warnings.push_back(
        "more observations (n=" + std::to_string(n) + ") than variables (d=" +
        std::to_string(d) +
        "); if rows are variables, rerun with the columns-are-observations orientation");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Json build_estimate_document(const std::string& input_path, const EstimateDocOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const DataMatrix X = read_matrix(input_path, opts.read);
  const std::size_t n_in = X.n(), d_in = X.d();
  PipelineRun run = run_for_estimate(X, opts.center, opts.standardize, opts.max_k);

  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["tool"] = tool_block();
  doc["command"] = "estimate";
  doc["input"] = input_block(input_path, opts.read, n_in, d_in);
  Json cfg;
  cfg["alpha"] = opts.alpha;
  Json tests = Json::array();
  if (opts.run_dagostino) tests.push_back("dagostino");
  if (opts.run_triples) tests.push_back("triples");
  cfg["tests"] = tests;
  cfg["max_k"] = run.M;
  cfg["center"] = opts.center;
  cfg["standardize"] = opts.standardize;
  doc["config"] = cfg;

  Json warnings = Json::array();
  append_common_warnings(warnings, n_in, d_in);

  Json estimates = Json::array();
  std::vector<SkewTestKind> kinds;
  if (opts.run_dagostino) kinds.push_back(SkewTestKind::DAgostino);
  if (opts.run_triples) kinds.push_back(SkewTestKind::Triples);
  for (SkewTestKind kind : kinds) {
    const PValueSequence P = pvalue_sequence(run.pipe.residuals, kind);
    Json e = estimate_json(P, opts.alpha);
    if (P.small_sample_warning)
      warnings.push_back(std::string(kind_name(kind)) +
                         ": sample size is small for reliable calibration");
    if (!e["degenerate_columns"].empty())
      warnings.push_back(std::string(kind_name(kind)) +
                         ": some residual columns were numerically degenerate");
    if (e["saturated"].get<bool>())
      warnings.push_back(std::string(kind_name(kind)) +
                         ": no hypothesis was accepted up to max_k; the estimate is a floor");
    estimates.push_back(std::move(e));
  }
  doc["estimates"] = estimates;

  std::vector<double> lambda(run.n);
  for (std::size_t i = 0; i < run.n; ++i)
    lambda[i] = run.pipe.eigen.eigenvalues[i] / static_cast<double>(run.n);
  double total = 0.0;
  for (double v : lambda) total += v;
  std::vector<double> cumpct(lambda.size(), 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    acc += lambda[i];
    cumpct[i] = total > 0.0 ? 100.0 * acc / total : 0.0;
  }
  Json scree;
  scree["sample_eigenvalues"] = lambda;
  scree["cumulative_percent"] = cumpct;
  doc["scree"] = scree;

  doc["warnings"] = warnings;
  Json timing;
  timing["seconds"] = seconds_since(t0);
  doc["timing"] = timing;
  return doc;
}

Json build_alpha_sweep_document(const std::string& input_path, const SweepDocOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string raw = read_text_file(input_path);
  std::size_t first = raw.find_first_not_of(" \t\r\n");
  const bool from_result = first != std::string::npos && raw[first] == '{';

  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["tool"] = tool_block();
  doc["command"] = "alpha-sweep";

  struct Series {
    std::string name;
    PValueSequence P;
  };
  std::vector<Series> series;

  if (from_result) {
    const Json prior = parse_json(raw, "'" + input_path + "'");
    require(prior.contains("estimates") && prior.at("estimates").is_array() &&
                !prior.at("estimates").empty(),
            Status::InvalidArgument, "'" + input_path + "' holds no estimates to sweep");
    for (const auto& est : prior.at("estimates")) {
      Series s;
      require(est.contains("test") && est.at("test").is_string() && est.contains("pvalues") &&
                  est.at("pvalues").is_array(),
              Status::InvalidArgument, "estimate entries need 'test' and 'pvalues'");
      s.name = est.at("test").get<std::string>();
      s.P.p = est.at("pvalues").get<std::vector<double>>();
      s.P.M = s.P.p.empty() ? 0 : s.P.p.size() - 1;
      s.P.kind = s.name == "triples" ? SkewTestKind::Triples : SkewTestKind::DAgostino;
      s.P.skewness.assign(s.P.M + 1, 0.0);
      s.P.statistic.assign(s.P.M + 1, 0.0);
      s.P.degenerate.assign(s.P.M + 1, 0);
      if (est.contains("skewness"))
        s.P.skewness = est.at("skewness").get<std::vector<double>>();
      require(!s.P.p.empty(), Status::InvalidArgument, "estimate holds no p-values");
      series.push_back(std::move(s));
    }
    Json in;
    in["result_document"] = input_path;
    in["content_hash"] = file_fingerprint(input_path);
    if (prior.contains("input")) in["source_input"] = prior.at("input");
    doc["input"] = in;
  } else {
    const DataMatrix X = read_matrix(input_path, opts.base.read);
    const std::size_t n_in = X.n(), d_in = X.d();
    PipelineRun run =
        run_for_estimate(X, opts.base.center, opts.base.standardize, opts.base.max_k);
    doc["input"] = input_block(input_path, opts.base.read, n_in, d_in);
    if (opts.base.run_dagostino)
      series.push_back(
          {"dagostino", pvalue_sequence(run.pipe.residuals, SkewTestKind::DAgostino)});
    if (opts.base.run_triples)
      series.push_back({"triples", pvalue_sequence(run.pipe.residuals, SkewTestKind::Triples)});
  }

  Json cfg;
  cfg["alphas"] = opts.alphas;
  doc["config"] = cfg;

  Json sweep = Json::array();
  Json pvals;
  for (const Series& s : series) {
    Json entry;
    entry["test"] = s.name;
    Json table = Json::array();
    for (const Estimate& E : alpha_sweep(s.P, opts.alphas)) {
      Json row;
      row["alpha"] = E.alpha;
      row["m_hat"] = E.m_hat;
      row["saturated"] = E.saturated;
      table.push_back(std::move(row));
    }
    entry["table"] = table;
    sweep.push_back(std::move(entry));
    pvals[s.name] = s.P.p;
  }
  doc["sweep"] = sweep;
  doc["pvalues"] = pvals;
  doc["pvalues_recomputed"] = !from_result;
  Json timing;
  timing["seconds"] = seconds_since(t0);
  doc["timing"] = timing;
  return doc;
}

CasePreset case_preset(const std::string& name) {
  if (name == "I") return {0.2, 1.0, 0.0, Distribution::StandardNormal};
  if (name == "II") return {0.2, 1.0, 0.3, Distribution::StandardNormal};
  if (name == "III") return {0.2, 1.0, 0.3, Distribution::StudentT3};
  if (name == "IV") return {0.1, 0.5, 0.3, Distribution::StudentT3};
  fail(Status::InvalidArgument, "unknown case '" + name + "' (expected I, II, III or IV)");
}

SimSpec sim_spec_from_json(const std::string& json_text, std::string* case_label) {
  const Json j = parse_json(json_text, "simulation spec");
  SimSpec spec;
  std::string label = json_string(j, "case", "custom");
  if (label != "custom") {
    const CasePreset preset = case_preset(label);
    spec.s = preset.s;
    spec.g = preset.g;
    spec.beta = preset.beta;
    spec.distribution = preset.distribution;
  }
  spec.d = json_count(j, "d", spec.d);
  spec.n = json_count(j, "n", spec.n);
  spec.m = json_count(j, "m", spec.m);
  spec.s = json_number(j, "s", spec.s);
  spec.g = json_number(j, "g", spec.g);
  spec.beta = json_number(j, "beta", spec.beta);
  const std::string dist =
      lower(json_string(j, "distribution", json_string(j, "dist", "")));
  if (!dist.empty()) {
    if (dist == "normal" || dist == "gaussian") {
      spec.distribution = Distribution::StandardNormal;
    } else if (dist == "t3" || dist == "t") {
      spec.distribution = Distribution::StudentT3;
    } else {
      fail(Status::InvalidArgument, "unknown distribution '" + dist + "'");
    }
  } else if (label == "custom") {
    spec.distribution = Distribution::StandardNormal;
  }
  spec.seed = json_count(j, "seed", spec.seed);
  spec.replicates = json_count(j, "replicates", json_count(j, "reps", spec.replicates));
  spec.alpha = json_number(j, "alpha", spec.alpha);
  spec.kn_alpha = json_number(j, "kn_alpha", spec.kn_alpha);
  spec.M = json_count(j, "max_k", spec.M);
  if (j.contains("estimators") && !j.at("estimators").is_null()) {
    spec.estimators = {false, false, false, false};
    Json list = j.at("estimators");
    if (list.is_string() && lower(list.get<std::string>()) == "all") {
      spec.estimators = {true, true, true, true};
    } else {
      require(list.is_array() && !list.empty(), Status::InvalidArgument,
              "'estimators' must be a non-empty array or \"all\"");
      for (const auto& e : list) {
        require(e.is_string(), Status::InvalidArgument, "'estimators' entries must be strings");
        std::string name = lower(e.get<std::string>());
        std::replace(name.begin(), name.end(), '-', '_');
        if (name == "dagostino") {
          spec.estimators.dagostino = true;
        } else if (name == "triples") {
          spec.estimators.triples = true;
        } else if (name == "bai_ng") {
          spec.estimators.bai_ng = true;
        } else if (name == "kritchman_nadler") {
          spec.estimators.kritchman_nadler = true;
        } else {
          fail(Status::InvalidArgument, "unknown estimator '" + name + "'");
        }
      }
    }
  }
  if (case_label) *case_label = label;
  return spec;
}

Json build_simulate_document(const SimSpec& spec, const std::string& case_label) {
  const auto t0 = std::chrono::steady_clock::now();
  const SimSummary summary = run_replicates(spec);

  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["tool"] = tool_block();
  doc["command"] = "simulate";

  Json sp;
  sp["case"] = case_label;
  sp["d"] = spec.d;
  sp["n"] = spec.n;
  sp["m"] = spec.m;
  sp["s"] = spec.s;
  sp["g"] = spec.g;
  sp["beta"] = spec.beta;
  sp["distribution"] =
      spec.distribution == Distribution::StandardNormal ? "normal" : "t3";
  sp["seed"] = spec.seed;
  sp["replicates"] = spec.replicates;
  sp["alpha"] = spec.alpha;
  sp["kn_alpha"] = spec.kn_alpha;
  Json est = Json::array();
  if (spec.estimators.dagostino) est.push_back("dagostino");
  if (spec.estimators.triples) est.push_back("triples");
  if (spec.estimators.bai_ng) est.push_back("bai_ng");
  if (spec.estimators.kritchman_nadler) est.push_back("kritchman_nadler");
  sp["estimators"] = est;
  sp["max_k"] = summary.resolved_M;
  doc["spec"] = sp;

  Json methods = Json::array();
  for (const MethodSummary& ms : summary.methods) {
    Json mj;
    mj["method"] = ms.method;
    mj["mean"] = ms.mean;
    mj["stderr"] = ms.stderr_of_mean;
    mj["histogram"] = ms.histogram;
    methods.push_back(std::move(mj));
  }
  doc["methods"] = methods;

  std::map<std::string, std::size_t> failure_counts;
  Json reps = Json::array();
  for (const ReplicateRecord& rec : summary.replicates) {
    Json rj;
    rj["index"] = rec.index;
    rj["failed"] = rec.failed;
    if (rec.failed) {
      rj["error"] = rec.error;
      ++failure_counts[rec.error];
      reps.push_back(std::move(rj));
      continue;
    }
    Json mh;
    if (rec.m_dagostino != kNotRun) mh["dagostino"] = rec.m_dagostino;
    if (rec.m_triples != kNotRun) mh["triples"] = rec.m_triples;
    if (rec.m_bai_ng != kNotRun) mh["bai_ng"] = rec.m_bai_ng;
    if (rec.m_kritchman_nadler != kNotRun) mh["kritchman_nadler"] = rec.m_kritchman_nadler;
    rj["m_hat"] = mh;
    const std::size_t M = summary.resolved_M;
    if (spec.m <= M && spec.m < rec.skewness.size()) {
      rj["skewness_col_m"] = rec.skewness[spec.m];
    } else {
      rj["skewness_col_m"] = nullptr;
    }
    if (spec.m >= 1 && spec.m - 1 < rec.skewness.size()) {
      rj["skewness_col_m_prev"] = rec.skewness[spec.m - 1];
    } else {
      rj["skewness_col_m_prev"] = nullptr;
    }
    reps.push_back(std::move(rj));
  }
  doc["replicates"] = reps;

  Json failures;
  failures["count"] = summary.failure_count;
  Json messages = Json::array();
  for (const auto& [message, count] : failure_counts) {
    Json fm;
    fm["message"] = message;
    fm["count"] = count;
    messages.push_back(std::move(fm));
  }
  failures["messages"] = messages;
  doc["failures"] = failures;

  Json timing;
  timing["seconds"] = seconds_since(t0);
  doc["timing"] = timing;
  return doc;
}

}  // namespace pcdim
