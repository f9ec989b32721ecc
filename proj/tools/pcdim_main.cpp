#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "pcdim.h"
#include "vendor/CLI11.hpp"
#include "vendor/json.hpp"

using Json = nlohmann::ordered_json;

namespace {

int exit_code_for(pcdim_status s) {
  switch (s) {
    case PCDIM_OK:
      return 0;
    case PCDIM_PARSE_ERROR:
    case PCDIM_MISSING_VALUE:
    case PCDIM_RAGGED_ROWS:
    case PCDIM_EMPTY_INPUT:
    case PCDIM_IO_ERROR:
    case PCDIM_TOO_FEW_OBSERVATIONS:
      return 2;
    case PCDIM_INVALID_ARGUMENT:
    case PCDIM_OUT_OF_RANGE:
      return 4;
    default:
      return 3;
  }
}

int fail_with(pcdim_status s) {
  Json detail;
  detail["status"] = pcdim_status_name(s);
  detail["message"] = pcdim_last_error();
  detail["exit_code"] = exit_code_for(s);
  Json err;
  err["error"] = detail;
  std::cerr << err.dump() << "\n";
  return exit_code_for(s);
}

int fail_usage(const std::string& message) {
  Json detail;
  detail["status"] = "invalid_argument";
  detail["message"] = message;
  detail["exit_code"] = 4;
  Json err;
  err["error"] = detail;
  std::cerr << err.dump() << "\n";
  return 4;
}

int deliver(const std::string& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc;
    return 0;
  }
  const pcdim_status s = pcdim_write_text_atomic(out_path.c_str(), doc.c_str());
  return s == PCDIM_OK ? 0 : fail_with(s);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int write_plot(const std::string& path, const std::string& content) {
  const pcdim_status s = pcdim_write_text_atomic(path.c_str(), content.c_str());
  return s == PCDIM_OK ? 0 : fail_with(s);
}

int emit_estimate_plots(const Json& doc, const std::string& prefix) {
  for (const auto& est : doc.at("estimates")) {
    std::string text = "# k\tp_value\n";
    const auto& p = est.at("pvalues");
    for (std::size_t k = 0; k < p.size(); ++k)
      text += std::to_string(k) + "\t" + fmt(p[k].get<double>()) + "\n";
    const int rc =
        write_plot(prefix + ".pvalues." + est.at("test").get<std::string>() + ".dat", text);
    if (rc) return rc;
  }
  const auto& lam = doc.at("scree").at("sample_eigenvalues");
  const auto& cum = doc.at("scree").at("cumulative_percent");
  std::string text = "# i\tlambda_hat\tcumulative_percent\n";
  for (std::size_t i = 0; i < lam.size(); ++i)
    text += std::to_string(i + 1) + "\t" + fmt(lam[i].get<double>()) + "\t" +
            fmt(cum[i].get<double>()) + "\n";
  return write_plot(prefix + ".scree.dat", text);
}

int emit_sweep_plots(const Json& doc, const std::string& prefix) {
  for (const auto& entry : doc.at("sweep")) {
    std::string text = "# alpha\tm_hat\n";
    for (const auto& row : entry.at("table"))
      text += fmt(row.at("alpha").get<double>()) + "\t" +
              std::to_string(row.at("m_hat").get<std::size_t>()) + "\n";
    const int rc =
        write_plot(prefix + ".sweep." + entry.at("test").get<std::string>() + ".dat", text);
    if (rc) return rc;
  }
  return 0;
}

void print_warnings(const Json& doc) {
  if (!doc.contains("warnings")) return;
  for (const auto& w : doc.at("warnings"))
    std::cerr << "warning: " << w.get<std::string>() << "\n";
}

struct MatrixFlags {
  std::string orientation = "rows";
  std::string delimiter = "auto";
  bool header = false;
};

void add_matrix_flags(CLI::App* cmd, MatrixFlags& flags) {
  cmd->add_option("--orientation", flags.orientation,
                  "Which axis holds observations: rows | columns")
      ->check(CLI::IsMember({"rows", "columns"}))
      ->capture_default_str();
  cmd->add_option("--delimiter", flags.delimiter, "auto | , | ; | tab | space")
      ->capture_default_str();
  cmd->add_flag("--header", flags.header, "Skip the first line of the input file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Estimates how many principal components carry signal in wide (d >> n) data\n"
      "by sequentially testing the skewness of PCA residual lengths.\n"
      "Set PC_COUNT_THREADS to cap worker threads."};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read option defaults from a config file; flags win");
  app.set_version_flag("--version", [] { return std::string("pcdim ") + pcdim_version(); });

  auto* est = app.add_subcommand("estimate", "Estimate the component count from a matrix file");
  est->configurable();
  est->fallthrough();
  std::string est_input, est_test = "both", est_out, est_plot;
  MatrixFlags est_read;
  double est_alpha = 0.1;
  long long est_max_k = -1;
  bool est_center = false, est_standardize = false;
  est->add_option("input", est_input, "Delimited matrix file")->required();
  est->add_option("--alpha", est_alpha, "Acceptance threshold in (0,1)")->capture_default_str();
  est->add_option("--test", est_test, "dagostino | triples | both")
      ->check(CLI::IsMember({"dagostino", "triples", "both"}))
      ->capture_default_str();
  est->add_option("--max-k", est_max_k, "Highest order tested; default min(n-2, d, 30)");
  est->add_flag("--center", est_center, "Subtract column means first");
  est->add_flag("--standardize", est_standardize, "Scale columns to unit variance");
  add_matrix_flags(est, est_read);
  est->add_option("--out", est_out, "Write the JSON document here (default: stdout)");
  est->add_option("--plot-data", est_plot, "Prefix for flat plot-data files");

  auto* sim = app.add_subcommand("simulate", "Run the synthetic spiked-model study");
  sim->configurable();
  sim->fallthrough();
  std::string sim_case = "custom", sim_dist, sim_estimators = "dagostino", sim_out;
  std::size_t sim_d = 10000, sim_n = 100, sim_m = 0, sim_reps = 1;
  unsigned long long sim_seed = 1;
  double sim_s = 0.2, sim_g = 1.0, sim_beta = 0.0, sim_alpha = 0.1, sim_kn_alpha = 0.05;
  long long sim_max_k = -1;
  sim->add_option("--case", sim_case, "I | II | III | IV | custom")
      ->check(CLI::IsMember({"I", "II", "III", "IV", "custom"}))
      ->capture_default_str();
  sim->add_option("--d", sim_d, "Number of variables")->capture_default_str();
  sim->add_option("--n", sim_n, "Number of observations")->capture_default_str();
  sim->add_option("--m", sim_m, "True number of spikes")->capture_default_str();
  auto* opt_s = sim->add_option("--s", sim_s, "Signal scale (spike strength)");
  auto* opt_g = sim->add_option("--g", sim_g, "Spike separation");
  auto* opt_beta = sim->add_option("--beta", sim_beta, "Tail decay exponent in [0, 0.5)");
  auto* opt_dist =
      sim->add_option("--dist", sim_dist, "normal | t3")->check(CLI::IsMember({"normal", "t3"}));
  sim->add_option("--seed", sim_seed, "Base seed")->capture_default_str();
  sim->add_option("--reps", sim_reps, "Number of replicates")->capture_default_str();
  sim->add_option("--alpha", sim_alpha, "Acceptance threshold for the skewness scan")
      ->capture_default_str();
  sim->add_option("--kn-alpha", sim_kn_alpha, "Internal level of the eigenvalue-threshold method")
      ->capture_default_str();
  sim->add_option("--estimators", sim_estimators,
                  "Comma list of dagostino,triples,bai_ng,kritchman_nadler or 'all'")
      ->capture_default_str();
  sim->add_option("--max-k", sim_max_k, "Highest order tested; default min(n-2, d, 30)");
  sim->add_option("--out", sim_out, "Write the JSON document here (default: stdout)");

  auto* sweep = app.add_subcommand("alpha-sweep",
                                   "Tabulate the estimate across acceptance thresholds");
  sweep->configurable();
  sweep->fallthrough();
  std::string sweep_input, sweep_test = "both", sweep_out, sweep_plot;
  MatrixFlags sweep_read;
  std::vector<double> sweep_alphas;
  long long sweep_max_k = -1;
  bool sweep_center = false, sweep_standardize = false;
  sweep->add_option("input", sweep_input, "Matrix file, or a prior estimate document")
      ->required();
  sweep->add_option("--alphas", sweep_alphas, "Thresholds to sweep (default 0.02..0.9 grid)")
      ->delimiter(',');
  sweep->add_option("--test", sweep_test, "dagostino | triples | both")
      ->check(CLI::IsMember({"dagostino", "triples", "both"}))
      ->capture_default_str();
  sweep->add_option("--max-k", sweep_max_k, "Highest order tested; default min(n-2, d, 30)");
  sweep->add_flag("--center", sweep_center, "Subtract column means first");
  sweep->add_flag("--standardize", sweep_standardize, "Scale columns to unit variance");
  add_matrix_flags(sweep, sweep_read);
  sweep->add_option("--out", sweep_out, "Write the JSON document here (default: stdout)");
  sweep->add_option("--plot-data", sweep_plot, "Prefix for flat plot-data files");

  auto* ver = app.add_subcommand("version", "Print the tool version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail_usage(e.what());
  }

  if (ver->parsed()) {
    std::cout << "pcdim " << pcdim_version() << "\n";
    return 0;
  }

  if (est->parsed()) {
    Json o;
    o["alpha"] = est_alpha;
    o["tests"] = est_test == "both" ? Json::array({"dagostino", "triples"})
                                    : Json::array({est_test});
    if (est_max_k >= 0) o["max_k"] = est_max_k;
    o["center"] = est_center;
    o["standardize"] = est_standardize;
    o["delimiter"] = est_read.delimiter;
    o["orientation"] = est_read.orientation;
    o["header"] = est_read.header;
    char* doc = nullptr;
    const pcdim_status s = pcdim_estimate_document(est_input.c_str(), o.dump().c_str(), &doc);
    if (s != PCDIM_OK) return fail_with(s);
    const std::string text = doc;
    pcdim_string_free(doc);
    const Json parsed = Json::parse(text);
    print_warnings(parsed);
    const int rc = deliver(text, est_out);
    if (rc) return rc;
    if (!est_plot.empty()) return emit_estimate_plots(parsed, est_plot);
    return 0;
  }

  if (sim->parsed()) {
    Json spec;
    spec["case"] = sim_case;
    spec["d"] = sim_d;
    spec["n"] = sim_n;
    spec["m"] = sim_m;
    if (opt_s->count()) spec["s"] = sim_s;
    if (opt_g->count()) spec["g"] = sim_g;
    if (opt_beta->count()) spec["beta"] = sim_beta;
    if (opt_dist->count()) spec["distribution"] = sim_dist;
    spec["seed"] = sim_seed;
    spec["replicates"] = sim_reps;
    spec["alpha"] = sim_alpha;
    spec["kn_alpha"] = sim_kn_alpha;
    if (sim_max_k >= 0) spec["max_k"] = sim_max_k;
    if (sim_estimators == "all") {
      spec["estimators"] = "all";
    } else {
      Json list = Json::array();
      std::size_t pos = 0;
      while (pos <= sim_estimators.size()) {
        std::size_t end = sim_estimators.find(',', pos);
        if (end == std::string::npos) end = sim_estimators.size();
        const std::string name = sim_estimators.substr(pos, end - pos);
        if (!name.empty()) list.push_back(name);
        pos = end + 1;
      }
      if (list.empty()) return fail_usage("--estimators must name at least one method");
      spec["estimators"] = list;
    }
    char* doc = nullptr;
    const pcdim_status s = pcdim_simulate_document(spec.dump().c_str(), &doc);
    if (s != PCDIM_OK) return fail_with(s);
    const std::string text = doc;
    pcdim_string_free(doc);
    return deliver(text, sim_out);
  }

  if (sweep->parsed()) {
    if (sweep_alphas.empty())
      sweep_alphas = {0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    Json o;
    o["alphas"] = sweep_alphas;
    o["tests"] = sweep_test == "both" ? Json::array({"dagostino", "triples"})
                                      : Json::array({sweep_test});
    if (sweep_max_k >= 0) o["max_k"] = sweep_max_k;
    o["center"] = sweep_center;
    o["standardize"] = sweep_standardize;
    o["delimiter"] = sweep_read.delimiter;
    o["orientation"] = sweep_read.orientation;
    o["header"] = sweep_read.header;
    char* doc = nullptr;
    const pcdim_status s =
        pcdim_alpha_sweep_document(sweep_input.c_str(), o.dump().c_str(), &doc);
    if (s != PCDIM_OK) return fail_with(s);
    const std::string text = doc;
    pcdim_string_free(doc);
    const int rc = deliver(text, sweep_out);
    if (rc) return rc;
    if (!sweep_plot.empty()) return emit_sweep_plots(Json::parse(text), sweep_plot);
    return 0;
  }

  return fail_usage("no command given");
}
