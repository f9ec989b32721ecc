#include "pcdim.h"

#include <cstring>
#include <string>

#include "pcdim/estimator.hpp"
#include "pcdim/io.hpp"

namespace {

thread_local std::string g_last_error;

pcdim_status to_status(pcdim::Status s) { return static_cast<pcdim_status>(s); }

template <typename Fn>
pcdim_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return PCDIM_OK;
  } catch (const pcdim::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PCDIM_INTERNAL_ERROR;
  } catch (...) {
    g_last_error = "unknown failure";
    return PCDIM_INTERNAL_ERROR;
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

pcdim_status copy_out(const std::vector<double>& src, double* out, size_t capacity) {
  return guarded([&] {
    pcdim::require(out != nullptr, pcdim::Status::InvalidArgument, "null output buffer");
    pcdim::require(capacity >= src.size(), pcdim::Status::InvalidArgument,
                   "output buffer too small");
    std::memcpy(out, src.data(), src.size() * sizeof(double));
  });
}

}  // namespace

struct pcdim_matrix {
  pcdim::DataMatrix data;
};

struct pcdim_result {
  pcdim::Estimate estimate;
};

extern "C" {

const char* pcdim_version(void) { return pcdim::kToolVersion; }

const char* pcdim_status_name(pcdim_status status) {
  if (status == PCDIM_INTERNAL_ERROR) return "internal_error";
  return pcdim::status_name(static_cast<pcdim::Status>(status));
}

const char* pcdim_last_error(void) { return g_last_error.c_str(); }

void pcdim_read_options_init(pcdim_read_options* opts) {
  if (!opts) return;
  opts->delimiter = nullptr;
  opts->columns_are_observations = 0;
  opts->has_header = 0;
}

pcdim_status pcdim_matrix_from_data(const double* values, size_t observations,
                                    size_t variables, pcdim_matrix** out) {
  return guarded([&] {
    pcdim::require(values != nullptr && out != nullptr, pcdim::Status::InvalidArgument,
                   "null pointer argument");
    pcdim::Matrix m(observations, variables);
    std::memcpy(m.data(), values, observations * variables * sizeof(double));
    *out = new pcdim_matrix{pcdim::make_data(std::move(m))};
  });
}

pcdim_status pcdim_matrix_read(const char* path, const pcdim_read_options* opts,
                               pcdim_matrix** out) {
  return guarded([&] {
    pcdim::require(path != nullptr && out != nullptr, pcdim::Status::InvalidArgument,
                   "null pointer argument");
    pcdim::ReadOptions ro;
    if (opts) {
      if (opts->delimiter) ro.delimiter = opts->delimiter;
      ro.columns_are_observations = opts->columns_are_observations != 0;
      ro.header = opts->has_header != 0;
    }
    *out = new pcdim_matrix{pcdim::read_matrix(path, ro)};
  });
}

size_t pcdim_matrix_observations(const pcdim_matrix* m) { return m ? m->data.n() : 0; }

size_t pcdim_matrix_variables(const pcdim_matrix* m) { return m ? m->data.d() : 0; }

void pcdim_matrix_free(pcdim_matrix* m) { delete m; }

void pcdim_estimate_options_init(pcdim_estimate_options* opts) {
  if (!opts) return;
  opts->alpha = 0.1;
  opts->use_triples = 0;
  opts->max_k = static_cast<size_t>(-1);
  opts->center = 0;
  opts->standardize = 0;
}

pcdim_status pcdim_estimate(const pcdim_matrix* m, const pcdim_estimate_options* opts,
                            pcdim_result** out) {
  return guarded([&] {
    pcdim::require(m != nullptr && out != nullptr, pcdim::Status::InvalidArgument,
                   "null pointer argument");
    pcdim::EstimatorConfig cfg;
    if (opts) {
      cfg.alpha = opts->alpha;
      cfg.kind = opts->use_triples ? pcdim::SkewTestKind::Triples
                                   : pcdim::SkewTestKind::DAgostino;
      cfg.m_max = opts->max_k;
      cfg.center = opts->center != 0;
      cfg.standardize = opts->standardize != 0;
    }
    *out = new pcdim_result{pcdim::estimate_from_data(m->data, cfg)};
  });
}

size_t pcdim_result_m_hat(const pcdim_result* r) { return r ? r->estimate.m_hat : 0; }

int pcdim_result_saturated(const pcdim_result* r) {
  return r && r->estimate.saturated ? 1 : 0;
}

double pcdim_result_alpha(const pcdim_result* r) { return r ? r->estimate.alpha : 0.0; }

size_t pcdim_result_count(const pcdim_result* r) {
  return r ? r->estimate.pvalues.p.size() : 0;
}

pcdim_status pcdim_result_pvalues(const pcdim_result* r, double* out, size_t capacity) {
  if (!r) return PCDIM_INVALID_ARGUMENT;
  return copy_out(r->estimate.pvalues.p, out, capacity);
}

pcdim_status pcdim_result_skewness(const pcdim_result* r, double* out, size_t capacity) {
  if (!r) return PCDIM_INVALID_ARGUMENT;
  return copy_out(r->estimate.pvalues.skewness, out, capacity);
}

size_t pcdim_result_eigenvalue_count(const pcdim_result* r) {
  return r ? r->estimate.sample_eigenvalues.size() : 0;
}

pcdim_status pcdim_result_eigenvalues(const pcdim_result* r, double* out, size_t capacity) {
  if (!r) return PCDIM_INVALID_ARGUMENT;
  return copy_out(r->estimate.sample_eigenvalues, out, capacity);
}

pcdim_status pcdim_result_m_for_alpha(const pcdim_result* r, double alpha, size_t* m_out,
                                      int* saturated_out) {
  return guarded([&] {
    pcdim::require(r != nullptr && m_out != nullptr, pcdim::Status::InvalidArgument,
                   "null pointer argument");
    const pcdim::Estimate e = pcdim::estimate_m(r->estimate.pvalues, alpha);
    *m_out = e.m_hat;
    if (saturated_out) *saturated_out = e.saturated ? 1 : 0;
  });
}

void pcdim_result_free(pcdim_result* r) { delete r; }

pcdim_status pcdim_estimate_document(const char* input_path, const char* options_json,
                                     char** document_json) {
  return guarded([&] {
    pcdim::require(input_path != nullptr && document_json != nullptr,
                   pcdim::Status::InvalidArgument, "null pointer argument");
    const pcdim::EstimateDocOptions opts =
        pcdim::estimate_options_from_json(options_json ? options_json : "{}");
    const pcdim::Json doc = pcdim::build_estimate_document(input_path, opts);
    *document_json = copy_string(doc.dump(2) + "\n");
  });
}

pcdim_status pcdim_alpha_sweep_document(const char* input_path, const char* options_json,
                                        char** document_json) {
  return guarded([&] {
    pcdim::require(input_path != nullptr && document_json != nullptr,
                   pcdim::Status::InvalidArgument, "null pointer argument");
    const pcdim::SweepDocOptions opts =
        pcdim::sweep_options_from_json(options_json ? options_json : "{}");
    const pcdim::Json doc = pcdim::build_alpha_sweep_document(input_path, opts);
    *document_json = copy_string(doc.dump(2) + "\n");
  });
}

pcdim_status pcdim_simulate_document(const char* spec_json, char** document_json) {
  return guarded([&] {
    pcdim::require(document_json != nullptr, pcdim::Status::InvalidArgument,
                   "null pointer argument");
    std::string label;
    const pcdim::SimSpec spec =
        pcdim::sim_spec_from_json(spec_json ? spec_json : "{}", &label);
    const pcdim::Json doc = pcdim::build_simulate_document(spec, label);
    *document_json = copy_string(doc.dump(2) + "\n");
  });
}

pcdim_status pcdim_write_text_atomic(const char* path, const char* content) {
  return guarded([&] {
    pcdim::require(path != nullptr && content != nullptr, pcdim::Status::InvalidArgument,
                   "null pointer argument");
    pcdim::write_text_atomic(path, content);
  });
}

void pcdim_string_free(char* s) { delete[] s; }

}  // extern "C"
