#include "diracjost/diracjost.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "diracjost/jost.hpp"
#include "diracjost/oracle.hpp"
#include "diracjost/profile.hpp"
#include "diracjost/spectrum.hpp"
#include "diracjost/verify.hpp"

struct dj_profile {
  dj::CoefficientProfile impl;
};

struct dj_series {
  dj::JostSeries impl;
};

namespace {

thread_local std::string g_last_error;

dj_status status_of(dj::ErrorCode code) {
  using dj::ErrorCode;
  switch (code) {
    case ErrorCode::DimensionMismatch: return DJ_ERR_DIMENSION_MISMATCH;
    case ErrorCode::SingularMatrix: return DJ_ERR_SINGULAR_MATRIX;
    case ErrorCode::NotHermitian: return DJ_ERR_NOT_HERMITIAN;
    case ErrorCode::ParseError: return DJ_ERR_PARSE;
    case ErrorCode::MissingField: return DJ_ERR_MISSING_FIELD;
    case ErrorCode::IndexOutOfDomain: return DJ_ERR_INDEX_OUT_OF_DOMAIN;
    case ErrorCode::DomainError: return DJ_ERR_DOMAIN;
    case ErrorCode::InvalidProfile: return DJ_ERR_INVALID_PROFILE;
    case ErrorCode::IllConditionedInterpolation: return DJ_ERR_ILL_CONDITIONED;
    case ErrorCode::DegenerateRoot: return DJ_ERR_DEGENERATE_ROOT;
    case ErrorCode::NullVectorNotFound: return DJ_ERR_NULL_VECTOR;
    case ErrorCode::TruncationTooSmall: return DJ_ERR_TRUNCATION_TOO_SMALL;
    case ErrorCode::IoError: return DJ_ERR_IO;
    case ErrorCode::InvalidArgument: return DJ_ERR_INVALID_ARGUMENT;
  }
  return DJ_ERR_INTERNAL;
}

template <class Fn>
dj_status guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return DJ_OK;
  } catch (const dj::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return DJ_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DJ_ERR_INTERNAL;
  }
}

void require(bool cond, const char* what) {
  if (!cond) throw dj::Error(dj::ErrorCode::InvalidArgument, what);
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

dj::EigenOptions eig_options(const dj_eig_options* o) {
  dj::EigenOptions e;
  if (o) {
    e.grid_points = o->grid_points;
    e.newton_tol = o->newton_tol;
    e.boundary_margin = o->boundary_margin;
  }
  e.check();
  return e;
}

dj::VerifyOptions verify_options(const dj_verify_options* o) {
  dj::VerifyOptions v;
  if (!o) return v;
  v.eig = eig_options(&o->eig);
  require(o->oracle_n > 0, "oracle_n must be positive");
  require(o->band_margin > 0.0, "band_margin must be positive");
  v.oracle_n = o->oracle_n;
  v.band_margin = o->band_margin;
  if (o->corrupt) v.corruption = dj::SeriesCorruption{o->corrupt_n, o->corrupt_s, o->corrupt_delta};
  return v;
}

void write_matrix(const dj::ComplexMatrix& a, double* out) {
  for (std::size_t k = 0; k < a.dim() * a.dim(); ++k) {
    const dj::cplx v = a(k / a.dim(), k % a.dim());
    out[2 * k] = v.real();
    out[2 * k + 1] = v.imag();
  }
}

std::string verify_render(const dj::VerifySummary& s, dj_format format) {
  switch (format) {
    case DJ_FORMAT_JSON: return dj::verify_to_json(s);
    case DJ_FORMAT_CSV: return dj::verify_to_csv(s);
    case DJ_FORMAT_TEXT: return dj::verify_to_text(s);
  }
  throw dj::Error(dj::ErrorCode::InvalidArgument, "unknown format");
}

}  // namespace

extern "C" {

const char* dj_last_error(void) { return g_last_error.c_str(); }

const char* dj_status_name(dj_status status) {
  switch (status) {
    case DJ_OK: return "ok";
    case DJ_ERR_DIMENSION_MISMATCH: return "DimensionMismatch";
    case DJ_ERR_SINGULAR_MATRIX: return "SingularMatrix";
    case DJ_ERR_NOT_HERMITIAN: return "NotHermitian";
    case DJ_ERR_PARSE: return "ParseError";
    case DJ_ERR_MISSING_FIELD: return "MissingField";
    case DJ_ERR_INDEX_OUT_OF_DOMAIN: return "IndexOutOfDomain";
    case DJ_ERR_DOMAIN: return "DomainError";
    case DJ_ERR_INVALID_PROFILE: return "InvalidProfile";
    case DJ_ERR_ILL_CONDITIONED: return "IllConditionedInterpolation";
    case DJ_ERR_DEGENERATE_ROOT: return "DegenerateRoot";
    case DJ_ERR_NULL_VECTOR: return "NullVectorNotFound";
    case DJ_ERR_TRUNCATION_TOO_SMALL: return "TruncationTooSmall";
    case DJ_ERR_IO: return "IoError";
    case DJ_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case DJ_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

void dj_string_free(char* s) { std::free(s); }

void dj_eig_options_default(dj_eig_options* opts) {
  if (!opts) return;
  const dj::EigenOptions e;
  opts->grid_points = e.grid_points;
  opts->newton_tol = e.newton_tol;
  opts->boundary_margin = e.boundary_margin;
}

void dj_verify_options_default(dj_verify_options* opts) {
  if (!opts) return;
  const dj::VerifyOptions v;
  dj_eig_options_default(&opts->eig);
  opts->oracle_n = v.oracle_n;
  opts->band_margin = v.band_margin;
  opts->corrupt = 0;
  opts->corrupt_n = 0;
  opts->corrupt_s = 1;
  opts->corrupt_delta = 1e-6;
}

dj_status dj_profile_new_free(size_t m, dj_profile** out) {
  return guard([&] {
    require(out, "null output handle");
    *out = new dj_profile{dj::free_profile(m)};
  });
}

dj_status dj_profile_load_json(const char* text, dj_profile** out) {
  return guard([&] {
    require(text && out, "null argument");
    *out = new dj_profile{dj::load_profile(text)};
  });
}

dj_status dj_profile_load_file(const char* path, dj_profile** out) {
  return guard([&] {
    require(path && out, "null argument");
    *out = new dj_profile{dj::load_profile_file(path)};
  });
}

dj_status dj_profile_random(uint64_t seed, size_t index, dj_profile** out) {
  return guard([&] {
    require(out, "null output handle");
    std::vector<dj::CoefficientProfile> suite = dj::random_suite(seed, index + 1);
    *out = new dj_profile{std::move(suite.back())};
  });
}

void dj_profile_destroy(dj_profile* p) { delete p; }

size_t dj_profile_dim(const dj_profile* p) { return p ? p->impl.dim() : 0; }

size_t dj_profile_cutoff(const dj_profile* p) { return p ? p->impl.cutoff() : 0; }

dj_status dj_profile_to_json(const dj_profile* p, char** out) {
  return guard([&] {
    require(p && out, "null argument");
    *out = dup(dj::serialize_profile(p->impl) + "\n");
  });
}

dj_status dj_profile_validate(const dj_profile* p, dj_format format, int* ok,
                              char** report) {
  return guard([&] {
    require(p, "null profile");
    const dj::ValidationReport r = dj::validate(p->impl);
    if (ok) *ok = r.ok ? 1 : 0;
    if (report) {
      require(format == DJ_FORMAT_JSON || format == DJ_FORMAT_TEXT,
              "validation reports are JSON or text");
      *report = dup(format == DJ_FORMAT_JSON ? dj::validation_to_json(r)
                                             : dj::validation_to_text(r));
    }
  });
}

dj_status dj_jost_compute(const dj_profile* p, dj_series** out) {
  return guard([&] {
    require(p && out, "null argument");
    *out = new dj_series{dj::compute_jost(p->impl)};
  });
}

void dj_series_destroy(dj_series* s) { delete s; }

dj_status dj_jost_eval(const dj_series* s, size_t n, double z_re, double z_im, double* F,
                       double* G) {
  return guard([&] {
    require(s && F && G, "null argument");
    const dj::JostValue v = dj::eval_jost(s->impl, n, {z_re, z_im});
    write_matrix(v.F, F);
    write_matrix(v.G, G);
  });
}

dj_status dj_jost_det(const dj_series* s, double z_re, double z_im, double* re,
                      double* im) {
  return guard([&] {
    require(s && re && im, "null argument");
    const dj::cplx d = dj::mat_det(dj::jost_F(s->impl, 0, {z_re, z_im}));
    *re = d.real();
    *im = d.imag();
  });
}

dj_status dj_recurrence_residual(const dj_series* s, const dj_profile* p, double z_re,
                                 double z_im, double* out) {
  return guard([&] {
    require(s && p && out, "null argument");
    require(s->impl.dim() == p->impl.dim() && s->impl.cutoff() == p->impl.cutoff(),
            "series and profile do not belong together");
    *out = dj::recurrence_residual(s->impl, p->impl, {z_re, z_im}, p->impl.cutoff() + 3);
  });
}

dj_status dj_series_to_json(const dj_series* s, char** out) {
  return guard([&] {
    require(s && out, "null argument");
    *out = dup(dj::series_to_json(s->impl));
  });
}

dj_status dj_eigenvalues(const dj_profile* p, const dj_eig_options* opts, double* lambdas,
                         size_t capacity, size_t* count) {
  return guard([&] {
    require(p && count, "null argument");
    require(lambdas || capacity == 0, "null output buffer");
    const dj::SpectralReport r = dj::spectral_report(p->impl, eig_options(opts));
    *count = r.eigenvalues.size();
    for (std::size_t k = 0; k < r.eigenvalues.size() && k < capacity; ++k) {
      lambdas[k] = r.eigenvalues[k].lambda;
    }
  });
}

dj_status dj_spectral_report(const dj_profile* p, const dj_eig_options* opts,
                             size_t oracle_n, dj_format format, char** out) {
  return guard([&] {
    require(p && out, "null argument");
    require(format == DJ_FORMAT_JSON || format == DJ_FORMAT_CSV,
            "spectral reports are JSON or CSV");
    dj::SpectralReport r = dj::spectral_report(p->impl, eig_options(opts));
    if (oracle_n > 0) {
      const auto eigs = dj::oracle_eigs(dj::build_finite_section(p->impl, oracle_n));
      dj::attach_oracle(r, dj::compare_spectra(r.eigenvalues, eigs));
    }
    *out = dup(format == DJ_FORMAT_JSON ? dj::report_to_json(r) : dj::report_to_csv(r));
  });
}

dj_status dj_oracle_report(const dj_profile* p, const dj_eig_options* opts, size_t n,
                           double band_margin, dj_format format, char** out) {
  return guard([&] {
    require(p && out, "null argument");
    require(format == DJ_FORMAT_JSON || format == DJ_FORMAT_CSV,
            "oracle reports are JSON or CSV");
    require(band_margin > 0.0, "band margin must be positive");
    const auto eigs = dj::oracle_eigs(dj::build_finite_section(p->impl, n));
    if (format == DJ_FORMAT_CSV) {
      *out = dup(dj::oracle_spectrum_csv(eigs, n));
      return;
    }
    const dj::SpectralReport r = dj::spectral_report(p->impl, eig_options(opts));
    const dj::ComparisonReport cmp = dj::compare_spectra(r.eigenvalues, eigs, band_margin);
    *out = dup(dj::comparison_to_json(cmp, n, eigs));
  });
}

dj_status dj_oracle_eigenvalues(const dj_profile* p, size_t n, double* out,
                                size_t capacity, size_t* count) {
  return guard([&] {
    require(p && count, "null argument");
    require(out || capacity == 0, "null output buffer");
    const auto eigs = dj::oracle_eigs(dj::build_finite_section(p->impl, n));
    *count = eigs.size();
    for (std::size_t k = 0; k < eigs.size() && k < capacity; ++k) out[k] = eigs[k];
  });
}

dj_status dj_band_csv(const dj_profile* p, size_t n, char** out) {
  return guard([&] {
    require(p && out, "null argument");
    *out = dup(dj::band_csv(dj::oracle_eigs(dj::build_finite_section(p->impl, n)), n));
  });
}

dj_status dj_verify_profile(const dj_profile* p, const char* label,
                            const dj_verify_options* opts, dj_format format, char** out,
                            int* all_pass) {
  return guard([&] {
    require(p && out, "null argument");
    dj::VerifySummary s;
    s.profiles.push_back(
        dj::verify_profile(p->impl, label ? label : "profile", verify_options(opts)));
    *out = dup(verify_render(s, format));
    if (all_pass) *all_pass = s.pass() ? 1 : 0;
  });
}

dj_status dj_verify_random(uint64_t seed, size_t count, const dj_verify_options* opts,
                           dj_format format, char** out, int* all_pass) {
  return guard([&] {
    require(out, "null argument");
    require(count > 0, "count must be positive");
    const dj::VerifySummary s = dj::verify_random(seed, count, verify_options(opts));
    *out = dup(verify_render(s, format));
    if (all_pass) *all_pass = s.pass() ? 1 : 0;
  });
}

}  // extern "C"
