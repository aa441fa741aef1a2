#include "diracjost/profile.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dj {

using nlohmann::json;

namespace {

void check_dims(const std::vector<ComplexMatrix>& mats, std::size_t m,
                const char* name) {
  for (std::size_t k = 0; k < mats.size(); ++k) {
    if (mats[k].dim() != m) {
      throw Error(ErrorCode::DimensionMismatch,
                  std::string(name) + "[" + std::to_string(k) + "] is " +
                      std::to_string(mats[k].dim()) + "x" +
                      std::to_string(mats[k].dim()) + ", expected m = " +
                      std::to_string(m));
    }
  }
}

[[noreturn]] void parse_error(const std::string& msg) {
  throw Error(ErrorCode::ParseError, msg);
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) parse_error(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) parse_error(where + ": non-finite value");
  return v;
}

ComplexMatrix parse_matrix(const json& j, std::size_t m,
                           const std::string& where) {
  if (!j.is_array()) parse_error(where + ": matrix must be an array of rows");
  if (j.size() != m) {
    throw Error(ErrorCode::DimensionMismatch,
                where + ": has " + std::to_string(j.size()) +
                    " rows, expected " + std::to_string(m));
  }
  std::vector<cplx> data;
  data.reserve(m * m);
  for (std::size_t r = 0; r < m; ++r) {
    const json& row = j[r];
    if (!row.is_array()) parse_error(where + ": row must be an array");
    if (row.size() != m) {
      throw Error(ErrorCode::DimensionMismatch,
                  where + ": row " + std::to_string(r) + " has " +
                      std::to_string(row.size()) + " entries, expected " +
                      std::to_string(m));
    }
    for (std::size_t c = 0; c < m; ++c) {
      const json& z = row[c];
      if (!z.is_array() || z.size() != 2) {
        parse_error(where + ": complex entries are [re, im]");
      }
      data.emplace_back(as_number(z[0], where), as_number(z[1], where));
    }
  }
  return ComplexMatrix(m, std::move(data));
}

std::vector<ComplexMatrix> parse_list(const json& doc, const char* key,
                                      std::size_t count, std::size_t m) {
  if (!doc.contains(key)) {
    throw Error(ErrorCode::MissingField, std::string("missing field '") + key + "'");
  }
  const json& arr = doc.at(key);
  if (!arr.is_array()) parse_error(std::string(key) + " must be an array");
  if (arr.size() != count) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(key) + " has " + std::to_string(arr.size()) +
                    " matrices, expected " + std::to_string(count));
  }
  std::vector<ComplexMatrix> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(parse_matrix(arr[k], m, std::string(key) + "[" +
                                              std::to_string(k) + "]"));
  }
  return out;
}

json matrix_to_json(const ComplexMatrix& a) {
  json rows = json::array();
  for (std::size_t r = 0; r < a.dim(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < a.dim(); ++c) {
      row.push_back({a(r, c).real(), a(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json list_to_json(const std::vector<ComplexMatrix>& mats) {
  json arr = json::array();
  for (const auto& a : mats) arr.push_back(matrix_to_json(a));
  return arr;
}

std::size_t as_count(const json& doc, const char* key) {
  if (!doc.contains(key)) {
    throw Error(ErrorCode::MissingField, std::string("missing field '") + key + "'");
  }
  const json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    parse_error(std::string(key) + " must be a nonnegative integer");
  }
  return static_cast<std::size_t>(v.get<long long>());
}

double site_term(const CoefficientProfile& p, std::size_t n) {
  const std::size_t m = p.dim();
  const ComplexMatrix id = ComplexMatrix::identity(m);
  return mat_norm(id - p.a()[n]) + mat_norm(id + p.b()[n - 1]) +
         mat_norm(p.p()[n - 1]) + mat_norm(p.q()[n - 1]);
}

}  // namespace

CoefficientProfile::CoefficientProfile(std::size_t m, std::vector<ComplexMatrix> a,
                                       std::vector<ComplexMatrix> b,
                                       std::vector<ComplexMatrix> p,
                                       std::vector<ComplexMatrix> q)
    : m_(m), n0_(b.size()), a_(std::move(a)), b_(std::move(b)), p_(std::move(p)),
      q_(std::move(q)) {
  if (m_ == 0) throw Error(ErrorCode::InvalidArgument, "dimension m must be >= 1");
  if (a_.size() != n0_ + 1 || p_.size() != n0_ || q_.size() != n0_) {
    throw Error(ErrorCode::DimensionMismatch,
                "profile lists must have sizes N0+1 (A) and N0 (B, P, Q)");
  }
  check_dims(a_, m_, "A");
  check_dims(b_, m_, "B");
  check_dims(p_, m_, "P");
  check_dims(q_, m_, "Q");
}

CoefficientProfile free_profile(std::size_t m) {
  return CoefficientProfile(m, {ComplexMatrix::identity(m)}, {}, {}, {});
}

CoefficientProfile load_profile(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    parse_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) parse_error("profile must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "m" && key != "N0" && key != "A" && key != "B" && key != "P" &&
        key != "Q") {
      parse_error("unknown key '" + key + "'");
    }
  }
  const std::size_t m = as_count(doc, "m");
  if (m == 0) parse_error("m must be >= 1");
  const std::size_t n0 = as_count(doc, "N0");
  auto a = parse_list(doc, "A", n0 + 1, m);
  auto b = parse_list(doc, "B", n0, m);
  auto p = parse_list(doc, "P", n0, m);
  auto q = parse_list(doc, "Q", n0, m);
  return CoefficientProfile(m, std::move(a), std::move(b), std::move(p),
                            std::move(q));
}

CoefficientProfile load_profile_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "read failed for '" + path + "'");
  return load_profile(buf.str());
}

std::string serialize_profile(const CoefficientProfile& p) {
  json doc = json::object();
  doc["m"] = p.dim();
  doc["N0"] = p.cutoff();
  doc["A"] = list_to_json(p.a());
  doc["B"] = list_to_json(p.b());
  doc["P"] = list_to_json(p.p());
  doc["Q"] = list_to_json(p.q());
  return doc.dump();
}

ValidationReport validate(const CoefficientProfile& p) {
  ValidationReport rep;
  auto check = [&](CoefficientKind kind, std::size_t n, const ComplexMatrix& x,
                   bool needs_inverse) {
    if (!x.is_finite()) {
      rep.violations.push_back({ViolationKind::NonFinite, kind, n, 0.0});
      return;
    }
    const double defect = hermitian_defect(x);
    if (defect > kHermitianTol * std::max(1.0, mat_norm(x))) {
      rep.violations.push_back({ViolationKind::NotHermitian, kind, n, defect});
    }
    if (needs_inverse) {
      const double smin = min_singular_value(x);
      if (!(smin > kInvertibilityTol)) {
        rep.violations.push_back({kind == CoefficientKind::A
                                      ? ViolationKind::SingularA
                                      : ViolationKind::SingularB,
                                  kind, n, smin});
      }
    }
  };
  for (std::size_t n = 0; n <= p.cutoff(); ++n) {
    check(CoefficientKind::A, n, p.a()[n], true);
  }
  for (std::size_t n = 1; n <= p.cutoff(); ++n) {
    check(CoefficientKind::B, n, p.b()[n - 1], true);
    check(CoefficientKind::P, n, p.p()[n - 1], false);
    check(CoefficientKind::Q, n, p.q()[n - 1], false);
  }
  rep.decay_sum = decay_sum(p);
  rep.ok = rep.violations.empty();
  return rep;
}

std::string validation_to_text(const ValidationReport& r) {
  std::string out = r.ok ? "ok\n" : "invalid\n";
  char line[128];
  for (const Violation& v : r.violations) {
    std::snprintf(line, sizeof line, "%s %s[%zu] %.6g\n", to_string(v.kind),
                  to_string(v.coefficient), v.index, v.magnitude);
    out += line;
  }
  std::snprintf(line, sizeof line, "decay_sum %.17g\n", r.decay_sum);
  out += line;
  return out;
}

std::string validation_to_json(const ValidationReport& r) {
  json doc;
  doc["ok"] = r.ok;
  doc["decay_sum"] = r.decay_sum;
  json list = json::array();
  for (const Violation& v : r.violations) {
    list.push_back({{"kind", to_string(v.kind)},
                    {"coefficient", to_string(v.coefficient)},
                    {"index", v.index},
                    {"magnitude", v.magnitude}});
  }
  doc["violations"] = std::move(list);
  return doc.dump(2) + "\n";
}

ComplexMatrix coefficient_at(const CoefficientProfile& p, CoefficientKind kind,
                             std::size_t n) {
  const std::size_t m = p.dim();
  if (kind != CoefficientKind::A && n == 0) {
    throw Error(ErrorCode::IndexOutOfDomain,
                std::string(to_string(kind)) + "_n is defined for n >= 1");
  }
  if (n > p.cutoff()) {
    switch (kind) {
      case CoefficientKind::A: return ComplexMatrix::identity(m);
      case CoefficientKind::B: return -ComplexMatrix::identity(m);
      case CoefficientKind::P:
      case CoefficientKind::Q: return ComplexMatrix::zero(m);
    }
  }
  switch (kind) {
    case CoefficientKind::A: return p.a()[n];
    case CoefficientKind::B: return p.b()[n - 1];
    case CoefficientKind::P: return p.p()[n - 1];
    case CoefficientKind::Q: return p.q()[n - 1];
  }
  throw Error(ErrorCode::InvalidArgument, "unknown coefficient kind");
}

double perturbation_tail_norm(const CoefficientProfile& p, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = std::max<std::size_t>(n, 1); k <= p.cutoff(); ++k) {
    acc += site_term(p, k);
  }
  return acc;
}

double decay_sum(const CoefficientProfile& p) {
  double acc = 0.0;
  for (std::size_t n = 1; n <= p.cutoff(); ++n) {
    acc += static_cast<double>(n) * site_term(p, n);
  }
  return acc;
}

std::uint64_t profile_digest(const CoefficientProfile& p) {
  std::uint64_t h = 14695981039346656037ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int k = 0; k < 8; ++k) {
      h ^= (v >> (8 * k)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  mix(p.dim());
  mix(p.cutoff());
  for (const auto* list : {&p.a(), &p.b(), &p.p(), &p.q()}) {
    for (const ComplexMatrix& x : *list) {
      for (const cplx& z : x.data()) {
        mix(std::bit_cast<std::uint64_t>(z.real()));
        mix(std::bit_cast<std::uint64_t>(z.imag()));
      }
    }
  }
  return h;
}

const char* to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::NotHermitian: return "NotHermitian";
    case ViolationKind::SingularA: return "SingularA";
    case ViolationKind::SingularB: return "SingularB";
    case ViolationKind::NonFinite: return "NonFinite";
  }
  return "Unknown";
}

const char* to_string(CoefficientKind kind) noexcept {
  switch (kind) {
    case CoefficientKind::A: return "A";
    case CoefficientKind::B: return "B";
    case CoefficientKind::P: return "P";
    case CoefficientKind::Q: return "Q";
  }
  return "?";
}

}  // namespace dj
