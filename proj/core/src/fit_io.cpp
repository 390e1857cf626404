#include "sbheom/fit_io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sbheom/errors.hpp"

namespace sbheom {

namespace {

using nlohmann::json;

json dump_double(double v) {
  if (std::isinf(v)) return json(v > 0 ? "infinity" : "-infinity");
  return json(v);
}

double parse_double(const json& j, const std::string& where) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "infinity") return std::numeric_limits<double>::infinity();
    if (s == "-infinity") return -std::numeric_limits<double>::infinity();
    throw ConfigError("fit document: bad number at " + where);
  }
  if (!j.is_number()) throw ConfigError("fit document: expected number at " + where);
  return j.get<double>();
}

json basis_to_json(const std::vector<BasisFunction>& basis) {
  json arr = json::array();
  for (const BasisFunction& b : basis) {
    json e;
    e["kind"] = to_string(b.kind);
    e["rate"] = b.rate;
    if (b.kind == BasisKind::CosDecay || b.kind == BasisKind::SinDecay) {
      e["freq"] = b.freq;
    }
    arr.push_back(std::move(e));
  }
  return arr;
}

std::vector<BasisFunction> basis_from_json(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw ConfigError("fit document: expected array at " + where);
  std::vector<BasisFunction> basis;
  for (const auto& e : arr) {
    BasisFunction b;
    b.kind = basis_kind_from_string(e.at("kind").get<std::string>());
    b.rate = e.at("rate").get<double>();
    b.freq = e.value("freq", 0.0);
    basis.push_back(b);
  }
  return basis;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd vector_from_json(const json& arr) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  }
  return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = r > 0 ? static_cast<Eigen::Index>(rows[0].size()) : 0;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) {
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].get<double>();
    }
  }
  return m;
}

std::string cutoff_name(CutoffForm f) {
  return f == CutoffForm::RationalFraction ? "rational" : "exponential";
}

CutoffForm cutoff_from_name(const std::string& s) {
  if (s == "rational") return CutoffForm::RationalFraction;
  if (s == "exponential") return CutoffForm::Exponential;
  throw ConfigError("fit document: unknown cutoff '" + s + "'");
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::string to_json_text(const CorrelationFit& fit) {
  json doc;
  doc["format"] = "sbheom-fit/1";
  doc["bath"] = {{"s", fit.bath.s},
                 {"alpha", fit.bath.alpha},
                 {"omega_c", fit.bath.omega_c},
                 {"cutoff", cutoff_name(fit.bath.cutoff)},
                 {"temperature", fit.bath.temperature}};
  doc["t_max"] = dump_double(fit.t_max);
  doc["omega_c"] = fit.omega_c;
  doc["basis_real"] = basis_to_json(fit.basis_real);
  doc["basis_imag"] = basis_to_json(fit.basis_imag);
  doc["coeff_real"] = vector_to_json(fit.coeff_real);
  doc["coeff_imag"] = vector_to_json(fit.coeff_imag);
  doc["eta_real"] = matrix_to_json(fit.eta_real);
  doc["eta_imag"] = matrix_to_json(fit.eta_imag);
  doc["residual"] = {{"max_real", fit.residual.max_real},
                     {"max_imag", fit.residual.max_imag},
                     {"rms_real", fit.residual.rms_real},
                     {"rms_imag", fit.residual.rms_imag},
                     {"tolerance_met", fit.residual.tolerance_met}};
  doc["target_hash"] = fit.target_hash;
  doc["seed"] = fit.seed;
  doc["multistart"] = fit.multistart;
  return doc.dump(2) + "\n";
}

CorrelationFit fit_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("fit document: parse failure: ") + e.what());
  }
  if (doc.value("format", "") != "sbheom-fit/1") {
    throw ConfigError("fit document: missing or unknown format tag");
  }
  CorrelationFit fit;
  try {
    const json& b = doc.at("bath");
    fit.bath.s = b.at("s").get<double>();
    fit.bath.alpha = b.at("alpha").get<double>();
    fit.bath.omega_c = b.at("omega_c").get<double>();
    fit.bath.cutoff = cutoff_from_name(b.at("cutoff").get<std::string>());
    fit.bath.temperature = b.at("temperature").get<double>();
    fit.t_max = parse_double(doc.at("t_max"), "t_max");
    fit.omega_c = doc.at("omega_c").get<double>();
    fit.basis_real = basis_from_json(doc.at("basis_real"), "basis_real");
    fit.basis_imag = basis_from_json(doc.at("basis_imag"), "basis_imag");
    fit.coeff_real = vector_from_json(doc.at("coeff_real"));
    fit.coeff_imag = vector_from_json(doc.at("coeff_imag"));
    fit.eta_real = matrix_from_json(doc.at("eta_real"));
    fit.eta_imag = matrix_from_json(doc.at("eta_imag"));
    const json& r = doc.at("residual");
    fit.residual.max_real = r.at("max_real").get<double>();
    fit.residual.max_imag = r.at("max_imag").get<double>();
    fit.residual.rms_real = r.at("rms_real").get<double>();
    fit.residual.rms_imag = r.at("rms_imag").get<double>();
    fit.residual.tolerance_met = r.at("tolerance_met").get<bool>();
    fit.target_hash = doc.at("target_hash").get<std::uint64_t>();
    fit.seed = doc.at("seed").get<std::uint64_t>();
    fit.multistart = doc.at("multistart").get<int>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("fit document: ") + e.what());
  }
  validate_basis(fit.basis_real);
  validate_basis(fit.basis_imag);
  return fit;
}

std::uint64_t CorrelationFit::hash() const {
  return fnv1a(to_json_text(*this));
}

void save_fit(const std::string& path, const CorrelationFit& fit) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("save_fit: cannot open '" + path + "'");
  out << to_json_text(fit);
}

CorrelationFit load_fit(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("load_fit: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return fit_from_json_text(ss.str());
}

}  // namespace sbheom
