#include "qmg/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qmg/errors.hpp"

namespace qmg::io {

namespace {

const json& field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(where + "/" + key + ": missing field");
  return j.at(key);
}

cplx complex_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw SchemaError(where + ": expected a number or a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

json complex_to_json(cplx c) { return json::array({c.real(), c.imag()}); }

torus::WeylSeries series_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array of terms");
  torus::WeylSeries out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string at = where + "/" + std::to_string(k);
    const json& z = field(j[k], "z", at);
    if (!z.is_array()) throw SchemaError(at + "/z: expected an integer array");
    torus::WeylTerm term;
    for (const auto& v : z) {
      if (!v.is_number_integer()) throw SchemaError(at + "/z: expected integers");
      term.z.push_back(v.get<int>());
    }
    term.coeff = complex_from_json(field(j[k], "c", at), at + "/c");
    out.push_back(std::move(term));
  }
  return out;
}

json series_to_json(const torus::WeylSeries& s) {
  json out = json::array();
  for (const auto& t : s) out.push_back({{"z", t.z}, {"c", complex_to_json(t.coeff)}});
  return out;
}

}  // namespace

CMatrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw SchemaError(where + ": expected a nonempty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) throw SchemaError(where + "/0: expected a nonempty row");
  const std::size_t cols = j[0].size();
  CMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string at = where + "/" + std::to_string(r);
    if (!j[r].is_array()) throw SchemaError(at + ": expected a row");
    if (j[r].size() != cols)
      throw SchemaError(at + ": ragged row (" + std::to_string(j[r].size()) + " entries, expected " +
                        std::to_string(cols) + ")");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Index>(r), static_cast<Index>(c)) = complex_from_json(j[r][c], at + "/" + std::to_string(c));
  }
  return m;
}

json matrix_to_json(const CMatrix& m) {
  json out = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

void require_schema(const json& j, const std::string& expected, const std::string& where) {
  const json& s = field(j, "schema", where);
  if (!s.is_string()) throw SchemaError(where + "/schema: expected a string");
  const std::string got = s.get<std::string>();
  if (got == expected) return;
  const auto family = [](const std::string& v) { return v.substr(0, v.find('/')); };
  if (family(got) == family(expected))
    throw SchemaError(where + "/schema: version " + got + " needs migration to " + expected);
  throw SchemaError(where + "/schema: expected " + expected + ", got " + got);
}

FiniteSpectralTriple TripleDocument::build() const {
  FiniteAlgebra alg;
  if (algebra_kind == "diagonal")
    alg = FiniteAlgebra::diagonal(dim);
  else if (algebra_kind == "full")
    alg = FiniteAlgebra::full_matrix(dim);
  else if (algebra_kind == "basis")
    alg = FiniteAlgebra::from_basis(dim, basis);
  else
    throw SchemaError("/algebra/kind: unknown kind " + algebra_kind);
  if (dirac.rows() != dim || dirac.cols() != dim) throw SchemaError("/dirac: shape does not match /algebra/dim");
  return {alg, HermMatrix(dirac)};
}

TripleDocument triple_from_json(const json& j) {
  require_schema(j, kTripleSchema);
  TripleDocument doc;
  if (j.contains("name")) doc.name = j.at("name").get<std::string>();
  if (j.contains("note")) doc.note = j.at("note").get<std::string>();
  const json& alg = field(j, "algebra", "");
  const json& kind = field(alg, "kind", "/algebra");
  if (!kind.is_string()) throw SchemaError("/algebra/kind: expected a string");
  doc.algebra_kind = kind.get<std::string>();
  const json& dim = field(alg, "dim", "/algebra");
  if (!dim.is_number_integer() || dim.get<long long>() < 1) throw SchemaError("/algebra/dim: expected a positive integer");
  doc.dim = dim.get<Index>();
  if (doc.algebra_kind == "basis") {
    const json& b = field(alg, "basis", "/algebra");
    if (!b.is_array() || b.empty()) throw SchemaError("/algebra/basis: expected a nonempty array");
    for (std::size_t k = 0; k < b.size(); ++k)
      doc.basis.push_back(matrix_from_json(b[k], "/algebra/basis/" + std::to_string(k)));
  } else if (doc.algebra_kind != "diagonal" && doc.algebra_kind != "full") {
    throw SchemaError("/algebra/kind: unknown kind " + doc.algebra_kind);
  }
  doc.dirac = matrix_from_json(field(j, "dirac", ""), "/dirac");
  if (doc.dirac.rows() != doc.dim || doc.dirac.cols() != doc.dim)
    throw SchemaError("/dirac: shape does not match /algebra/dim");
  return doc;
}

json triple_to_json(const TripleDocument& doc) {
  json alg = {{"kind", doc.algebra_kind}, {"dim", doc.dim}};
  if (doc.algebra_kind == "basis") {
    alg["basis"] = json::array();
    for (const auto& b : doc.basis) alg["basis"].push_back(matrix_to_json(b));
  }
  json out = {{"schema", kTripleSchema}, {"name", doc.name}, {"algebra", alg}, {"dirac", matrix_to_json(doc.dirac)}};
  if (!doc.note.empty()) out["note"] = doc.note;
  return out;
}

TripleDocument load_triple(const std::filesystem::path& path) { return triple_from_json(read_json(path)); }
void save_triple(const TripleDocument& doc, const std::filesystem::path& path) { write_json(triple_to_json(doc), path); }

TorusDocument torus_from_json(const json& j) {
  require_schema(j, kTorusSchema);
  TorusDocument doc;
  if (j.contains("name")) doc.name = j.at("name").get<std::string>();
  const json& d = field(j, "d", ""), &m = field(j, "m", "");
  if (!d.is_number_integer() || !m.is_number_integer()) throw SchemaError("/d, /m: expected integers");
  doc.spec.d = d.get<int>();
  doc.spec.m = m.get<int>();
  const CMatrix theta = matrix_from_json(field(j, "theta", ""), "/theta");
  if (theta.imag().cwiseAbs().maxCoeff() != 0.0) throw SchemaError("/theta: entries must be real");
  doc.spec.theta = theta.real();
  if (j.contains("perturbation")) {
    const json& p = j.at("perturbation");
    if (!p.is_array()) throw SchemaError("/perturbation: expected an array of series");
    for (std::size_t k = 0; k < p.size(); ++k)
      doc.spec.perturbation.push_back(series_from_json(p[k], "/perturbation/" + std::to_string(k)));
  }
  if (j.contains("elements")) {
    const json& e = j.at("elements");
    if (!e.is_array()) throw SchemaError("/elements: expected an array");
    for (std::size_t k = 0; k < e.size(); ++k) {
      const std::string at = "/elements/" + std::to_string(k);
      torus::TorusElement el;
      el.name = field(e[k], "name", at).get<std::string>();
      el.coeffs = series_from_json(field(e[k], "terms", at), at + "/terms");
      doc.elements.push_back(std::move(el));
    }
  }
  try {
    torus::validate(doc.spec);
  } catch (const DomainError& err) {
    throw SchemaError(std::string("/: ") + err.what());
  }
  return doc;
}

json torus_to_json(const TorusDocument& doc) {
  json out = {{"schema", kTorusSchema},
              {"name", doc.name},
              {"d", doc.spec.d},
              {"m", doc.spec.m},
              {"theta", matrix_to_json(doc.spec.theta.cast<cplx>())}};
  out["perturbation"] = json::array();
  for (const auto& s : doc.spec.perturbation) out["perturbation"].push_back(series_to_json(s));
  out["elements"] = json::array();
  for (const auto& e : doc.elements) out["elements"].push_back({{"name", e.name}, {"terms", series_to_json(e.coeffs)}});
  return out;
}

TorusDocument load_torus(const std::filesystem::path& path) { return torus_from_json(read_json(path)); }
void save_torus(const TorusDocument& doc, const std::filesystem::path& path) { write_json(torus_to_json(doc), path); }

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path.string() + ": cannot open");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void write_json(const json& j, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DomainError(path.string() + ": cannot write");
  out << j.dump(2) << '\n';
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError(path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a(ss.str());
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Manifest::Manifest(std::string command) {
  doc_ = {{"schema", kManifestSchema},
          {"command", std::move(command)},
          {"options", json::object()},
          {"seeds", json::object()},
          {"inputs", json::array()},
          {"diagnostics", json::object()},
          {"timings", json::object()},
          {"results", json::object()},
          {"outputs", json::array()}};
}

void Manifest::input(const std::filesystem::path& path) {
  doc_["inputs"].push_back({{"path", path.string()}, {"fnv1a", hex64(fnv1a_file(path))}});
}

Manifest::Timer::Timer(Manifest& m, std::string key)
    : m_(m), key_(std::move(key)), start_(std::chrono::steady_clock::now()) {}

Manifest::Timer::~Timer() {
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
  m_.doc_["timings"][key_] = dt.count();
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvTable::Row& CsvTable::Row::add(double v) {
  cells.push_back(format_double(v));
  return *this;
}
CsvTable::Row& CsvTable::Row::add(long long v) {
  cells.push_back(std::to_string(v));
  return *this;
}
CsvTable::Row& CsvTable::Row::add(std::uint64_t v) {
  cells.push_back(std::to_string(v));
  return *this;
}
CsvTable::Row& CsvTable::Row::add(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) {
    cells.push_back(v);
  } else {
    std::string q = "\"";
    for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    cells.push_back(q + "\"");
  }
  return *this;
}

CsvTable::Row& CsvTable::row() { return rows_.emplace_back(); }

std::string CsvTable::str() const {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(header_);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (rows_[r].cells.size() != header_.size())
      throw DomainError("csv row " + std::to_string(r) + " has " + std::to_string(rows_[r].cells.size()) +
                        " cells, header has " + std::to_string(header_.size()));
    line(rows_[r].cells);
  }
  return os.str();
}

void CsvTable::save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DomainError(path.string() + ": cannot write");
  out << str();
}

}  // namespace qmg::io
