#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmg/qtorus.hpp"
#include "qmg/triple.hpp"

namespace qmg::io {

using json = nlohmann::json;

inline constexpr const char* kTripleSchema = "qmg.triple/1";
inline constexpr const char* kTorusSchema = "qmg.torus/1";
inline constexpr const char* kManifestSchema = "qmg.manifest/1";

// Matrices are nested arrays of [re, im] pairs; `where` is a JSON pointer used in errors.
CMatrix matrix_from_json(const json& j, const std::string& where);
json matrix_to_json(const CMatrix& m);

// Throws SchemaError: missing schema, or a different version (migration required).
void require_schema(const json& j, const std::string& expected, const std::string& where = "");

// Keeps the file-level description so that save(load(x)) == x.
struct TripleDocument {
  std::string name;
  std::string algebra_kind;  // "diagonal", "full", "basis"
  Index dim = 0;
  std::vector<CMatrix> basis;  // only for "basis"
  CMatrix dirac;
  std::string note;

  FiniteSpectralTriple build() const;
};

TripleDocument triple_from_json(const json& j);
json triple_to_json(const TripleDocument& doc);
TripleDocument load_triple(const std::filesystem::path& path);
void save_triple(const TripleDocument& doc, const std::filesystem::path& path);

struct TorusDocument {
  std::string name;
  torus::FuzzyTorusSpec spec;
  std::vector<torus::TorusElement> elements;
};

TorusDocument torus_from_json(const json& j);
json torus_to_json(const TorusDocument& doc);
TorusDocument load_torus(const std::filesystem::path& path);
void save_torus(const TorusDocument& doc, const std::filesystem::path& path);

json read_json(const std::filesystem::path& path);
void write_json(const json& j, const std::filesystem::path& path);

std::uint64_t fnv1a(const std::string& bytes);
std::uint64_t fnv1a_file(const std::filesystem::path& path);
std::string hex64(std::uint64_t v);

class Manifest {
 public:
  explicit Manifest(std::string command);

  void option(const std::string& key, json value) { doc_["options"][key] = std::move(value); }
  void seed(const std::string& key, std::uint64_t value) { doc_["seeds"][key] = value; }
  void input(const std::filesystem::path& path);
  void diagnostic(const std::string& key, json value) { doc_["diagnostics"][key] = std::move(value); }
  void output(const std::string& path) { doc_["outputs"].push_back(path); }
  void result(const std::string& key, json value) { doc_["results"][key] = std::move(value); }

  // Scoped wall-clock timer, recorded under `key` on destruction.
  class Timer {
   public:
    Timer(Manifest& m, std::string key);
    ~Timer();
    Timer(const Timer&) = delete;
    Timer& operator=(const Timer&) = delete;

   private:
    Manifest& m_;
    std::string key_;
    std::chrono::steady_clock::time_point start_;
  };
  Timer time(const std::string& key) { return Timer(*this, key); }

  const json& doc() const { return doc_; }
  void save(const std::filesystem::path& path) const { write_json(doc_, path); }

 private:
  json doc_;
};

// Plain CSV with a fixed header; numbers written with round-trip precision.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  class Row {
   public:
    Row& add(double v);
    Row& add(long long v);
    Row& add(int v) { return add(static_cast<long long>(v)); }
    Row& add(std::uint64_t v);
    Row& add(const std::string& v);
    Row& add(const char* v) { return add(std::string(v)); }
    Row& add(bool v) { return add(static_cast<long long>(v)); }
    std::vector<std::string> cells;
  };

  Row& row();
  const std::vector<std::string>& header() const { return header_; }
  std::size_t size() const { return rows_.size(); }
  std::string str() const;  // throws DomainError on a row of the wrong width
  void save(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<Row> rows_;
};

std::string format_double(double v);

}  // namespace qmg::io
