#include "graphon/json_io.hpp"

#include "graphon/errors.hpp"

namespace graphon::io {

namespace {

Json matrix_json(const Matrix& m) { return m.to_rows(); }

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw Error(ErrorKind::ParseError, std::string("missing field '") + name + "'");
  return j.at(name);
}

std::vector<double> numbers(const Json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorKind::ParseError, std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) throw Error(ErrorKind::ParseError, std::string(what) + " must contain numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Matrix matrix(const Json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorKind::ParseError, std::string(what) + " must be an array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& r : j) rows.push_back(numbers(r, what));
  return Matrix::from_rows(rows);
}

mpq_class rational(const Json& j) {
  if (j.is_number_integer()) return mpq_class(j.get<long>());
  if (j.is_number()) return mpq_class(j.get<double>());
  if (j.is_string()) {
    try {
      mpq_class q(j.get<std::string>());
      q.canonicalize();
      return q;
    } catch (const std::invalid_argument&) {
    }
  }
  throw Error(ErrorKind::ParseError, "expected a number or a 'p/q' string");
}

}  // namespace

Json to_json(const StepGraphon& w) { return {{"weights", w.weights()}, {"values", matrix_json(w.values())}}; }

Json to_json(const SignedStepKernel& y) {
  return {{"weights", y.weights()}, {"values", matrix_json(y.values())}, {"signed", true}};
}

Json to_json(const StepFunction1D& f) { return {{"breakpoints", f.breakpoints()}, {"values", f.values()}}; }

Json to_json(const PartitionSpec& p) { return {{"assignment", matrix_json(p.assignment())}}; }

Json to_json(const Coupling& c) {
  return {{"matrix", matrix_json(c.matrix())}, {"row_marginal", c.row_marginal()}, {"col_marginal", c.col_marginal()}};
}

Json to_json(const DiscreteMeasure& m) { return {{"atoms", m.atoms()}, {"masses", m.masses()}}; }

Json to_json(const EnvelopeSample& s) {
  return {{"resolution", s.resolution}, {"depth", s.depth}, {"signatures", s.signatures}};
}

Json to_json(const MultiwayMatrixSet& s) {
  Json matrices = Json::array();
  for (const auto& m : s.matrices) matrices.push_back(matrix_json(m));
  Json provenance = Json::array();
  for (const auto& p : s.provenance) provenance.push_back(to_json(p));
  return {{"a", s.a}, {"matrices", matrices}, {"provenance", provenance}};
}

Json to_json(const OptimizerConfig& c) {
  return {{"restarts", c.restarts}, {"max_iters", c.max_iters}, {"tol", c.tol}};
}

Json to_json(const CutNormResult& r) {
  return {{"value", r.value},
          {"witness_s", r.witness_s},
          {"witness_t", r.witness_t},
          {"mode", r.mode == CutNormMode::Exact ? "exact" : "heuristic"}};
}

Json to_json(const CutDistanceResult& r) {
  return {{"value", r.value}, {"coupling", to_json(r.coupling)}, {"certified", r.certified}, {"swept", r.swept}};
}

Json to_json(const FlatnessWitness& w) {
  Json j = {{"feasible", w.feasible}, {"residual", w.residual}, {"reason", w.reason}};
  j["coupling"] = w.feasible ? to_json(w.coupling) : Json(nullptr);
  return j;
}

Json to_json(const ConvexOrderReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) entries.push_back({{"f", e.name}, {"lhs", e.lhs}, {"rhs", e.rhs}, {"holds", e.holds}});
  return {{"entries", entries}, {"violations", r.violations}};
}

Json to_json(const OrderVerdict& v) {
  Json conditions = Json::array();
  for (const auto& c : v.conditions) conditions.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return {{"status", v.consistent() ? "consistent" : "refuted"}, {"conditions", conditions}};
}

StepGraphon graphon_from_json(const Json& j) {
  if (j.is_object() && j.value("signed", false)) throw Error(ErrorKind::ParseError, "expected an unsigned graphon");
  return StepGraphon(numbers(field(j, "weights"), "weights"), matrix(field(j, "values"), "values"));
}

SignedStepKernel kernel_from_json(const Json& j) {
  return SignedStepKernel(numbers(field(j, "weights"), "weights"), matrix(field(j, "values"), "values"));
}

StepFunction1D step_function_from_json(const Json& j) {
  return StepFunction1D(numbers(field(j, "breakpoints"), "breakpoints"), numbers(field(j, "values"), "values"));
}

PartitionSpec partition_from_json(const Json& j) { return PartitionSpec(matrix(field(j, "assignment"), "assignment")); }

Coupling coupling_from_json(const Json& j) {
  return Coupling(matrix(field(j, "matrix"), "matrix"), numbers(field(j, "row_marginal"), "row_marginal"),
                  numbers(field(j, "col_marginal"), "col_marginal"));
}

DiscreteMeasure measure_from_json(const Json& j) {
  return DiscreteMeasure(numbers(field(j, "atoms"), "atoms"), numbers(field(j, "masses"), "masses"));
}

RationalMeasure rational_measure_from_json(const Json& j) {
  const Json& atoms = field(j, "atoms");
  const Json& masses = field(j, "masses");
  if (!atoms.is_array() || !masses.is_array()) throw Error(ErrorKind::ParseError, "atoms and masses must be arrays");
  RationalMeasure m;
  for (const auto& a : atoms) m.atoms.push_back(rational(a));
  for (const auto& x : masses) m.masses.push_back(rational(x));
  return m;
}

EnvelopeSample envelope_from_json(const Json& j) {
  EnvelopeSample s;
  const Json& res = field(j, "resolution");
  const Json& depth = field(j, "depth");
  if (!res.is_number_unsigned() || !depth.is_number_integer()) {
    throw Error(ErrorKind::ParseError, "resolution and depth must be integers");
  }
  s.resolution = res.get<std::size_t>();
  s.depth = depth.get<int>();
  const Json& sigs = field(j, "signatures");
  if (!sigs.is_array()) throw Error(ErrorKind::ParseError, "signatures must be an array");
  for (const auto& sig : sigs) s.signatures.push_back(numbers(sig, "signature"));
  return s;
}

MultiwayMatrixSet multiway_from_json(const Json& j) {
  MultiwayMatrixSet s;
  s.a = numbers(field(j, "a"), "a");
  const Json& matrices = field(j, "matrices");
  if (!matrices.is_array()) throw Error(ErrorKind::ParseError, "matrices must be an array");
  for (const auto& m : matrices) {
    Matrix x = matrix(m, "matrix");
    if (x.rows() != s.a.size() || x.cols() != s.a.size()) {
      throw Error(ErrorKind::DimensionMismatch, "matrix size does not match the part count");
    }
    s.matrices.push_back(std::move(x));
  }
  if (j.contains("provenance")) {
    const Json& prov = j.at("provenance");
    if (!prov.is_array()) throw Error(ErrorKind::ParseError, "provenance must be an array");
    for (const auto& p : prov) s.provenance.push_back(partition_from_json(p));
  }
  return s;
}

OptimizerConfig optimizer_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "optimizer config must be an object");
  OptimizerConfig c;
  try {
    c.restarts = j.value("restarts", c.restarts);
    c.max_iters = j.value("max_iters", c.max_iters);
    c.tol = j.value("tol", c.tol);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  return c;
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

}  // namespace graphon::io
