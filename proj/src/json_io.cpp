#include "fixorder/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "fixorder/errors.hpp"

namespace fixorder {

namespace {

using Json = nlohmann::ordered_json;

Mat matrix_from_json(const Json& j, const std::string& key) {
  if (!j.contains(key)) throw PlantFormatError("missing matrix '" + key + "'");
  const Json& rows = j.at(key);
  if (!rows.is_array()) throw PlantFormatError("'" + key + "' must be an array of rows");
  const auto nrows = rows.size();
  std::size_t ncols = 0;
  if (nrows > 0) {
    if (!rows[0].is_array())
      throw PlantFormatError("'" + key + "' rows must be arrays of numbers");
    ncols = rows[0].size();
  }
  Mat m(static_cast<Eigen::Index>(nrows), static_cast<Eigen::Index>(ncols));
  for (std::size_t i = 0; i < nrows; ++i) {
    const Json& row = rows[i];
    if (!row.is_array() || row.size() != ncols)
      throw PlantFormatError("'" + key + "' is ragged at row " + std::to_string(i + 1));
    for (std::size_t c = 0; c < ncols; ++c) {
      if (!row[c].is_number())
        throw PlantFormatError("'" + key + "' has a non-numeric entry at row " +
                               std::to_string(i + 1));
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = row[c].get<double>();
    }
  }
  return m;
}

Json matrix_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

StateSpaceModel plant_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw PlantFormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw PlantFormatError("top level must be an object");

  const Mat A = matrix_from_json(j, "A");
  const Mat B = matrix_from_json(j, "B");
  const Mat C = matrix_from_json(j, "C");
  const Mat D = matrix_from_json(j, "D");

  const bool has_nmeas = j.contains("nmeas");
  const bool has_ncont = j.contains("ncont");
  if (has_nmeas != has_ncont)
    throw PlantFormatError("partition keys 'nmeas' and 'ncont' must appear together");

  StateSpaceModel sys(A, B, C, D);
  if (!has_nmeas) return sys;
  if (!j.at("nmeas").is_number_integer() || !j.at("ncont").is_number_integer())
    throw PlantFormatError("'nmeas' and 'ncont' must be integers");
  return mktito(sys, j.at("nmeas").get<int>(), j.at("ncont").get<int>());
}

StateSpaceModel plant_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PlantFormatError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return plant_from_json(buf.str());
}

std::string plant_to_json(const StateSpaceModel& sys, int indent) {
  Json j;
  j["A"] = matrix_to_json(sys.A());
  j["B"] = matrix_to_json(sys.B());
  j["C"] = matrix_to_json(sys.C());
  j["D"] = matrix_to_json(sys.D());
  if (sys.partition()) {
    j["nmeas"] = sys.partition()->nmeas;
    j["ncont"] = sys.partition()->ncont;
  }
  return j.dump(indent);
}

std::string report_to_json(const BenchmarkReport& report, int indent) {
  Json j;
  j["cases"] = Json::array();
  for (const auto& cr : report.cases) {
    Json jc;
    jc["name"] = cr.name;
    jc["objective"] = to_string(cr.objective);
    jc["seed"] = cr.seed;
    jc["n_starts"] = cr.n_starts;
    jc["orders"] = Json::array();
    for (const auto& o : cr.orders) {
      Json jo;
      jo["order"] = o.order;
      jo["pass"] = o.pass;
      jo["seconds"] = o.seconds;
      if (o.reference) jo["reference"] = *o.reference;
      if (o.bound) jo["bound"] = *o.bound;
      if (o.ran) {
        jo["achieved"] = o.achieved;
        jo["optimizer_value"] = o.optimizer_value;
        jo["alpha"] = o.alpha;
        jo["best_start"] = o.best_start;
        jo["controller"] = Json::parse(plant_to_json(o.best.to_model(), indent));
      }
      if (!o.error.empty()) jo["error"] = o.error;
      jc["orders"].push_back(std::move(jo));
    }
    jc["artifacts"] = cr.artifacts;
    if (!cr.error.empty()) jc["error"] = cr.error;
    j["cases"].push_back(std::move(jc));
  }
  j["seconds"] = report.seconds;
  j["all_passed"] = report.all_passed();
  return j.dump(indent);
}

}  // namespace fixorder
