#ifndef QHPM_PROBLEM_IO_HPP_
#define QHPM_PROBLEM_IO_HPP_

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "qhpm/error.hpp"
#include "qhpm/linalg.hpp"
#include "qhpm/quadratic_system.hpp"

namespace qhpm {

/*
 * Problem files are JSON objects:
 *
 *   {
 *     "n": 2,
 *     "f0": [0.2, -0.2],
 *     "f1": [[0, 0, 3], [0, 1, -1], ...],     // [row, col, value]
 *     "f2": [[0, 0, -0.5], [0, 1, 0.5], ...], // col = j*n + k
 *     "epsilon": 1e-3,                         // optional
 *     "order_c": 2,                            // optional
 *     "s": 2                                   // optional, checked against the data
 *   }
 *
 * Repeated coordinates are summed.
 */
struct Problem {
  QuadraticSystem system;
  std::optional<double> epsilon;
  std::optional<int> order_c;
};

namespace detail {

inline SparseMatrix parse_triplets(const nlohmann::json& doc, const char* field, Eigen::Index rows,
                                   Eigen::Index cols) {
  if (!doc.contains(field)) throw Error(ErrorKind::parse, std::string("missing field '") + field + "'");
  const auto& arr = doc.at(field);
  if (!arr.is_array()) throw Error(ErrorKind::parse, std::string("field '") + field + "' must be an array");
  std::vector<Triplet> triplets;
  triplets.reserve(arr.size());
  for (const auto& entry : arr) {
    if (!entry.is_array() || entry.size() != 3 || !entry[0].is_number_integer() || !entry[1].is_number_integer() ||
        !entry[2].is_number())
      throw Error(ErrorKind::parse, std::string("entries of '") + field + "' must be [row, col, value]");
    const auto row = entry[0].get<std::int64_t>();
    const auto col = entry[1].get<std::int64_t>();
    if (row < 0 || row >= rows || col < 0 || col >= cols)
      throw Error(ErrorKind::parse, std::string("index out of range in '") + field + "'");
    triplets.emplace_back(row, col, entry[2].get<double>());
  }
  SparseMatrix m(rows, cols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

inline nlohmann::json triplets_json(const SparseMatrix& m) {
  // Row-major order for stable output.
  Eigen::SparseMatrix<double, Eigen::RowMajor> rm = m;
  auto arr = nlohmann::json::array();
  for (Eigen::Index r = 0; r < rm.outerSize(); ++r)
    for (decltype(rm)::InnerIterator it(rm, r); it; ++it) arr.push_back({it.row(), it.col(), it.value()});
  return arr;
}

}  // namespace detail

inline Problem parse_problem(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::parse, "problem document must be an object");
  if (!doc.contains("n") || !doc.at("n").is_number_integer() || doc.at("n").get<std::int64_t>() < 1)
    throw Error(ErrorKind::parse, "field 'n' must be a positive integer");
  const auto n = doc.at("n").get<Eigen::Index>();
  if (!doc.contains("f0") || !doc.at("f0").is_array() || doc.at("f0").size() != static_cast<std::size_t>(n))
    throw Error(ErrorKind::parse, "field 'f0' must be an array of n numbers");
  Vector f0(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!doc.at("f0")[i].is_number()) throw Error(ErrorKind::parse, "field 'f0' must hold numbers");
    f0[i] = doc.at("f0")[i].get<double>();
  }
  SparseMatrix f1 = detail::parse_triplets(doc, "f1", n, n);
  SparseMatrix f2 = detail::parse_triplets(doc, "f2", n, n * n);

  std::optional<Eigen::Index> declared_s;
  if (doc.contains("s")) {
    if (!doc.at("s").is_number_integer()) throw Error(ErrorKind::parse, "field 's' must be an integer");
    declared_s = doc.at("s").get<Eigen::Index>();
  }
  std::optional<double> epsilon;
  if (doc.contains("epsilon")) {
    if (!doc.at("epsilon").is_number() || !(doc.at("epsilon").get<double>() > 0.0))
      throw Error(ErrorKind::parse, "field 'epsilon' must be a positive number");
    epsilon = doc.at("epsilon").get<double>();
  }
  std::optional<int> order_c;
  if (doc.contains("order_c")) {
    if (!doc.at("order_c").is_number_integer()) throw Error(ErrorKind::parse, "field 'order_c' must be an integer");
    order_c = doc.at("order_c").get<int>();
    if (*order_c < 1 || *order_c > 64) throw Error(ErrorKind::parse, "field 'order_c' must lie in [1, 64]");
  }
  return Problem{QuadraticSystem(std::move(f0), std::move(f1), std::move(f2), 1.0, declared_s), epsilon, order_c};
}

inline Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse, "cannot open problem file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

inline std::string write_problem(const QuadraticSystem& sys, std::optional<double> epsilon = std::nullopt,
                                 std::optional<int> order_c = std::nullopt) {
  nlohmann::json doc;
  doc["n"] = sys.n();
  doc["f0"] = std::vector<double>(sys.f0().data(), sys.f0().data() + sys.n());
  doc["f1"] = detail::triplets_json(sys.f1());
  doc["f2"] = detail::triplets_json(sys.f2());
  if (epsilon) doc["epsilon"] = *epsilon;
  if (order_c) doc["order_c"] = *order_c;
  return doc.dump(2) + "\n";
}

/// The two-variable worked example:
///   3x0 - x1 - 0.5 x0^2 + 0.5 x0 x1 + 0.2 = 0
///   -x0 + 3x1 - 0.5 x1^2 + 0.5 x1 x0 - 0.2 = 0
inline QuadraticSystem appendix_system() {
  Vector f0(2);
  f0 << 0.2, -0.2;
  SparseMatrix f1(2, 2);
  f1.insert(0, 0) = 3.0;
  f1.insert(0, 1) = -1.0;
  f1.insert(1, 0) = -1.0;
  f1.insert(1, 1) = 3.0;
  SparseMatrix f2(2, 4);
  f2.insert(0, 0) = -0.5;
  f2.insert(0, 1) = 0.5;
  f2.insert(1, 2) = 0.5;
  f2.insert(1, 3) = -0.5;
  return QuadraticSystem(std::move(f0), std::move(f1), std::move(f2));
}

}  // namespace qhpm

#endif  // QHPM_PROBLEM_IO_HPP_
