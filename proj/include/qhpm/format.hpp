#ifndef QHPM_FORMAT_HPP_
#define QHPM_FORMAT_HPP_

#include <charconv>
#include <cmath>
#include <string>

#include "qhpm/linalg.hpp"

namespace qhpm {

/// Shortest decimal that parses back to exactly `value`.
inline std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

inline std::string format_vector(const Vector& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_real(v[i]);
  }
  return out + "]";
}

}  // namespace qhpm

#endif  // QHPM_FORMAT_HPP_
