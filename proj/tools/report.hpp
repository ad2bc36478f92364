#pragma once

// JSON and CSV writers for CLI reports: fixed key order, 17 significant digits.

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "matorth/matorth.hpp"

namespace matorth::cli {

using Json = nlohmann::ordered_json;

inline std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_json(const Json& j, std::ostream& os, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(key).dump() << ": ";
        write_json(value, os, indent + 2);
      }
      os << "\n" << close << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& v : j) flat = flat && !v.is_structured();
      if (flat) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write_json(j[i], os, indent + 2);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write_json(j[i], os, indent + 2);
      }
      os << "\n" << close << "]";
      return;
    }
    case Json::value_t::number_float:
      os << format_number(j.get<double>());
      return;
    default:
      os << j.dump();
      return;
  }
}

inline Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

inline Json complex_matrix_json(const Eigen::MatrixXcd& m) {
  Json out = Json::object();
  out["re"] = matrix_json(m.real());
  out["im"] = matrix_json(m.imag());
  return out;
}

inline Json poly_json(const MatrixPolynomial& p) {
  Json out = Json::array();
  for (const auto& c : p.coeffs()) out.push_back(matrix_json(c));
  return out;
}

inline Json operator_json(const DiffOperator& d) {
  Json out = Json::array();
  for (int i = 0; i <= d.order(); ++i) {
    Json c = Json::object();
    c["order"] = i;
    c["coefficients"] = poly_json(d.coefficient(i));
    out.push_back(c);
  }
  return out;
}

/// `t,entry_11,entry_12,...` followed by one row per grid point.
inline void write_density_csv(const WeightMatrix& w, const std::vector<double>& grid, std::ostream& os) {
  const Index s = w.size();
  os << "t";
  for (Index i = 1; i <= s; ++i) {
    for (Index k = 1; k <= s; ++k) os << ",entry_" << i << k;
  }
  os << "\n";
  for (double t : grid) {
    const Matrix m = w.density(t);
    os << format_number(t);
    for (Index i = 0; i < s; ++i) {
      for (Index k = 0; k < s; ++k) os << "," << format_number(m(i, k));
    }
    os << "\n";
  }
}

}  // namespace matorth::cli
