#pragma once

#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <string>

#include "nlg/field.hpp"

namespace nlg {

using json = nlohmann::ordered_json;

inline std::string csv_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// One row per node: index, coordinate, then the components in row-major
// order (u_0_0, u_0_1, ...).
inline std::string field_to_csv(const Field& u) {
  std::ostringstream os;
  os << "i,x";
  for (int a = 0; a < u.rows; ++a)
    for (int b = 0; b < u.cols; ++b) os << ",u_" << a << "_" << b;
  os << "\n";
  for (int i = 0; i < u.M(); ++i) {
    os << i << "," << csv_double(u.grid->x(i));
    for (int a = 0; a < u.rows; ++a)
      for (int b = 0; b < u.cols; ++b) os << "," << csv_double(u[i](a, b));
    os << "\n";
  }
  return os.str();
}

// One row per ordered pair (i != j): indices, pair distance, measure
// weight, then the kernel components.
inline std::string odform_to_csv(const OdForm& f) {
  std::ostringstream os;
  os << "i,j,r,mu";
  for (int a = 0; a < f.rows; ++a)
    for (int b = 0; b < f.cols; ++b) os << ",f_" << a << "_" << b;
  os << "\n";
  for (int i = 0; i < f.M(); ++i)
    for (int j = 0; j < f.M(); ++j) {
      if (j == i) continue;
      os << i << "," << j << "," << csv_double(f.grid->r(i, j)) << ","
         << csv_double(f.grid->mu(i, j));
      for (int a = 0; a < f.rows; ++a)
        for (int b = 0; b < f.cols; ++b)
          os << "," << csv_double(f.blk(i, j)(a, b));
      os << "\n";
    }
  return os.str();
}

inline void write_text_file(const std::string& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  json j;
  in >> j;
  return j;
}

}  // namespace nlg
