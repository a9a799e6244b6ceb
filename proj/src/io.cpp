#include "simplex_lab/io.hpp"

#include <cmath>
#include <cstdio>

namespace simplex_lab {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_json_number(double v) { return std::isfinite(v) ? format_double(v) : "null"; }

void write_csv_header(std::ostream& out, std::size_t dim) {
  for (std::size_t i = 0; i < dim; ++i) out << (i ? ",x" : "x") << i;
  out << '\n';
}

void write_csv_row(std::ostream& out, std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out << ',';
    out << format_double(x[i]);
  }
  out << '\n';
}

void write_point_jsonl(std::ostream& out, std::span<const double> x) {
  out << "{\"x\":[";
  for (std::size_t i = 0; i < x.size(); ++i) out << (i ? "," : "") << format_json_number(x[i]);
  out << "]}\n";
}

void write_atoms_jsonl(std::ostream& out, const AtomicProbability& p) {
  out << "{\"atoms\":[";
  for (std::size_t i = 0; i < p.atoms.size(); ++i) {
    out << (i ? ",[" : "[") << format_json_number(p.atoms[i].location) << ','
        << format_json_number(p.atoms[i].weight) << ']';
  }
  out << "]}\n";
}

}  // namespace simplex_lab
