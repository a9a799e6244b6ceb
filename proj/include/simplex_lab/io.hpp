#pragma once

#include <ostream>
#include <span>
#include <string>

#include "simplex_lab/process.hpp"

namespace simplex_lab {

/// 17 significant digits, round-trip safe. Non-finite values become "null"
/// in JSON contexts and "nan"/"inf" otherwise.
std::string format_double(double v);
std::string format_json_number(double v);

/// Header row "x0,x1,...,x{dim-1}".
void write_csv_header(std::ostream& out, std::size_t dim);
void write_csv_row(std::ostream& out, std::span<const double> x);

/// {"x":[...]}
void write_point_jsonl(std::ostream& out, std::span<const double> x);
/// {"atoms":[[location,weight],...]}
void write_atoms_jsonl(std::ostream& out, const AtomicProbability& p);

}  // namespace simplex_lab
