#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "simplex_lab/core.hpp"
#include "simplex_lab/stats.hpp"

namespace simplex_lab {

struct NamedReport {
  std::string name;
  TestReport report;
};

/// One SE-band check per mixed moment of total order <= max_order.
std::vector<NamedReport> moment_checks(const PointCloud& samples, const DirichletParams& params,
                                       int max_order, double band, const std::string& prefix);

/// Runs the suite "core", "transforms", "chain", "process" or "all".
/// n = 0 selects each check's default sample size.
std::vector<NamedReport> run_suite(std::string_view suite, std::uint64_t seed, std::size_t n = 0);

bool all_pass(const std::vector<NamedReport>& reports);

/// One line per report: name, then its JSON.
void write_reports(std::ostream& out, const std::vector<NamedReport>& reports);

}  // namespace simplex_lab
