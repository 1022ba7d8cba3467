#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace nsbox::stats {

// One empirical cell checked against an analytic target.
struct CellStat {
    std::string setting;
    std::string cell;
    std::uint64_t rounds = 0;
    std::uint64_t count = 0;
    double empirical = 0.0;
    double target = 0.0;
    double stderr_value = 0.0;
    double z = 0.0;
};

struct StatTestReport {
    double sigma_threshold = 4.0;
    bool pass = false;
    double max_abs_z = 0.0;
    std::vector<CellStat> cells;
};

/// Binomial standard error for target probability q over n rounds, floored at
/// 1/(2n) so degenerate targets (q = 0 or 1) still yield finite z-scores.
double binomial_stderr(double q, std::uint64_t n);

/// z-score of an observed count against a binomial(n, q) target.
CellStat cell_stat(std::string setting, std::string cell, std::uint64_t count,
                   std::uint64_t n, double target);

StatTestReport finish_report(std::vector<CellStat> cells, double sigma_threshold);

nlohmann::ordered_json report_to_json(const StatTestReport& report);
void report_to_csv(std::ostream& out, const StatTestReport& report);

/// Binary entropy in bits; h(0) = h(1) = 0.
double binary_entropy(double q);

} // namespace nsbox::stats
