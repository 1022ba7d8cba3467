#include "nsbox/stats.hpp"

#include <cmath>
#include <ostream>

namespace nsbox::stats {

double binomial_stderr(double q, std::uint64_t n) {
    if (n == 0)
        return 1.0;
    const double nn = static_cast<double>(n);
    const double raw = std::sqrt(q * (1.0 - q) / nn);
    return std::max(raw, 1.0 / (2.0 * nn));
}

CellStat cell_stat(std::string setting, std::string cell, std::uint64_t count,
                   std::uint64_t n, double target) {
    CellStat s;
    s.setting = std::move(setting);
    s.cell = std::move(cell);
    s.rounds = n;
    s.count = count;
    s.empirical = n == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(n);
    s.target = target;
    s.stderr_value = binomial_stderr(target, n);
    s.z = (s.empirical - target) / s.stderr_value;
    return s;
}

StatTestReport finish_report(std::vector<CellStat> cells, double sigma_threshold) {
    StatTestReport r;
    r.sigma_threshold = sigma_threshold;
    r.cells = std::move(cells);
    for (const CellStat& c : r.cells)
        r.max_abs_z = std::max(r.max_abs_z, std::abs(c.z));
    r.pass = r.max_abs_z <= sigma_threshold;
    return r;
}

nlohmann::ordered_json report_to_json(const StatTestReport& report) {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["type"] = "stat-test";
    j["sigma_threshold"] = report.sigma_threshold;
    j["pass"] = report.pass;
    j["max_abs_z"] = report.max_abs_z;
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (const CellStat& c : report.cells) {
        cells.push_back({{"setting", c.setting},
                         {"cell", c.cell},
                         {"rounds", c.rounds},
                         {"count", c.count},
                         {"empirical", c.empirical},
                         {"target", c.target},
                         {"stderr", c.stderr_value},
                         {"z", c.z}});
    }
    j["cells"] = std::move(cells);
    return j;
}

void report_to_csv(std::ostream& out, const StatTestReport& report) {
    out << "setting,cell,rounds,count,empirical,target,stderr,z\n";
    const auto flags = out.flags();
    out.precision(17);
    for (const CellStat& c : report.cells) {
        out << c.setting << ',' << c.cell << ',' << c.rounds << ',' << c.count << ','
            << c.empirical << ',' << c.target << ',' << c.stderr_value << ',' << c.z
            << '\n';
    }
    out.flags(flags);
}

double binary_entropy(double q) {
    if (q <= 0.0 || q >= 1.0)
        return 0.0;
    return -q * std::log2(q) - (1.0 - q) * std::log2(1.0 - q);
}

} // namespace nsbox::stats
