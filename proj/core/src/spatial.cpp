#include "ecx/spatial.hpp"

#include "ecx/errors.hpp"
#include "ecx/stats.hpp"

namespace ecx {

double morans_i(const std::map<std::string, double>& values, const RegionGraph& graph) {
    const auto& regions = graph.regions();
    const std::size_t n = regions.size();
    if (n == 0) throw DataError("morans_i: empty graph");

    std::vector<double> x(n);
    for (std::size_t r = 0; r < n; ++r) {
        auto it = values.find(regions[r]);
        if (it == values.end())
            throw DataError("morans_i: value missing for region '" + regions[r] + "'");
        x[r] = it->second;
    }

    std::size_t degree_sum = 0;
    for (std::size_t r = 0; r < n; ++r) degree_sum += graph.neighbors()[r].size();
    if (degree_sum == 0) throw DataError("morans_i: no edges");

    const double xbar = stats::mean(x);
    double denom = 0.0;
    for (double v : x) denom += (v - xbar) * (v - xbar);
    if (denom <= 0.0) throw NumericalError("morans_i: constant field");

    double numer = 0.0;
    for (std::size_t r = 0; r < n; ++r)
        for (int rp : graph.neighbors()[r]) numer += (x[rp] - xbar) * (x[r] - xbar);

    return (static_cast<double>(n) / static_cast<double>(degree_sum)) * numer / denom;
}

NeighborAverageResult neighbor_average(const std::map<std::string, double>& values,
                                       const RegionGraph& graph, bool average_defined_subset) {
    NeighborAverageResult out;
    const auto& regions = graph.regions();
    for (std::size_t r = 0; r < regions.size(); ++r) {
        const auto& nb = graph.neighbors()[r];
        if (nb.empty()) {
            out.undefined.push_back({regions[r], "no neighbors"});
            continue;
        }
        double sum = 0.0;
        int count = 0;
        bool missing = false;
        for (int rp : nb) {
            auto it = values.find(regions[rp]);
            if (it == values.end()) {
                missing = true;
                if (!average_defined_subset) break;
                continue;
            }
            sum += it->second;
            ++count;
        }
        if (missing && !average_defined_subset) {
            out.undefined.push_back({regions[r], "neighbor missing a value"});
            continue;
        }
        if (count == 0) {
            out.undefined.push_back({regions[r], "no neighbor has a value"});
            continue;
        }
        out.value[regions[r]] = sum / count;
    }
    return out;
}

}  // namespace ecx
