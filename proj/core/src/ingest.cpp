#include "ecx/ingest.hpp"

#include <set>

#include "ecx/csv.hpp"
#include "ecx/errors.hpp"

namespace ecx {

ActivityPanel load_intensity(const std::string& path,
                             const std::optional<std::map<std::string, std::string>>& crosswalk) {
    ActivityPanelBuilder builder;
    std::set<std::string> unknown;
    csv::for_each_row(
        path, {"region", "activity", "year", "value"},
        [&](std::size_t line_no, const std::vector<std::string>& f) {
            const int year = csv::parse_year(f[2], line_no);
            const double v = csv::parse_double(f[3], line_no);
            if (v < 0.0)
                throw DataError(path + ":" + std::to_string(line_no) +
                                ": negative intensity value " + f[3]);
            std::string region = f[0];
            if (crosswalk) {
                auto it = crosswalk->find(region);
                if (it == crosswalk->end()) {
                    unknown.insert(region);
                    return;
                }
                region = it->second;
            }
            builder.add(region, f[1], year, v);
        });
    if (!unknown.empty()) {
        std::string msg = path + ": sub-regions missing from crosswalk:";
        for (const auto& u : unknown) msg += " " + u;
        throw DataError(msg);
    }
    return builder.build();
}

IndicatorSeries deflate(const IndicatorSeries& nominal, const std::map<int, double>& price_index,
                        int base_year) {
    auto base_it = price_index.find(base_year);
    if (base_it == price_index.end())
        throw DataError("price index missing base year " + std::to_string(base_year));
    if (base_it->second <= 0.0)
        throw DataError("nonpositive price index at base year " + std::to_string(base_year));
    IndicatorSeries out(nominal.name() + "_real", nominal.units());
    for (const auto& [key, v] : nominal.values()) {
        auto it = price_index.find(key.second);
        if (it == price_index.end())
            throw DataError("price index missing year " + std::to_string(key.second));
        if (it->second <= 0.0)
            throw DataError("nonpositive price index at year " + std::to_string(key.second));
        out.set(key.first, key.second, v * base_it->second / it->second);
    }
    return out;
}

}  // namespace ecx
