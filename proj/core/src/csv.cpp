#include "ecx/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ecx/errors.hpp"

namespace ecx::csv {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

namespace {

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += v[i];
    }
    return s;
}

}  // namespace

void for_each_row(const std::string& path, const std::vector<std::string>& expected_header,
                  const std::function<void(std::size_t, const std::vector<std::string>&)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file, header row required");
    const auto header = split(strip_cr(line));
    if (header != expected_header)
        throw DataError(path + ": expected header '" + join(expected_header) + "', got '" +
                        join(header) + "'");
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split(line);
        if (fields.size() != expected_header.size())
            throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(expected_header.size()) + " fields, got " +
                            std::to_string(fields.size()));
        fn(line_no, fields);
    }
}

double parse_double(const std::string& field, std::size_t line_no) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw DataError("line " + std::to_string(line_no) + ": malformed number '" + field + "'");
    return v;
}

int parse_year(const std::string& field, std::size_t line_no) {
    int v = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || field.size() != 4)
        throw DataError("line " + std::to_string(line_no) + ": malformed 4-digit year '" + field +
                        "'");
    return v;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

struct Writer::Impl {
    std::ofstream out;
    std::string buffer;
};

Writer::Writer(const std::string& path) : impl_(new Impl) {
    impl_->out.open(path, std::ios::binary);
    if (!impl_->out) {
        delete impl_;
        throw DataError("cannot open file for writing: " + path);
    }
    impl_->buffer.reserve(1 << 20);
}

Writer::~Writer() {
    if (!impl_->buffer.empty()) impl_->out.write(impl_->buffer.data(), impl_->buffer.size());
    delete impl_;
}

void Writer::row(const std::vector<std::string>& fields) {
    auto& buf = impl_->buffer;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) buf += ',';
        buf += fields[i];
    }
    buf += '\n';
    if (buf.size() > (1 << 20) - 4096) {
        impl_->out.write(buf.data(), buf.size());
        buf.clear();
    }
}

ActivityPanel read_intensity(const std::string& path) {
    ActivityPanelBuilder b;
    for_each_row(path, {"region", "activity", "year", "value"},
                 [&](std::size_t line_no, const std::vector<std::string>& f) {
                     const int year = parse_year(f[2], line_no);
                     const double v = parse_double(f[3], line_no);
                     if (v < 0.0)
                         throw DataError(path + ":" + std::to_string(line_no) +
                                         ": negative intensity value " + f[3]);
                     b.add(f[0], f[1], year, v);
                 });
    return b.build();
}

void write_intensity(const std::string& path, const ActivityPanel& panel) {
    Writer w(path);
    w.row({"region", "activity", "year", "value"});
    for (const auto& [k, v] : panel.values()) {
        w.row({panel.regions()[k.region], panel.activities()[k.activity],
               std::to_string(panel.years()[k.year]), format_double(v)});
    }
}

IndicatorSeries read_indicator(const std::string& path, const std::string& name,
                               const std::string& units) {
    IndicatorSeries s(name, units);
    for_each_row(path, {"region", "year", "value"},
                 [&](std::size_t line_no, const std::vector<std::string>& f) {
                     const int year = parse_year(f[1], line_no);
                     if (s.has(f[0], year))
                         throw DataError(path + ":" + std::to_string(line_no) +
                                         ": duplicate (region, year) = (" + f[0] + ", " + f[1] +
                                         ")");
                     s.set(f[0], year, parse_double(f[2], line_no));
                 });
    return s;
}

void write_indicator(const std::string& path, const IndicatorSeries& series) {
    Writer w(path);
    w.row({"region", "year", "value"});
    for (const auto& [k, v] : series.values())
        w.row({k.first, std::to_string(k.second), format_double(v)});
}

RegionGraph read_adjacency(const std::string& path) {
    std::vector<std::pair<std::string, std::string>> edges;
    for_each_row(path, {"region_a", "region_b"},
                 [&](std::size_t line_no, const std::vector<std::string>& f) {
                     if (f[0] == f[1])
                         throw DataError(path + ":" + std::to_string(line_no) +
                                         ": self-loop edge for region '" + f[0] + "'");
                     edges.push_back({f[0], f[1]});
                 });
    return RegionGraph::from_edges(edges);
}

void write_adjacency(const std::string& path, const RegionGraph& graph) {
    Writer w(path);
    w.row({"region_a", "region_b"});
    const auto& regions = graph.regions();
    for (int r = 0; r < static_cast<int>(regions.size()); ++r)
        for (int n : graph.neighbors()[r])
            if (n > r) w.row({regions[r], regions[n]});
}

std::map<std::pair<std::string, int>, double> read_activity_year(const std::string& path,
                                                                 const std::string& value_col) {
    std::map<std::pair<std::string, int>, double> out;
    for_each_row(path, {"activity", "year", value_col},
                 [&](std::size_t line_no, const std::vector<std::string>& f) {
                     const int year = parse_year(f[1], line_no);
                     const auto key = std::make_pair(f[0], year);
                     if (out.count(key))
                         throw DataError(path + ":" + std::to_string(line_no) +
                                         ": duplicate (activity, year) = (" + f[0] + ", " + f[1] +
                                         ")");
                     out[key] = parse_double(f[2], line_no);
                 });
    return out;
}

void write_activity_year(const std::string& path, const std::string& value_col,
                         const std::map<std::pair<std::string, int>, double>& values) {
    Writer w(path);
    w.row({"activity", "year", value_col});
    for (const auto& [k, v] : values)
        w.row({k.first, std::to_string(k.second), format_double(v)});
}

std::map<int, double> read_year_value(const std::string& path) {
    std::map<int, double> out;
    for_each_row(path, {"year", "value"},
                 [&](std::size_t line_no, const std::vector<std::string>& f) {
                     const int year = parse_year(f[0], line_no);
                     if (out.count(year))
                         throw DataError(path + ":" + std::to_string(line_no) +
                                         ": duplicate year " + f[0]);
                     out[year] = parse_double(f[1], line_no);
                 });
    return out;
}

std::map<std::string, std::string> read_crosswalk(const std::string& path) {
    std::map<std::string, std::string> out;
    for_each_row(path, {"sub_region", "region"},
                 [&](std::size_t line_no, const std::vector<std::string>& f) {
                     auto it = out.find(f[0]);
                     if (it != out.end() && it->second != f[1])
                         throw DataError(path + ":" + std::to_string(line_no) + ": sub-region '" +
                                         f[0] + "' maps to multiple regions ('" + it->second +
                                         "', '" + f[1] + "')");
                     out[f[0]] = f[1];
                 });
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file for checksum: " + path);
    std::uint64_t h = 14695981039346656037ull;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const auto n = in.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

}  // namespace ecx::csv
