#include "manifest.hpp"

#include <algorithm>
#include <fstream>

#include "ecx/csv.hpp"
#include "ecx/errors.hpp"

namespace ecx::cli {

Manifest::Manifest(std::string command, std::string config_hash)
    : command_(std::move(command)), config_hash_(std::move(config_hash)) {}

void Manifest::add_input(const std::string& path) {
    if (path.empty()) return;
    for (const auto& [p, h] : inputs_)
        if (p == path) return;
    inputs_.push_back({path, csv::hex64(csv::fnv1a64_file(path))});
}

void Manifest::add_output(const std::string& path, const std::string& display_name) {
    outputs_.push_back({display_name, csv::hex64(csv::fnv1a64_file(path))});
}

void Manifest::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write manifest: " + path);
    out << "artifact=ecx 0.1.0\n";
    out << "command=" << command_ << "\n";
    out << "config=" << config_hash_ << "\n";
    auto inputs = inputs_;
    std::sort(inputs.begin(), inputs.end());
    for (const auto& [p, h] : inputs) out << "input:" << p << "=" << h << "\n";
    for (const auto& [n, h] : outputs_) out << "output:" << n << "=" << h << "\n";
}

}  // namespace ecx::cli
