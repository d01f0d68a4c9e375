#pragma once

#include <string>
#include <vector>

namespace ecx::cli {

// Run manifest: line-delimited key=value records proving which inputs were
// read and what was produced. No timestamps, so reruns on identical inputs
// are byte-identical.
class Manifest {
   public:
    Manifest(std::string command, std::string config_hash);

    void add_input(const std::string& path);
    void add_output(const std::string& path, const std::string& display_name);

    void write(const std::string& path) const;

   private:
    std::string command_;
    std::string config_hash_;
    std::vector<std::pair<std::string, std::string>> inputs_;   // (path, hash)
    std::vector<std::pair<std::string, std::string>> outputs_;  // (name, hash)
};

}  // namespace ecx::cli
