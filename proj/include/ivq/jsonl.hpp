#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace ivq {

std::vector<nlohmann::json> read_jsonl(const std::string& path);

// Single appending writer per output file; one compact object per line.
class JsonlWriter {
public:
    explicit JsonlWriter(const std::string& path);
    void write(const nlohmann::json& j);
    void write_line(const std::string& line);

private:
    std::ofstream out_;
    std::string path_;
};

} // namespace ivq
