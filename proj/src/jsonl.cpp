#include "ivq/jsonl.hpp"

#include "ivq/errors.hpp"

namespace ivq {

std::vector<nlohmann::json> read_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open: " + path);
    std::vector<nlohmann::json> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            rows.push_back(nlohmann::json::parse(line));
        } catch (const nlohmann::json::parse_error& e) {
            throw IoFailure(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return rows;
}

JsonlWriter::JsonlWriter(const std::string& path) : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw IoFailure("cannot open for writing: " + path);
}

void JsonlWriter::write(const nlohmann::json& j) { write_line(j.dump()); }

void JsonlWriter::write_line(const std::string& line) {
    out_ << line << "\n";
    if (!out_) throw IoFailure("write failed: " + path_);
}

} // namespace ivq
