#include "mipt/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mipt {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

namespace {

std::string to_csv(const Table& t) {
    std::ostringstream os;
    for (const auto& c : t.comments) os << "# " << c << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << t.columns[i] << (i + 1 < t.columns.size() ? "," : "");
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << row[i] << (i + 1 < row.size() ? "," : "");
        os << "\n";
    }
    return os.str();
}

std::string to_json_text(const Table& t) {
    nlohmann::json j;
    j["comments"] = t.comments;
    j["columns"] = t.columns;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json jr = nlohmann::json::array();
        for (const auto& cell : row) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (!cell.empty() && end == cell.c_str() + cell.size())
                jr.push_back(v);
            else
                jr.push_back(cell);
        }
        rows.push_back(std::move(jr));
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

}  // namespace

void write_table(const std::filesystem::path& path, const Table& table, OutputFormat format) {
    write_text_atomic(path, format == OutputFormat::Csv ? to_csv(table) : to_json_text(table));
}

}  // namespace mipt
