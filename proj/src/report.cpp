#include "bjm/report.hpp"

#include <filesystem>
#include <fstream>

#include "bjm/errors.hpp"

namespace bjm {

namespace {

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw IOError("cannot open " + p.string() + " for writing");
    f << text;
    f.close();
    if (!f) throw IOError("failed writing " + p.string());
}

}  // namespace

std::string table_csv(const Table& t) {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += csv_cell(cells[i]);
        }
        out += '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    return out;
}

void emit(const AnalysisReport& report, const std::string& out_dir, const std::string& format) {
    if (format != "json" && format != "csv") throw IOError("unknown format '" + format + "'");
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IOError("cannot create " + out_dir + ": " + ec.message());
    const fs::path dir(out_dir);
    write_file(dir / "report.json", report_json(report).dump(2) + "\n");
    if (format == "csv") {
        for (const auto& t : report.tables) write_file(dir / (t.name + ".csv"), table_csv(t));
    }
}

}  // namespace bjm
