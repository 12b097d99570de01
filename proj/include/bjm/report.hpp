#pragma once

// Writing reports to disk.

#include <string>

#include "bjm/pipeline.hpp"

namespace bjm {

/// Writes the CSV text of a table, header first.
std::string table_csv(const Table& t);

/// format "json": report.json. format "csv": report.json plus <table>.csv per table.
/// Creates out_dir if needed; throws IOError on failure.
void emit(const AnalysisReport& report, const std::string& out_dir, const std::string& format);

}  // namespace bjm
