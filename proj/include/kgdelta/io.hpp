#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kgdelta::io {

/// Decimal form with 17 significant digits: parsing it back reproduces the
/// exact double.
std::string format_double(double v);

/// Column-oriented CSV: mandatory header, comma separator, one row per index.
/// All columns must share a length. A non-empty status string is appended as
/// a final `# status=...` comment line.
void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<const std::vector<double>*>& columns,
               const std::string& status = "");

/// Rows with optional (empty) cells, for sweeps where some rows carry no
/// value; numeric cells are preformatted strings.
void write_csv_rows(std::ostream& os, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows);

/// Writes `content` to `path`, or to stdout when `path` is empty.
void write_output(const std::string& path, const std::string& content);

}  // namespace kgdelta::io
