#pragma once

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bwdm/geometry.hpp"
#include "bwdm/synthgen.hpp"

namespace bwdm {

/// Malformed or unusable input data.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CsvTable {
    DataMatrix data;
    /// Names of the kept columns; empty when the file has no header.
    std::vector<std::string> columns;
};

/// Comma-separated numeric rows, '.' decimal point. Blank lines are skipped,
/// surrounding double quotes are stripped. Columns named in drop_columns are
/// removed before parsing and require a header. Throws DataError on empty
/// input, ragged rows, or a non-numeric cell (the message names row and column).
CsvTable read_csv(std::istream& in, bool has_header, const std::vector<std::string>& drop_columns = {});

DataMatrix load_csv(const std::string& path, bool has_header,
                    const std::vector<std::string>& drop_columns = {});

/// True when the first non-blank line has a cell that does not parse as a number.
bool csv_has_header(const std::string& path);

/// Per-column z-scores using the sample standard deviation. Constant columns
/// are centered only.
DataMatrix standardize_columns(const DataMatrix& data);

/// Shortest representation that round-trips to the same double.
std::string format_exact(double v);
/// `digits` significant digits, general notation.
std::string format_sig(double v, int digits = 6);

/// Header x1..xd,label then one row per observation at full precision.
void write_labeled_csv(std::ostream& out, const LabeledSample& sample);

}  // namespace bwdm
