#include "bwdm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bwdm {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    s = s.substr(first, last - first + 1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        s = s.substr(1, s.size() - 2);
    }
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

bool parse_double(std::string_view s, double& v) {
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(v);
}

bool blank(std::string_view line) { return trim(line).empty() && line.find('"') == std::string_view::npos; }

}  // namespace

CsvTable read_csv(std::istream& in, bool has_header, const std::vector<std::string>& drop_columns) {
    if (!drop_columns.empty() && !has_header) {
        throw DataError("dropping columns by name requires a header row");
    }
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    std::vector<bool> keep;
    std::vector<std::string> names;
    std::vector<std::string> header_names;
    bool have_shape = false;

    auto set_shape = [&](const std::vector<std::string_view>& cells) {
        width = cells.size();
        keep.assign(width, true);
        have_shape = true;
    };

    if (has_header) {
        while (std::getline(in, line)) {
            ++line_no;
            if (!blank(line)) break;
        }
        if (blank(line)) {
            throw DataError("empty file");
        }
        const auto header = split(line);
        set_shape(header);
        header_names.assign(header.begin(), header.end());
        for (const auto& drop : drop_columns) {
            auto it = std::find(header.begin(), header.end(), drop);
            if (it == header.end()) {
                throw DataError("no column named '" + drop + "'");
            }
            keep[static_cast<std::size_t>(it - header.begin())] = false;
        }
        for (std::size_t j = 0; j < width; ++j) {
            if (keep[j]) names.emplace_back(header[j]);
        }
    }

    std::vector<double> values;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        const auto cells = split(line);
        if (!have_shape) set_shape(cells);
        if (cells.size() != width) {
            throw DataError("row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                            " fields, expected " + std::to_string(width));
        }
        for (std::size_t j = 0; j < width; ++j) {
            if (!keep[j]) continue;
            double v = 0.0;
            if (!parse_double(cells[j], v)) {
                std::string where = "row " + std::to_string(line_no) + ", column " + std::to_string(j + 1);
                if (has_header) where += " ('" + header_names[j] + "')";
                throw DataError(where + ": non-numeric value '" + std::string(cells[j]) + "'");
            }
            values.push_back(v);
        }
        ++rows;
    }
    if (rows == 0) {
        throw DataError("no data rows");
    }
    const auto d = static_cast<std::size_t>(std::count(keep.begin(), keep.end(), true));
    if (d == 0) {
        throw DataError("no columns left after dropping");
    }
    return {DataMatrix(rows, d, std::move(values)), std::move(names)};
}

DataMatrix load_csv(const std::string& path, bool has_header, const std::vector<std::string>& drop_columns) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path + "'");
    }
    return read_csv(in, has_header, drop_columns).data;
}

bool csv_has_header(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path + "'");
    }
    std::string line;
    while (std::getline(in, line)) {
        if (blank(line)) continue;
        double v = 0.0;
        for (auto cell : split(line)) {
            if (!parse_double(cell, v)) return true;
        }
        return false;
    }
    throw DataError("empty file");
}

DataMatrix standardize_columns(const DataMatrix& data) {
    const std::size_t n = data.rows();
    const std::size_t d = data.cols();
    const Point mean = column_means(data);
    std::vector<double> scale(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = data(i, j) - mean[j];
            scale[j] += diff * diff;
        }
    }
    for (auto& s : scale) {
        s = n > 1 ? std::sqrt(s / static_cast<double>(n - 1)) : 0.0;
        if (s == 0.0) s = 1.0;
    }
    std::vector<double> values(n * d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            values[i * d + j] = (data(i, j) - mean[j]) / scale[j];
        }
    }
    return DataMatrix(n, d, std::move(values));
}

std::string format_exact(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string format_sig(double v, int digits) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
    return std::string(buf, ptr);
}

void write_labeled_csv(std::ostream& out, const LabeledSample& sample) {
    const auto& data = sample.data;
    for (std::size_t j = 0; j < data.cols(); ++j) {
        out << 'x' << (j + 1) << ',';
    }
    out << "label\n";
    for (std::size_t i = 0; i < data.rows(); ++i) {
        for (std::size_t j = 0; j < data.cols(); ++j) {
            out << format_exact(data(i, j)) << ',';
        }
        out << sample.labels[i] << '\n';
    }
}

}  // namespace bwdm
