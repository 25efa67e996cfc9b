#include "bwdm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bwdm {

DataMatrix::DataMatrix(std::size_t n, std::size_t d, std::vector<double> values)
    : n_(n), d_(d), values_(std::move(values)) {
    if (n_ == 0 || d_ == 0) {
        throw std::invalid_argument("data matrix must have at least one row and one column");
    }
    if (values_.size() != n_ * d_) {
        throw std::invalid_argument("data matrix size does not match its shape");
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!std::isfinite(values_[k])) {
            throw std::invalid_argument("non-finite value at row " + std::to_string(k / d_) +
                                        ", column " + std::to_string(k % d_));
        }
    }
}

DataMatrix DataMatrix::from_rows(const std::vector<Point>& rows) {
    if (rows.empty()) {
        throw std::invalid_argument("empty data");
    }
    const std::size_t d = rows.front().size();
    std::vector<double> values;
    values.reserve(rows.size() * d);
    for (const auto& r : rows) {
        if (r.size() != d) {
            throw std::invalid_argument("rows have differing dimensions");
        }
        values.insert(values.end(), r.begin(), r.end());
    }
    return DataMatrix(rows.size(), d, std::move(values));
}

DataMatrix DataMatrix::subset(std::span<const std::size_t> indices) const {
    std::vector<double> values;
    values.reserve(indices.size() * d_);
    for (auto i : indices) {
        if (i >= n_) {
            throw std::out_of_range("row index out of range");
        }
        auto r = row(i);
        values.insert(values.end(), r.begin(), r.end());
    }
    return DataMatrix(indices.size(), d_, std::move(values));
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("dimension mismatch");
    }
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double diff = a[j] - b[j];
        s += diff * diff;
    }
    return s;
}

double distance(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_distance(a, b));
}

double univariate_median(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("empty sample");
    }
    std::vector<double> v(values.begin(), values.end());
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument("non-finite value in sample");
        }
    }
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(v.begin(), v.begin() + mid);
    return lower + (upper - lower) / 2.0;
}

Point spatial_sign(std::span<const double> x, std::span<const double> anchor) {
    if (x.size() != anchor.size()) {
        throw std::invalid_argument("dimension mismatch");
    }
    Point s(x.size(), 0.0);
    const double norm = distance(x, anchor);
    if (norm == 0.0) {
        return s;
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
        s[j] = (x[j] - anchor[j]) / norm;
    }
    return s;
}

Point coordinate_median(const DataMatrix& data) {
    Point m(data.cols());
    std::vector<double> column(data.rows());
    for (std::size_t j = 0; j < data.cols(); ++j) {
        for (std::size_t i = 0; i < data.rows(); ++i) {
            column[i] = data(i, j);
        }
        m[j] = univariate_median(column);
    }
    return m;
}

Point column_means(const DataMatrix& data) {
    Point m(data.cols(), 0.0);
    for (std::size_t i = 0; i < data.rows(); ++i) {
        for (std::size_t j = 0; j < data.cols(); ++j) {
            m[j] += data(i, j);
        }
    }
    for (auto& v : m) {
        v /= static_cast<double>(data.rows());
    }
    return m;
}

double sum_of_distances(const DataMatrix& data, std::span<const double> y) {
    double f = 0.0;
    for (std::size_t i = 0; i < data.rows(); ++i) {
        f += distance(data.row(i), y);
    }
    return f;
}

namespace {

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

// One pass over the data at the current iterate.
struct WeiszfeldPass {
    double objective = 0.0;
    std::size_t multiplicity = 0;  // rows equal to the iterate
    double weight_sum = 0.0;
    double nearest = 0.0;          // distance to the closest row
    std::size_t nearest_row = 0;
    Point weighted_sum;            // sum of x_i / ||x_i - y||
    Point resultant;               // sum of sign(x_i - y)
};

WeiszfeldPass weiszfeld_pass(const DataMatrix& data, std::span<const double> y) {
    const std::size_t d = data.cols();
    WeiszfeldPass p;
    p.weighted_sum.assign(d, 0.0);
    p.resultant.assign(d, 0.0);
    p.nearest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < data.rows(); ++i) {
        auto x = data.row(i);
        const double dist = std::sqrt(squared_distance(x, y));
        if (dist < p.nearest) {
            p.nearest = dist;
            p.nearest_row = i;
        }
        if (dist == 0.0) {
            ++p.multiplicity;
            continue;
        }
        p.objective += dist;
        const double w = 1.0 / dist;
        p.weight_sum += w;
        for (std::size_t j = 0; j < d; ++j) {
            p.weighted_sum[j] += w * x[j];
            p.resultant[j] += w * (x[j] - y[j]);
        }
    }
    return p;
}

// A data point is the minimizer iff the resultant of the unit vectors toward
// the other points is no longer than its multiplicity.
bool optimal_at(const WeiszfeldPass& p) {
    return p.multiplicity > 0 && norm(p.resultant) <= static_cast<double>(p.multiplicity);
}

}  // namespace

MedianResult spatial_median(const DataMatrix& data, const MedianOptions& options) {
    if (data.rows() == 0) {
        throw std::invalid_argument("empty data");
    }
    if (!(options.tol > 0.0)) {
        throw std::invalid_argument("tol must be positive");
    }
    if (options.max_iter < 1) {
        throw std::invalid_argument("max_iter must be at least 1");
    }
    const std::size_t d = data.cols();

    MedianResult result;
    Point y = options.initial ? *options.initial : coordinate_median(data);
    if (y.size() != d) {
        throw std::invalid_argument("initial point has wrong dimension");
    }

    WeiszfeldPass pass = weiszfeld_pass(data, y);
    Point next(d);
    while (true) {
        if (pass.weight_sum == 0.0) {
            // Every observation coincides with y.
            result.converged = true;
            break;
        }
        double damping = 0.0;
        if (pass.multiplicity > 0) {
            const double r = norm(pass.resultant);
            const auto eta = static_cast<double>(pass.multiplicity);
            if (r <= eta) {
                result.converged = true;
                break;
            }
            damping = eta / r;
        }
        if (result.iterations == options.max_iter) {
            break;
        }
        for (std::size_t j = 0; j < d; ++j) {
            next[j] = (1.0 - damping) * (pass.weighted_sum[j] / pass.weight_sum) + damping * y[j];
        }
        const double step = distance(next, y) / (1.0 + norm(y));
        ++result.iterations;

        WeiszfeldPass next_pass = weiszfeld_pass(data, next);

        // Weiszfeld approaches a minimizer located on a data point only
        // sublinearly, so test the closest row once the iterate is near it.
        if (next_pass.multiplicity == 0 && next_pass.nearest < 10.0 * distance(next, y)) {
            auto x = data.row(next_pass.nearest_row);
            Point candidate(x.begin(), x.end());
            WeiszfeldPass vertex = weiszfeld_pass(data, candidate);
            if (optimal_at(vertex) && vertex.objective <= next_pass.objective) {
                next.swap(candidate);
                next_pass = std::move(vertex);
            }
        }

        if (options.check_descent &&
            next_pass.objective > pass.objective * (1.0 + 1e-12) + 1e-300) {
            throw std::logic_error("Weiszfeld objective increased");
        }
        y.swap(next);
        pass = std::move(next_pass);
        if (step < options.tol) {
            result.converged = true;
            break;
        }
    }
    result.median = std::move(y);
    result.objective = pass.objective;
    return result;
}

}  // namespace bwdm
