#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace bwdm {

using Point = std::vector<double>;

/// Dense n x d matrix of finite observations stored row-major.
class DataMatrix {
public:
    DataMatrix() = default;

    /// Throws std::invalid_argument when values.size() != n * d, n or d is
    /// zero, or any entry is not finite.
    DataMatrix(std::size_t n, std::size_t d, std::vector<double> values);

    static DataMatrix from_rows(const std::vector<Point>& rows);

    std::size_t rows() const { return n_; }
    std::size_t cols() const { return d_; }

    std::span<const double> row(std::size_t i) const {
        return {values_.data() + i * d_, d_};
    }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * d_ + j]; }

    const std::vector<double>& values() const { return values_; }

    /// Rows selected by index, in the given order.
    DataMatrix subset(std::span<const std::size_t> indices) const;

    bool operator==(const DataMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::size_t d_ = 0;
    std::vector<double> values_;
};

double distance(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);

/// Sample median; the midpoint of the two central order statistics for even n.
double univariate_median(std::span<const double> values);

/// Unit vector pointing from anchor to x, or the zero vector when they coincide.
Point spatial_sign(std::span<const double> x, std::span<const double> anchor);

Point coordinate_median(const DataMatrix& data);
Point column_means(const DataMatrix& data);

/// Sum of Euclidean distances from y to every row of data.
double sum_of_distances(const DataMatrix& data, std::span<const double> y);

struct MedianOptions {
    double tol = 1e-9;
    std::size_t max_iter = 1000;
    /// Starting point. Defaults to the coordinate-wise median.
    std::optional<Point> initial;
    /// Throw std::logic_error if the objective ever increases between iterates.
    bool check_descent = false;
};

struct MedianResult {
    Point median;
    double objective = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Spatial (L2) median: the minimizer of sum_i ||y - x_i||.
///
/// Solved by Weiszfeld iteration with the Vardi-Zhang treatment of iterates
/// that land on a data point: if the resultant of the unit vectors toward the
/// other points has norm no larger than the multiplicity of the current
/// iterate, the iterate is optimal; otherwise a damped step moves off it.
/// Stops when ||y_{t+1} - y_t|| / (1 + ||y_t||) < tol. Running out of
/// iterations is reported through `converged`, not an exception.
MedianResult spatial_median(const DataMatrix& data, const MedianOptions& options = {});

}  // namespace bwdm
