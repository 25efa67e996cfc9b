#include "bwdm/baselines.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

namespace bwdm {

std::string_view baseline_name(Baseline b) {
    return b == Baseline::ch ? "ch" : "silhouette";
}

std::optional<Baseline> parse_baseline(std::string_view name) {
    if (name == "ch") return Baseline::ch;
    if (name == "silhouette") return Baseline::silhouette;
    return std::nullopt;
}

namespace {

void check_partition(const DataMatrix& data, const Partition& partition) {
    if (partition.size() != data.rows()) {
        throw std::invalid_argument("partition does not match the data");
    }
}

}  // namespace

double ch_index(const DataMatrix& data, const Partition& partition) {
    check_partition(data, partition);
    const std::size_t n = data.rows();
    const std::size_t k = partition.k();
    if (k < 2 || k >= n) {
        throw std::invalid_argument("CH index requires 2 <= K < n");
    }
    const std::size_t d = data.cols();
    const Point grand = column_means(data);
    std::vector<Point> means(k, Point(d, 0.0));
    const auto sizes = partition.cluster_sizes();
    for (std::size_t i = 0; i < n; ++i) {
        auto x = data.row(i);
        for (std::size_t j = 0; j < d; ++j) means[partition[i]][j] += x[j];
    }
    for (std::size_t c = 0; c < k; ++c) {
        for (auto& v : means[c]) v /= static_cast<double>(sizes[c]);
    }

    double between = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        between += static_cast<double>(sizes[c]) * squared_distance(means[c], grand);
    }
    double within = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        within += squared_distance(data.row(i), means[partition[i]]);
    }
    if (within == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return (between / static_cast<double>(k - 1)) / (within / static_cast<double>(n - k));
}

double silhouette_width(const DataMatrix& data, const Partition& partition) {
    check_partition(data, partition);
    const std::size_t n = data.rows();
    const std::size_t k = partition.k();
    if (k < 2 || k > n - 1) {
        throw std::invalid_argument("silhouette requires 2 <= K <= n - 1");
    }
    const auto sizes = partition.cluster_sizes();
    std::vector<double> sums(k);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t own = partition[i];
        if (sizes[own] == 1) {
            continue;
        }
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) sums[partition[j]] += distance(data.row(i), data.row(j));
        }
        const double a = sums[own] / static_cast<double>(sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (c != own) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
        }
        const double denom = std::max(a, b);
        total += denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return total / static_cast<double>(n);
}

}  // namespace bwdm
