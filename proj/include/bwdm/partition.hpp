#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bwdm/geometry.hpp"

namespace bwdm {

/// Hard assignment of n observations to K non-empty clusters.
class Partition {
public:
    Partition() = default;

    /// Validates that every label is below k and every cluster is occupied.
    Partition(std::vector<std::size_t> labels, std::size_t k);

    /// Infers K as max(label) + 1.
    static Partition from_labels(std::vector<std::size_t> labels);

    std::size_t k() const { return k_; }
    std::size_t size() const { return labels_.size(); }
    const std::vector<std::size_t>& labels() const { return labels_; }
    std::size_t operator[](std::size_t i) const { return labels_[i]; }

    std::vector<std::size_t> cluster_sizes() const;
    /// Row indices of each cluster, in ascending order.
    std::vector<std::vector<std::size_t>> members() const;

    bool operator==(const Partition&) const = default;

private:
    std::vector<std::size_t> labels_;
    std::size_t k_ = 0;
};

/// Renumber clusters by order of first occurrence. Returns the old-to-new map.
std::vector<std::size_t> canonicalize_labels(std::vector<std::size_t>& labels, std::size_t k);

enum class Method { k_spatial_medians, k_means, pam };

std::string_view method_name(Method method);
std::optional<Method> parse_method(std::string_view name);

struct PartitionerConfig {
    Method method = Method::k_spatial_medians;
    std::size_t n_init = 10;
    std::size_t max_iter = 100;
    std::uint64_t seed = 42;
    /// Convergence tolerance of the spatial-median updates in k_spatial_medians.
    double tol = 1e-9;
    /// Throw std::logic_error if the clustering cost increases between iterations.
    bool check_descent = false;

    void validate() const;
};

struct FitResult {
    Partition partition;
    /// Center of each cluster, indexed by canonical label.
    std::vector<Point> centers;
    /// Sum of distances to centers; squared distances for k_means.
    double cost = 0.0;
    /// Data row of each medoid (pam only).
    std::vector<std::size_t> medoids;
    /// Lloyd iterations or SWAP passes of the selected run.
    std::size_t iterations = 0;
};

/// Best of `n_init` seeded Lloyd restarts (or PAM when config.method is pam).
/// Each restart draws K distinct rows as initial centers, then alternates
/// nearest-center assignment (ties to the lower cluster index) with center
/// updates until the labels stop changing. A cluster that empties takes the
/// point farthest from its own center. The lowest cost wins, earliest restart
/// on ties, and labels are renumbered by first occurrence.
FitResult fit_clustering(const DataMatrix& data, std::size_t k, const PartitionerConfig& config);

Partition fit(const DataMatrix& data, std::size_t k, const PartitionerConfig& config);

/// k-medoids: BUILD initialization, then the best cost-reducing SWAP until none
/// remains. Deterministic; n_init and seed are not used.
FitResult pam_clustering(const DataMatrix& data, std::size_t k, const PartitionerConfig& config);

Partition pam_fit(const DataMatrix& data, std::size_t k, const PartitionerConfig& config);

}  // namespace bwdm
