#pragma once

#include <cstddef>
#include <vector>

#include "bwdm/geometry.hpp"
#include "bwdm/partition.hpp"

namespace bwdm {

/// Per-cluster sizes and spatial medians.
struct ClusterSummary {
    std::vector<std::size_t> sizes;
    std::vector<Point> medians;

    std::size_t k() const { return sizes.size(); }
    std::size_t n() const;
};

ClusterSummary summarize(const DataMatrix& data, const Partition& partition,
                         const MedianOptions& options = {});

/// Average Between-Distances to the Medians: the mean Euclidean distance over
/// all C(K,2) unordered pairs of cluster medians. Requires K >= 2.
double abdm(const ClusterSummary& summary);

/// Average Within-Distances to the Median: the mean distance of each
/// observation to the median of its own cluster.
double awdm(const DataMatrix& data, const Partition& partition, const ClusterSummary& summary);

/// (abdm / (K - 1)) / (awdm / (n - K)). Requires 2 <= K < n. Returns +infinity
/// when awdm is zero.
double bwdm(double abdm_value, double awdm_value, std::size_t k, std::size_t n);

/// C(k, 2).
constexpr std::size_t pair_count(std::size_t k) { return k < 2 ? 0 : k * (k - 1) / 2; }

struct IndexRecord {
    std::size_t k = 0;
    double abdm = 0.0;
    double awdm = 0.0;
    double bwdm = 0.0;
    /// awdm == 0, so bwdm is +infinity.
    bool degenerate = false;
};

struct IndexCurve {
    std::vector<IndexRecord> records;
    std::size_t best_k = 0;
    std::size_t n = 0;
};

/// ABDM, AWDM and BWDM of one fixed partition.
IndexRecord evaluate_partition(const DataMatrix& data, const Partition& partition,
                               const MedianOptions& options = {});

/// K with the largest BWDM. Degenerate records are skipped unless every record
/// is degenerate; ties go to the smaller K.
std::size_t select_best(const std::vector<IndexRecord>& records);

struct SelectOptions {
    MedianOptions median;
    /// Worker threads for the per-K fits; 0 picks the hardware concurrency.
    unsigned threads = 0;
};

/// Fits one partition per K = 2..k_max with the same partitioner config, scores
/// each with BWDM and picks the argmax. Requires 2 <= k_max < n.
IndexCurve select_k(const DataMatrix& data, std::size_t k_max, const PartitionerConfig& partitioner,
                    const SelectOptions& options = {});

/// Fitted partitions for K = 2..k_max, in K order. Runs the fits concurrently
/// when threads allow; the result does not depend on scheduling.
std::vector<Partition> fit_range(const DataMatrix& data, std::size_t k_max,
                                 const PartitionerConfig& partitioner, unsigned threads = 0);

/// Curve for already fitted partitions (one per K, K = 2, 3, ...).
IndexCurve curve_from_partitions(const DataMatrix& data, const std::vector<Partition>& partitions,
                                 const MedianOptions& options = {});

}  // namespace bwdm
