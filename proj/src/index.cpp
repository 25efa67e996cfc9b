#include "bwdm/index.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace bwdm {

std::size_t ClusterSummary::n() const {
    return std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
}

ClusterSummary summarize(const DataMatrix& data, const Partition& partition,
                         const MedianOptions& options) {
    if (partition.size() != data.rows()) {
        throw std::invalid_argument("partition does not match the data");
    }
    ClusterSummary s;
    for (const auto& rows : partition.members()) {
        if (rows.empty()) {
            throw std::invalid_argument("empty cluster");
        }
        s.sizes.push_back(rows.size());
        s.medians.push_back(spatial_median(data.subset(rows), options).median);
    }
    return s;
}

double abdm(const ClusterSummary& summary) {
    const std::size_t k = summary.medians.size();
    if (k < 2) {
        throw std::invalid_argument("ABDM undefined for K<2");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            total += distance(summary.medians[i], summary.medians[j]);
        }
    }
    return total / static_cast<double>(pair_count(k));
}

double awdm(const DataMatrix& data, const Partition& partition, const ClusterSummary& summary) {
    if (partition.size() != data.rows() || summary.n() != data.rows() ||
        summary.k() != partition.k()) {
        throw std::invalid_argument("summary does not match the partition");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < data.rows(); ++i) {
        total += distance(data.row(i), summary.medians[partition[i]]);
    }
    return total / static_cast<double>(data.rows());
}

double bwdm(double abdm_value, double awdm_value, std::size_t k, std::size_t n) {
    if (k < 2) {
        throw std::invalid_argument("BWDM undefined for K<2");
    }
    if (k >= n) {
        throw std::invalid_argument("BWDM requires K < n");
    }
    if (awdm_value < 0.0 || abdm_value < 0.0) {
        throw std::invalid_argument("distances must be non-negative");
    }
    if (awdm_value == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double between = abdm_value / static_cast<double>(k - 1);
    const double within = awdm_value / static_cast<double>(n - k);
    return between / within;
}

IndexRecord evaluate_partition(const DataMatrix& data, const Partition& partition,
                               const MedianOptions& options) {
    const auto summary = summarize(data, partition, options);
    IndexRecord r;
    r.k = partition.k();
    r.abdm = abdm(summary);
    r.awdm = awdm(data, partition, summary);
    r.bwdm = bwdm(r.abdm, r.awdm, r.k, data.rows());
    r.degenerate = r.awdm == 0.0;
    return r;
}

std::size_t select_best(const std::vector<IndexRecord>& records) {
    if (records.empty()) {
        throw std::invalid_argument("no index records");
    }
    const bool all_degenerate = std::all_of(records.begin(), records.end(),
                                            [](const IndexRecord& r) { return r.degenerate; });
    const IndexRecord* best = nullptr;
    for (const auto& r : records) {
        if (r.degenerate && !all_degenerate) {
            continue;
        }
        if (best == nullptr || r.bwdm > best->bwdm || (r.bwdm == best->bwdm && r.k < best->k)) {
            best = &r;
        }
    }
    return best->k;
}

std::vector<Partition> fit_range(const DataMatrix& data, std::size_t k_max,
                                 const PartitionerConfig& partitioner, unsigned threads) {
    if (k_max < 2) {
        throw std::invalid_argument("k_max must be at least 2");
    }
    if (k_max >= data.rows()) {
        throw std::invalid_argument("k_max must be smaller than the number of observations");
    }
    partitioner.validate();
    const std::size_t count = k_max - 1;
    std::vector<Partition> out(count);
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));

    if (threads <= 1) {
        for (std::size_t t = 0; t < count; ++t) {
            out[t] = fit(data, t + 2, partitioner);
        }
        return out;
    }

    // Each slot is written by exactly one worker; errors are rethrown in K order.
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t t = next++; t < count; t = next++) {
            try {
                out[t] = fit(data, t + 2, partitioner);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back(work);
    }
    pool.clear();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

IndexCurve curve_from_partitions(const DataMatrix& data, const std::vector<Partition>& partitions,
                                 const MedianOptions& options) {
    IndexCurve curve;
    curve.n = data.rows();
    for (const auto& p : partitions) {
        curve.records.push_back(evaluate_partition(data, p, options));
    }
    curve.best_k = select_best(curve.records);
    return curve;
}

IndexCurve select_k(const DataMatrix& data, std::size_t k_max, const PartitionerConfig& partitioner,
                    const SelectOptions& options) {
    const auto partitions = fit_range(data, k_max, partitioner, options.threads);
    return curve_from_partitions(data, partitions, options.median);
}

}  // namespace bwdm
