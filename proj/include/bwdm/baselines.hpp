#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "bwdm/geometry.hpp"
#include "bwdm/partition.hpp"

namespace bwdm {

enum class Baseline { ch, silhouette };

std::string_view baseline_name(Baseline b);
std::optional<Baseline> parse_baseline(std::string_view name);

struct BaselineRecord {
    std::size_t k = 0;
    double value = 0.0;
    Baseline index = Baseline::ch;
};

/// Calinski-Harabasz variance ratio [B/(K-1)] / [W/(n-K)] with B the
/// size-weighted squared spread of cluster means around the grand mean and W
/// the within-cluster sum of squares. Requires 2 <= K < n. Returns +infinity
/// when W is zero.
double ch_index(const DataMatrix& data, const Partition& partition);

/// Mean silhouette (b - a) / max(a, b) over all observations, with s = 0 for
/// members of singleton clusters. Requires 2 <= K <= n - 1.
double silhouette_width(const DataMatrix& data, const Partition& partition);

}  // namespace bwdm
