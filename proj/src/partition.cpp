#include "bwdm/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "bwdm/random.hpp"

namespace bwdm {

Partition::Partition(std::vector<std::size_t> labels, std::size_t k)
    : labels_(std::move(labels)), k_(k) {
    if (k_ < 1) {
        throw std::invalid_argument("partition needs at least one cluster");
    }
    std::vector<bool> occupied(k_, false);
    for (auto l : labels_) {
        if (l >= k_) {
            throw std::invalid_argument("label out of range");
        }
        occupied[l] = true;
    }
    if (std::find(occupied.begin(), occupied.end(), false) != occupied.end()) {
        throw std::invalid_argument("partition has an empty cluster");
    }
}

Partition Partition::from_labels(std::vector<std::size_t> labels) {
    if (labels.empty()) {
        throw std::invalid_argument("empty partition");
    }
    const std::size_t k = *std::max_element(labels.begin(), labels.end()) + 1;
    return Partition(std::move(labels), k);
}

std::vector<std::size_t> Partition::cluster_sizes() const {
    std::vector<std::size_t> sizes(k_, 0);
    for (auto l : labels_) {
        ++sizes[l];
    }
    return sizes;
}

std::vector<std::vector<std::size_t>> Partition::members() const {
    std::vector<std::vector<std::size_t>> m(k_);
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        m[labels_[i]].push_back(i);
    }
    return m;
}

std::vector<std::size_t> canonicalize_labels(std::vector<std::size_t>& labels, std::size_t k) {
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> remap(k, unset);
    std::size_t next = 0;
    for (auto& l : labels) {
        if (remap[l] == unset) {
            remap[l] = next++;
        }
        l = remap[l];
    }
    // Unused labels go last, keeping their relative order.
    for (auto& r : remap) {
        if (r == unset) {
            r = next++;
        }
    }
    return remap;
}

std::string_view method_name(Method method) {
    switch (method) {
        case Method::k_spatial_medians: return "kmedians";
        case Method::k_means: return "kmeans";
        case Method::pam: return "pam";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
    if (name == "kmedians" || name == "k_spatial_medians") return Method::k_spatial_medians;
    if (name == "kmeans" || name == "k_means") return Method::k_means;
    if (name == "pam") return Method::pam;
    return std::nullopt;
}

void PartitionerConfig::validate() const {
    if (n_init < 1) throw std::invalid_argument("n_init must be at least 1");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
}

namespace {

void check_k(const DataMatrix& data, std::size_t k) {
    if (k < 1) {
        throw std::invalid_argument("K must be at least 1");
    }
    if (k > data.rows()) {
        throw std::invalid_argument("K exceeds the number of observations");
    }
}

double point_cost(Method method, std::span<const double> x, std::span<const double> c) {
    return method == Method::k_means ? squared_distance(x, c) : distance(x, c);
}

Point cluster_mean(const DataMatrix& data, const std::vector<std::size_t>& rows) {
    Point m(data.cols(), 0.0);
    for (auto i : rows) {
        auto x = data.row(i);
        for (std::size_t j = 0; j < m.size(); ++j) {
            m[j] += x[j];
        }
    }
    for (auto& v : m) {
        v /= static_cast<double>(rows.size());
    }
    return m;
}

struct LloydRun {
    std::vector<std::size_t> labels;
    std::vector<Point> centers;
    double cost = 0.0;
    std::size_t iterations = 0;
};

LloydRun lloyd(const DataMatrix& data, std::size_t k, const PartitionerConfig& config,
               std::size_t restart) {
    const std::size_t n = data.rows();
    const Method method = config.method;

    // K distinct rows by partial Fisher-Yates.
    auto gen = substream(config.seed, restart);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t c = 0; c < k; ++c) {
        std::swap(order[c], order[c + uniform_index(gen, n - c)]);
    }
    LloydRun run;
    run.centers.reserve(k);
    for (std::size_t c = 0; c < k; ++c) {
        auto r = data.row(order[c]);
        run.centers.emplace_back(r.begin(), r.end());
    }

    constexpr auto unassigned = std::numeric_limits<std::size_t>::max();
    run.labels.assign(n, unassigned);
    std::vector<double> own_cost(n, 0.0);
    double previous_cost = std::numeric_limits<double>::infinity();

    for (std::size_t iter = 0; iter < config.max_iter; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            auto x = data.row(i);
            std::size_t best = 0;
            double best_cost = point_cost(method, x, run.centers[0]);
            for (std::size_t c = 1; c < k; ++c) {
                const double cost = point_cost(method, x, run.centers[c]);
                if (cost < best_cost) {
                    best_cost = cost;
                    best = c;
                }
            }
            if (run.labels[i] != best) {
                run.labels[i] = best;
                changed = true;
            }
            own_cost[i] = best_cost;
        }
        if (!changed) {
            break;
        }
        run.iterations = iter + 1;

        std::vector<std::size_t> sizes(k, 0);
        for (auto l : run.labels) {
            ++sizes[l];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] != 0) {
                continue;
            }
            std::size_t far = unassigned;
            for (std::size_t i = 0; i < n; ++i) {
                if (sizes[run.labels[i]] > 1 && (far == unassigned || own_cost[i] > own_cost[far])) {
                    far = i;
                }
            }
            --sizes[run.labels[far]];
            run.labels[far] = c;
            sizes[c] = 1;
            own_cost[far] = 0.0;
            auto r = data.row(far);
            run.centers[c].assign(r.begin(), r.end());
        }

        std::vector<std::vector<std::size_t>> members(k);
        for (std::size_t i = 0; i < n; ++i) {
            members[run.labels[i]].push_back(i);
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (method == Method::k_means) {
                run.centers[c] = cluster_mean(data, members[c]);
            } else {
                MedianOptions opts;
                opts.tol = config.tol;
                opts.initial = run.centers[c];
                run.centers[c] = spatial_median(data.subset(members[c]), opts).median;
            }
        }

        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cost += point_cost(method, data.row(i), run.centers[run.labels[i]]);
        }
        if (config.check_descent && cost > previous_cost * (1.0 + 1e-10)) {
            throw std::logic_error("clustering cost increased between Lloyd iterations");
        }
        previous_cost = cost;
    }

    run.cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        run.cost += point_cost(method, data.row(i), run.centers[run.labels[i]]);
    }
    return run;
}

FitResult finish(std::vector<std::size_t> labels, std::vector<Point> centers, std::size_t k) {
    const auto remap = canonicalize_labels(labels, k);
    std::vector<Point> ordered(k);
    for (std::size_t c = 0; c < k; ++c) {
        ordered[remap[c]] = std::move(centers[c]);
    }
    FitResult r;
    r.partition = Partition(std::move(labels), k);
    r.centers = std::move(ordered);
    return r;
}

}  // namespace

FitResult fit_clustering(const DataMatrix& data, std::size_t k, const PartitionerConfig& config) {
    check_k(data, k);
    config.validate();
    if (config.method == Method::pam) {
        return pam_clustering(data, k, config);
    }
    std::optional<LloydRun> best;
    for (std::size_t restart = 0; restart < config.n_init; ++restart) {
        LloydRun run = lloyd(data, k, config, restart);
        if (!best || run.cost < best->cost) {
            best = std::move(run);
        }
    }
    FitResult r = finish(std::move(best->labels), std::move(best->centers), k);
    r.cost = best->cost;
    r.iterations = best->iterations;
    return r;
}

Partition fit(const DataMatrix& data, std::size_t k, const PartitionerConfig& config) {
    return fit_clustering(data, k, config).partition;
}

FitResult pam_clustering(const DataMatrix& data, std::size_t k, const PartitionerConfig& config) {
    check_k(data, k);
    const std::size_t n = data.rows();

    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = distance(data.row(i), data.row(j));
            dist[i * n + j] = v;
            dist[j * n + i] = v;
        }
    }
    auto D = [&](std::size_t i, std::size_t j) { return dist[i * n + j]; };

    std::vector<std::size_t> medoids;
    std::vector<bool> is_medoid(n, false);
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());

    // BUILD
    {
        std::size_t first = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += D(i, j);
            if (s < best) {
                best = s;
                first = i;
            }
        }
        medoids.push_back(first);
        is_medoid[first] = true;
        for (std::size_t j = 0; j < n; ++j) nearest[j] = D(first, j);
    }
    while (medoids.size() < k) {
        std::size_t pick = n;
        double best_gain = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (is_medoid[i]) continue;
            double gain = 0.0;
            for (std::size_t j = 0; j < n; ++j) gain += std::max(nearest[j] - D(i, j), 0.0);
            if (gain > best_gain) {
                best_gain = gain;
                pick = i;
            }
        }
        medoids.push_back(pick);
        is_medoid[pick] = true;
        for (std::size_t j = 0; j < n; ++j) nearest[j] = std::min(nearest[j], D(pick, j));
    }

    // SWAP
    std::vector<std::size_t> nearest_pos(n);
    std::vector<double> second(n);
    auto refresh = [&] {
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t pos = 0;
            double d1 = std::numeric_limits<double>::infinity();
            double d2 = std::numeric_limits<double>::infinity();
            for (std::size_t m = 0; m < k; ++m) {
                const double v = D(medoids[m], j);
                if (v < d1) {
                    d2 = d1;
                    d1 = v;
                    pos = m;
                } else if (v < d2) {
                    d2 = v;
                }
            }
            nearest[j] = d1;
            second[j] = d2;
            nearest_pos[j] = pos;
            total += d1;
        }
        return total;
    };

    double cost = refresh();
    std::size_t passes = 0;
    while (passes < config.max_iter * k) {
        double best_delta = 0.0;
        std::size_t best_m = k;
        std::size_t best_h = n;
        for (std::size_t m = 0; m < k; ++m) {
            for (std::size_t h = 0; h < n; ++h) {
                if (is_medoid[h]) continue;
                double delta = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    const double dh = D(h, j);
                    if (nearest_pos[j] == m) {
                        delta += std::min(dh, second[j]) - nearest[j];
                    } else if (dh < nearest[j]) {
                        delta += dh - nearest[j];
                    }
                }
                if (delta < best_delta) {
                    best_delta = delta;
                    best_m = m;
                    best_h = h;
                }
            }
        }
        // Ignore improvements at round-off level so the loop terminates.
        if (best_m == k || best_delta > -1e-12 * std::max(cost, 1.0)) {
            break;
        }
        is_medoid[medoids[best_m]] = false;
        medoids[best_m] = best_h;
        is_medoid[best_h] = true;
        cost = refresh();
        ++passes;
    }

    std::vector<std::size_t> labels(n);
    for (std::size_t j = 0; j < n; ++j) labels[j] = nearest_pos[j];
    // A medoid always belongs to its own cluster, even when it coincides with
    // another medoid.
    for (std::size_t m = 0; m < k; ++m) labels[medoids[m]] = m;

    std::vector<Point> centers;
    for (auto m : medoids) {
        auto r = data.row(m);
        centers.emplace_back(r.begin(), r.end());
    }
    auto remap = canonicalize_labels(labels, k);
    std::vector<Point> ordered(k);
    std::vector<std::size_t> ordered_medoids(k);
    for (std::size_t c = 0; c < k; ++c) {
        ordered[remap[c]] = std::move(centers[c]);
        ordered_medoids[remap[c]] = medoids[c];
    }
    FitResult r;
    r.partition = Partition(std::move(labels), k);
    r.centers = std::move(ordered);
    r.medoids = std::move(ordered_medoids);
    r.cost = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        r.cost += D(r.medoids[r.partition[j]], j);
    }
    r.iterations = passes;
    return r;
}

Partition pam_fit(const DataMatrix& data, std::size_t k, const PartitionerConfig& config) {
    return pam_clustering(data, k, config).partition;
}

}  // namespace bwdm
