#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the library code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Vec = std::vector<double>;
using Rows = std::vector<Vec>;

inline double dist(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
    return std::sqrt(s);
}

inline double sum_dist(const Rows& x, const Vec& y) {
    double f = 0.0;
    for (const auto& r : x) f += dist(r, y);
    return f;
}

/// Nelder-Mead on f starting at x0, restarted from the incumbent with a
/// shrinking simplex until restarts stop improving.
inline Vec nelder_mead(const std::function<double(const Vec&)>& f, Vec x0, double step) {
    const std::size_t d = x0.size();
    Vec best = x0;
    double best_f = f(best);
    for (int restart = 0; restart < 40; ++restart) {
        std::vector<Vec> s(d + 1, best);
        for (std::size_t j = 0; j < d; ++j) s[j + 1][j] += step;
        std::vector<double> fs(d + 1);
        for (std::size_t i = 0; i <= d; ++i) fs[i] = f(s[i]);
        for (int it = 0; it < 5000; ++it) {
            std::vector<std::size_t> idx(d + 1);
            for (std::size_t i = 0; i <= d; ++i) idx[i] = i;
            std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return fs[a] < fs[b]; });
            std::vector<Vec> s2;
            std::vector<double> f2;
            for (auto i : idx) {
                s2.push_back(s[i]);
                f2.push_back(fs[i]);
            }
            s = s2;
            fs = f2;
            if (fs[d] - fs[0] < 1e-15 && dist(s[d], s[0]) < 1e-12) break;
            Vec c(d, 0.0);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) c[j] += s[i][j] / static_cast<double>(d);
            auto along = [&](double t) {
                Vec p(d);
                for (std::size_t j = 0; j < d; ++j) p[j] = c[j] + t * (s[d][j] - c[j]);
                return p;
            };
            Vec xr = along(-1.0);
            double fr = f(xr);
            if (fr < fs[0]) {
                Vec xe = along(-2.0);
                double fe = f(xe);
                if (fe < fr) {
                    s[d] = xe;
                    fs[d] = fe;
                } else {
                    s[d] = xr;
                    fs[d] = fr;
                }
            } else if (fr < fs[d - 1]) {
                s[d] = xr;
                fs[d] = fr;
            } else {
                Vec xc = fr < fs[d] ? along(-0.5) : along(0.5);
                double fc = f(xc);
                if (fc < std::min(fr, fs[d])) {
                    s[d] = xc;
                    fs[d] = fc;
                } else {
                    for (std::size_t i = 1; i <= d; ++i) {
                        for (std::size_t j = 0; j < d; ++j) s[i][j] = s[0][j] + 0.5 * (s[i][j] - s[0][j]);
                        fs[i] = f(s[i]);
                    }
                }
            }
        }
        const std::size_t arg = static_cast<std::size_t>(std::min_element(fs.begin(), fs.end()) - fs.begin());
        const bool improved = fs[arg] < best_f - 1e-14;
        if (fs[arg] < best_f) {
            best_f = fs[arg];
            best = s[arg];
        }
        step *= improved ? 0.5 : 0.1;
        if (step < 1e-12) break;
    }
    return best;
}

/// Minimum of sum ||y - x_i||: Nelder-Mead from the mean and from every data
/// point, best result kept.
inline double min_sum_dist(const Rows& x) {
    auto f = [&](const Vec& y) { return sum_dist(x, y); };
    const std::size_t d = x.front().size();
    Vec mean(d, 0.0);
    for (const auto& r : x)
        for (std::size_t j = 0; j < d; ++j) mean[j] += r[j] / static_cast<double>(x.size());
    double scale = 0.0;
    for (const auto& r : x) scale = std::max(scale, dist(r, mean));
    double best = f(nelder_mead(f, mean, std::max(scale, 1e-3)));
    for (const auto& r : x) best = std::min(best, f(nelder_mead(f, r, std::max(scale, 1e-3) * 0.5)));
    return best;
}

inline Eigen::MatrixXd random_orthogonal(std::size_t d, std::mt19937_64& gen) {
    std::normal_distribution<double> z;
    Eigen::MatrixXd a(d, d);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = z(gen);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ();
    return q;
}

/// Silhouette by the textbook double loop.
inline double silhouette(const Rows& x, const std::vector<std::size_t>& labels) {
    const std::size_t n = x.size();
    std::size_t k = 0;
    for (auto l : labels) k = std::max(k, l + 1);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> sum(k, 0.0);
        std::vector<double> cnt(k, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            sum[labels[j]] += dist(x[i], x[j]);
            cnt[labels[j]] += 1.0;
        }
        if (cnt[labels[i]] == 0.0) continue;
        const double a = sum[labels[i]] / cnt[labels[i]];
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c)
            if (c != labels[i]) b = std::min(b, sum[c] / cnt[c]);
        total += (b - a) / std::max(a, b);
    }
    return total / static_cast<double>(n);
}

/// Calinski-Harabasz straight from the two sums of squares.
inline double calinski_harabasz(const Rows& x, const std::vector<std::size_t>& labels) {
    const std::size_t n = x.size();
    const std::size_t d = x.front().size();
    std::size_t k = 0;
    for (auto l : labels) k = std::max(k, l + 1);
    Vec grand(d, 0.0);
    std::vector<Vec> mean(k, Vec(d, 0.0));
    std::vector<double> cnt(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        cnt[labels[i]] += 1.0;
        for (std::size_t j = 0; j < d; ++j) {
            grand[j] += x[i][j] / static_cast<double>(n);
            mean[labels[i]][j] += x[i][j];
        }
    }
    for (std::size_t c = 0; c < k; ++c)
        for (auto& v : mean[c]) v /= cnt[c];
    double b = 0.0, w = 0.0;
    for (std::size_t c = 0; c < k; ++c) b += cnt[c] * std::pow(dist(mean[c], grand), 2);
    for (std::size_t i = 0; i < n; ++i) w += std::pow(dist(x[i], mean[labels[i]]), 2);
    return (b / static_cast<double>(k - 1)) / (w / static_cast<double>(n - k));
}

}  // namespace oracle
