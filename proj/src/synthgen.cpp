#include "bwdm/synthgen.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "bwdm/random.hpp"

namespace bwdm {

namespace {

Eigen::MatrixXd effective_covariance(const ScenarioConfig& config) {
    const auto d = static_cast<Eigen::Index>(config.dim());
    if (config.covariance.size() == 0) {
        return Eigen::MatrixXd::Identity(d, d);
    }
    return config.covariance;
}

}  // namespace

void ScenarioConfig::validate() const {
    if (weights.empty() || weights.size() != means.size()) {
        throw std::invalid_argument("weights and means must be non-empty and of equal length");
    }
    for (double w : weights) {
        if (!(w > 0.0 && w <= 1.0)) {
            throw std::invalid_argument("mixture weights must lie in (0, 1]");
        }
    }
    if (std::abs(std::accumulate(weights.begin(), weights.end(), 0.0) - 1.0) > 1e-9) {
        throw std::invalid_argument("mixture weights must sum to 1");
    }
    const std::size_t d = dim();
    if (d == 0) {
        throw std::invalid_argument("means must have at least one coordinate");
    }
    for (const auto& m : means) {
        if (m.size() != d) {
            throw std::invalid_argument("means have differing dimensions");
        }
        for (double v : m) {
            if (!std::isfinite(v)) throw std::invalid_argument("non-finite mean");
        }
    }
    if (n < 1) {
        throw std::invalid_argument("sample size must be at least 1");
    }
    if (covariance.size() != 0) {
        const auto dd = static_cast<Eigen::Index>(d);
        if (covariance.rows() != dd || covariance.cols() != dd) {
            throw std::invalid_argument("covariance has the wrong shape");
        }
        if (!covariance.allFinite() ||
            (covariance - covariance.transpose()).cwiseAbs().maxCoeff() >
                1e-12 * std::max(1.0, covariance.cwiseAbs().maxCoeff())) {
            throw std::invalid_argument("covariance must be symmetric");
        }
        Eigen::LLT<Eigen::MatrixXd> llt(covariance);
        if (llt.info() != Eigen::Success) {
            throw std::invalid_argument("covariance is not positive definite");
        }
    }
}

LabeledSample generate(const ScenarioConfig& config) {
    config.validate();
    const std::size_t d = config.dim();
    const Eigen::MatrixXd L = Eigen::LLT<Eigen::MatrixXd>(effective_covariance(config)).matrixL();

    std::vector<double> cumulative(config.weights.size());
    std::partial_sum(config.weights.begin(), config.weights.end(), cumulative.begin());

    std::vector<double> values(config.n * d);
    std::vector<std::size_t> labels(config.n);
    Eigen::VectorXd z(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < config.n; ++i) {
        auto gen = substream(config.seed, i);
        const double u = uniform01(gen);
        std::size_t c = 0;
        while (c + 1 < cumulative.size() && u >= cumulative[c]) {
            ++c;
        }
        for (Eigen::Index j = 0; j < z.size(); ++j) {
            z[j] = standard_normal(gen);
        }
        const Eigen::VectorXd offset = L * z;
        for (std::size_t j = 0; j < d; ++j) {
            values[i * d + j] = config.means[c][j] + offset[static_cast<Eigen::Index>(j)];
        }
        labels[i] = c;
    }
    return {DataMatrix(config.n, d, std::move(values)), std::move(labels)};
}

std::optional<ScenarioConfig> preset(std::string_view name, std::size_t n, std::uint64_t seed) {
    ScenarioConfig c;
    c.n = n;
    c.seed = seed;
    if (name == "sim1") {
        c.weights = {0.7, 0.3};
        c.means = {{0.0, 0.0}, {5.0, 5.0}};
    } else if (name == "sim2") {
        c.weights = {0.3, 0.3, 0.4};
        c.means = {{0.0, 0.0}, {5.0, 5.0}, {10.0, 10.0}};
    } else if (name == "sim3") {
        c.weights = {0.25, 0.25, 0.25, 0.25};
        c.means = {{0.0, 0.0}, {4.0, 4.0}, {-4.0, 4.0}, {0.0, 8.0}};
    } else {
        return std::nullopt;
    }
    c.covariance = Eigen::MatrixXd::Identity(2, 2);
    return c;
}

}  // namespace bwdm
