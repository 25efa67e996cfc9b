#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "bwdm/geometry.hpp"

namespace bwdm {

/// Gaussian mixture with a shared covariance.
struct ScenarioConfig {
    std::vector<double> weights;
    std::vector<Point> means;
    Eigen::MatrixXd covariance;  // empty means identity
    std::size_t n = 300;
    std::uint64_t seed = 42;

    std::size_t dim() const { return means.empty() ? 0 : means.front().size(); }
    void validate() const;
};

struct LabeledSample {
    DataMatrix data;
    std::vector<std::size_t> labels;
};

/// Draws n observations. Observation i uses its own substream of the seed: a
/// uniform picks the component, then N(mean, covariance) is drawn as
/// mean + L z with L the Cholesky factor and z standard normal. The sample is
/// therefore independent of generation order.
LabeledSample generate(const ScenarioConfig& config);

/// Built-in scenarios, each with identity covariance:
///   sim1: weights 0.7/0.3, means (0,0) (5,5)
///   sim2: weights 0.3/0.3/0.4, means (0,0) (5,5) (10,10)
///   sim3: equal weights, means (0,0) (4,4) (-4,4) (0,8)
/// In sim3, (4,4) and (0,8) are a reconstruction: they complete a partially
/// specified layout as a symmetric diamond.
std::optional<ScenarioConfig> preset(std::string_view name, std::size_t n = 300,
                                     std::uint64_t seed = 42);

}  // namespace bwdm
