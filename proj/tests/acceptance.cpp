// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bwdm/baselines.hpp"
#include "bwdm/index.hpp"
#include "bwdm/io.hpp"
#include "bwdm/synthgen.hpp"
#include "oracles.hpp"

using namespace bwdm;

namespace {

const std::string data_dir = BWDM_DATA_DIR;
const std::string cli_path = BWDM_CLI_PATH;

constexpr int kSeeds = 50;

struct Outcome {
    bool pass;
    std::string detail;
};

bool close_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

struct ScenarioRuns {
    std::map<std::size_t, int> selections;
    std::vector<IndexCurve> curves;
    double seconds = 0.0;
};

ScenarioRuns run_scenario(const std::string& name) {
    ScenarioRuns runs;
    const auto start = std::chrono::steady_clock::now();
    for (int s = 1; s <= kSeeds; ++s) {
        const auto data = generate(*preset(name, 300, static_cast<std::uint64_t>(s))).data;
        PartitionerConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(s);
        auto curve = select_k(data, 10, cfg);
        ++runs.selections[curve.best_k];
        runs.curves.push_back(std::move(curve));
    }
    runs.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return runs;
}

std::string tally(const std::map<std::size_t, int>& selections) {
    std::ostringstream s;
    bool first = true;
    for (const auto& [k, count] : selections) {
        s << (first ? "" : " ") << "K=" << k << ":" << count;
        first = false;
    }
    return s.str();
}

// BWDM at K, read off a curve that starts at K=2.
double at(const IndexCurve& c, std::size_t k) { return c.records[k - 2].bwdm; }

Outcome scenario1() {
    const auto runs = run_scenario("sim1");
    const int hits = runs.selections.count(2) ? runs.selections.at(2) : 0;
    std::vector<double> ratios;
    for (const auto& c : runs.curves) ratios.push_back(at(c, 2) / at(c, 3));
    std::nth_element(ratios.begin(), ratios.begin() + kSeeds / 2, ratios.end());
    const double upper = ratios[kSeeds / 2];
    const double lower = *std::max_element(ratios.begin(), ratios.begin() + kSeeds / 2);
    const double median_ratio = (lower + upper) / 2.0;
    std::ostringstream d;
    d << "scenario 1: " << tally(runs.selections) << ", median BWDM(2)/BWDM(3) = " << median_ratio << ", "
      << runs.seconds << " s";
    return {hits >= 45 && median_ratio > 1.5 && runs.seconds < 10.0, d.str()};
}

Outcome scenario2() {
    const auto runs = run_scenario("sim2");
    std::size_t modal = 0;
    int modal_count = -1;
    for (const auto& [k, count] : runs.selections) {
        if (count > modal_count) {
            modal = k;
            modal_count = count;
        }
    }
    int three_beats_two = 0;
    for (const auto& c : runs.curves) three_beats_two += at(c, 3) > at(c, 2);
    std::ostringstream d;
    d << "scenario 2: " << tally(runs.selections) << ", BWDM(3) > BWDM(2) in " << three_beats_two << "/" << kSeeds;
    return {modal == 3 && 2 * three_beats_two > kSeeds, d.str()};
}

Outcome scenario3() {
    const auto runs = run_scenario("sim3");
    const int hits = runs.selections.count(4) ? runs.selections.at(4) : 0;
    std::ostringstream d;
    d << "scenario 3: " << tally(runs.selections);
    return {hits >= 40, d.str()};
}

Outcome faithful() {
    const auto data = load_csv(data_dir + "/faithful.csv", true);
    const auto curve = select_k(data, 10, PartitionerConfig{});
    bool dominant = true;
    for (std::size_t k = 3; k <= 10; ++k) dominant = dominant && at(curve, 2) > at(curve, k);
    std::ostringstream d;
    d << "Old Faithful: best K = " << curve.best_k << ", BWDM(2) = " << at(curve, 2);
    return {curve.best_k == 2 && dominant, d.str()};
}

Outcome iris() {
    const auto data = load_csv(data_dir + "/iris.csv", true, {"species"});
    const auto curve = select_k(data, 10, PartitionerConfig{});
    std::ostringstream d;
    d << "iris: best K = " << curve.best_k << ", BWDM(2) = " << at(curve, 2);
    return {curve.best_k == 2, d.str()};
}

Outcome median_oracle() {
    std::mt19937_64 gen(20240601);
    std::uniform_int_distribution<std::size_t> pick_n(1, 15), pick_d(1, 3);
    std::normal_distribution<double> z(0.0, 2.0);
    double worst = 0.0;
    bool descent_ok = true;
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = pick_n(gen), d = pick_d(gen);
        oracle::Rows rows(n, oracle::Vec(d));
        for (auto& r : rows)
            for (auto& v : r) v = z(gen);
        if (t % 5 == 0 && n > 2) rows[1] = rows[0];  // some instances carry a repeated point
        MedianOptions opts;
        opts.check_descent = true;
        try {
            const auto res = spatial_median(DataMatrix::from_rows(rows), opts);
            worst = std::max(worst, std::abs(res.objective - oracle::min_sum_dist(rows)));
        } catch (const std::logic_error&) {
            descent_ok = false;
        }
    }
    std::ostringstream d;
    d << "spatial median vs derivative-free minimizer: max |diff| = " << worst
      << (descent_ok ? "" : ", descent assertion fired");
    return {descent_ok && worst <= 1e-5, d.str()};
}

Outcome similarity() {
    std::mt19937_64 gen(777);
    std::normal_distribution<double> z(0.0, 1.0);
    std::uniform_real_distribution<double> scale(0.1, 10.0), shift(-100.0, 100.0);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        const std::size_t n = 20 + 5 * t, d = 2 + t % 3, k = 2 + t % 4;
        oracle::Rows rows(n, oracle::Vec(d));
        std::vector<std::size_t> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            labels[i] = i % k;
            for (std::size_t j = 0; j < d; ++j) rows[i][j] = z(gen) + 3.0 * static_cast<double>(labels[i] + j);
        }
        const double c = scale(gen);
        const Eigen::MatrixXd q = oracle::random_orthogonal(d, gen);
        Eigen::VectorXd b(static_cast<Eigen::Index>(d));
        for (auto& v : b) v = shift(gen);
        oracle::Rows moved;
        for (const auto& r : rows) {
            const Eigen::VectorXd y =
                c * (q * Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(d))) + b;
            moved.emplace_back(y.data(), y.data() + y.size());
        }
        const Partition p(labels, k);
        const auto x = DataMatrix::from_rows(rows);
        const auto y = DataMatrix::from_rows(moved);
        const double b0 = evaluate_partition(x, p).bwdm, b1 = evaluate_partition(y, p).bwdm;
        const double c0 = ch_index(x, p), c1 = ch_index(y, p);
        worst = std::max({worst, std::abs(b0 - b1) / std::abs(b0), std::abs(c0 - c1) / std::abs(c0)});
    }
    std::ostringstream d;
    d << "similarity invariance of BWDM and CH: max relative change = " << worst;
    return {worst <= 1e-8, d.str()};
}

Outcome hand_values() {
    constexpr double rel = 1e-12;
    std::vector<std::string> failed;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) failed.push_back(what);
    };

    const auto square = DataMatrix::from_rows({{0, 0}, {2, 0}, {0, 2}, {2, 2}});
    const auto s1 = summarize(square, Partition({0, 0, 0, 0}, 1));
    expect(s1.sizes == std::vector<std::size_t>{4} && s1.medians == std::vector<Point>{{1, 1}}, "square summary");
    const auto pair = DataMatrix::from_rows({{0, 0}, {3, 4}});
    const auto s2 = summarize(pair, Partition({0, 1}, 2));
    expect(s2.medians == std::vector<Point>{{0, 0}, {3, 4}}, "singleton medians");

    auto medians = [](std::vector<Point> m) {
        ClusterSummary s;
        s.sizes.assign(m.size(), 1);
        s.medians = std::move(m);
        return s;
    };
    expect(abdm(medians({{0, 0}, {3, 4}})) == 5.0, "abdm single pair");
    expect(close_rel(abdm(medians({{0, 0}, {1, 0}, {0, 1}})), (2.0 + std::sqrt(2.0)) / 3.0, rel), "abdm three");
    expect(close_rel(abdm(medians({{0, 0}, {1, 0}, {0, 1}, {1, 1}})), (4.0 + 2.0 * std::sqrt(2.0)) / 6.0, rel),
           "abdm unit square");

    const auto line = DataMatrix::from_rows({{-1, 0}, {1, 0}});
    const Partition one({0, 0}, 1);
    expect(awdm(line, one, summarize(line, one)) == 1.0, "awdm one cluster");
    const auto coincide = DataMatrix::from_rows({{2, 2}, {2, 2}, {5, 1}});
    const Partition cp({0, 0, 1}, 2);
    expect(awdm(coincide, cp, summarize(coincide, cp)) == 0.0, "awdm degenerate");

    const auto squares = DataMatrix::from_rows({{0, 0}, {2, 0}, {0, 2}, {2, 2}, {10, 0}, {12, 0}, {10, 2}, {12, 2}});
    const Partition split({0, 0, 0, 0, 1, 1, 1, 1}, 2);
    const auto ss = summarize(squares, split);
    expect(abdm(ss) == 10.0, "two-square abdm");
    expect(close_rel(awdm(squares, split, ss), std::sqrt(2.0), rel), "two-square awdm");

    expect(bwdm::bwdm(5.0, 1.0, 2, 10) == 40.0, "bwdm arithmetic");
    expect(close_rel(evaluate_partition(squares, split).bwdm, 60.0 / std::sqrt(2.0), rel), "two-square bwdm");
    for (double c : {1e-3, 0.5, 7.0, 1e4}) expect(close_rel(bwdm::bwdm(5.0 * c, c, 2, 10), 40.0, rel), "bwdm scale");

    const auto ch_data = DataMatrix::from_rows({{-1, 0}, {1, 0}, {9, 0}, {11, 0}});
    expect(ch_index(ch_data, Partition({0, 0, 1, 1}, 2)) == 50.0, "CH = 50");

    for (std::size_t i = 2; i <= 10; ++i) {
        expect(pair_count(i) - pair_count(i - 1) == i - 1, "pair identity at " + std::to_string(i));
    }

    std::ostringstream d;
    d << "hand values: " << (failed.empty() ? "all reproduced" : "mismatch in");
    for (const auto& f : failed) d << " [" << f << "]";
    return {failed.empty(), d.str()};
}

Outcome robustness() {
    std::mt19937_64 gen(9);
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<Point> cloud(9, Point(2));
    for (auto& p : cloud)
        for (auto& v : p) v = z(gen);
    double diameter = 0.0;
    for (const auto& a : cloud)
        for (const auto& b : cloud) diameter = std::max(diameter, distance(a, b));

    const auto clean = DataMatrix::from_rows(cloud);
    const Point mean0 = column_means(clean);
    auto dirty_rows = cloud;
    dirty_rows.push_back({mean0[0] + 1e6, mean0[1]});
    const auto dirty = DataMatrix::from_rows(dirty_rows);

    const double median_shift = distance(spatial_median(clean).median, spatial_median(dirty).median);
    const double mean_shift = distance(mean0, column_means(dirty));
    std::ostringstream d;
    d << "outlier at 1e6: median moves " << median_shift << ", mean moves " << mean_shift << ", diameter "
      << diameter;
    return {median_shift < diameter && mean_shift > 10.0 * diameter, d.str()};
}

bool capture(const std::string& command, std::string& output) {
    FILE* pipe = popen(command.c_str(), "r");
    if (pipe == nullptr) return false;
    std::array<char, 4096> buf{};
    output.clear();
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), got);
    return pclose(pipe) == 0;
}

Outcome determinism() {
    const std::vector<std::string> invocations{
        "estimate --preset sim1 --seed 42",
        "estimate --input " + data_dir + "/faithful.csv --indices ch,silhouette",
        "compare --preset sim3 --seed 7",
        "curve --preset sim2 --seed 3",
        "simulate --preset sim3 --n 200 --seed 11",
    };
    std::vector<std::string> differing;
    for (const auto& args : invocations) {
        const std::string cmd = "'" + cli_path + "' " + args + " 2>/dev/null";
        std::string a, b;
        const bool ok = capture(cmd, a) && capture(cmd, b);
        if (!ok || a.empty() || a != b) differing.push_back(args);
    }
    std::ostringstream d;
    d << "CLI determinism: " << invocations.size() - differing.size() << "/" << invocations.size()
      << " invocations byte-identical";
    for (const auto& f : differing) d << " [differs: " << f << "]";
    return {differing.empty(), d.str()};
}

}  // namespace

int main() {
    const std::vector<std::function<Outcome()>> criteria{scenario1,     scenario2,  scenario3,   faithful,
                                                         iris,          median_oracle, similarity, hand_values,
                                                         robustness,    determinism};
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << o.detail << std::endl;
    }
    std::cout << criteria.size() - static_cast<std::size_t>(failures) << "/" << criteria.size()
              << " criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
