#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bwdm/baselines.hpp"
#include "bwdm/index.hpp"
#include "bwdm/io.hpp"
#include "bwdm/partition.hpp"
#include "bwdm/synthgen.hpp"

namespace bwdm::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DataOptions {
    std::string input;
    std::string preset;
    std::size_t n = 300;
    std::uint64_t seed = 42;
    bool standardize = false;
    std::vector<std::string> drop;
};

struct FitOptions {
    std::size_t kmax = 10;
    std::string partitioner = "kmedians";
    std::size_t n_init = 10;
    std::size_t max_iter = 100;
};

struct OutputOptions {
    std::string format;
    std::string out;
};

struct Dataset {
    DataMatrix data;
    std::string id;
};

void add_data_options(CLI::App* cmd, DataOptions& o) {
    auto* input = cmd->add_option("--input", o.input, "CSV file with one observation per row");
    auto* preset = cmd->add_option("--preset", o.preset, "Simulated scenario")
                       ->check(CLI::IsMember({"sim1", "sim2", "sim3"}));
    input->excludes(preset);
    cmd->add_option("--n", o.n, "Sample size for --preset")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "Seed for simulation and partitioner restarts");
    cmd->add_flag("--standardize", o.standardize, "Z-score every column before clustering");
    cmd->add_option("--drop", o.drop, "Columns to remove by header name")->delimiter(',');
}

void add_fit_options(CLI::App* cmd, FitOptions& o) {
    cmd->add_option("--kmax", o.kmax, "Largest number of clusters tried")->check(CLI::Range(2, 1 << 20));
    cmd->add_option("--partitioner", o.partitioner, "Base clusterer")
        ->check(CLI::IsMember({"kmedians", "kmeans", "pam"}));
    cmd->add_option("--n-init", o.n_init, "Random restarts per K")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", o.max_iter, "Iteration cap per restart")->check(CLI::PositiveNumber);
}

void add_output_options(CLI::App* cmd, OutputOptions& o, const std::string& default_format) {
    o.format = default_format;
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", o.out, "Write output to this file instead of stdout");
}

Dataset load_dataset(const DataOptions& o) {
    if (o.input.empty() == o.preset.empty()) {
        throw UsageError("exactly one of --input or --preset is required");
    }
    Dataset ds;
    if (!o.preset.empty()) {
        if (!o.drop.empty()) {
            throw UsageError("--drop applies to --input only");
        }
        ds.data = generate(*preset(o.preset, o.n, o.seed)).data;
        ds.id = o.preset + " (n=" + std::to_string(o.n) + ", seed=" + std::to_string(o.seed) + ")";
    } else {
        ds.data = load_csv(o.input, csv_has_header(o.input), o.drop);
        ds.id = o.input;
    }
    if (o.standardize) {
        ds.data = standardize_columns(ds.data);
    }
    return ds;
}

PartitionerConfig make_config(const FitOptions& f, const DataOptions& d) {
    PartitionerConfig c;
    c.method = *parse_method(f.partitioner);
    c.n_init = f.n_init;
    c.max_iter = f.max_iter;
    c.seed = d.seed;
    return c;
}

void check_kmax(const Dataset& ds, std::size_t kmax) {
    if (kmax >= ds.data.rows()) {
        throw DataError("--kmax " + std::to_string(kmax) + " must be smaller than the number of observations (" +
                        std::to_string(ds.data.rows()) + ")");
    }
}

std::vector<std::string> parse_indices(const std::vector<std::string>& raw) {
    std::vector<std::string> out;
    for (const auto& name : raw) {
        if (name.empty()) continue;
        if (name != "bwdm" && !parse_baseline(name)) {
            throw UsageError("unknown index '" + name + "' (expected bwdm, ch or silhouette)");
        }
        if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    }
    return out;
}

json config_json(const PartitionerConfig& c) {
    return {{"method", method_name(c.method)},
            {"n_init", c.n_init},
            {"max_iter", c.max_iter},
            {"seed", c.seed},
            {"tol", c.tol}};
}

// JSON has no infinity; degenerate records carry null.
json number_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

double baseline_value(Baseline b, const DataMatrix& data, const Partition& p) {
    return b == Baseline::ch ? ch_index(data, p) : silhouette_width(data, p);
}

std::size_t argmax_k(const std::vector<BaselineRecord>& records) {
    const BaselineRecord* best = nullptr;
    for (const auto& r : records) {
        if (best == nullptr || r.value > best->value) best = &r;
    }
    return best->k;
}

class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) {
                throw DataError("cannot write '" + path + "'");
            }
            stream_ = file_.get();
        }
    }
    std::ostream& get() { return *stream_; }
    void finish() {
        stream_->flush();
        if (!*stream_) throw DataError("write failed");
    }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

struct Baselines {
    std::vector<BaselineRecord> records;  // ordered by K, then requested index order
};

Baselines compute_baselines(const DataMatrix& data, const std::vector<Partition>& partitions,
                            const std::vector<std::string>& indices,
                            const std::vector<Partition>* silhouette_partitions) {
    Baselines out;
    for (std::size_t t = 0; t < partitions.size(); ++t) {
        for (const auto& name : indices) {
            auto b = parse_baseline(name);
            if (!b) continue;
            const Partition& p = (*b == Baseline::silhouette && silhouette_partitions != nullptr)
                                     ? (*silhouette_partitions)[t]
                                     : partitions[t];
            out.records.push_back({partitions[t].k(), baseline_value(*b, data, p), *b});
        }
    }
    return out;
}

int cmd_estimate(const DataOptions& d, const FitOptions& f, const OutputOptions& o,
                 const std::vector<std::string>& raw_indices, bool timing, std::ostream& out,
                 std::ostream& err) {
    const auto indices = parse_indices(raw_indices);
    const auto start = std::chrono::steady_clock::now();
    const Dataset ds = load_dataset(d);
    check_kmax(ds, f.kmax);
    const PartitionerConfig config = make_config(f, d);
    const auto partitions = fit_range(ds.data, f.kmax, config);
    const IndexCurve curve = curve_from_partitions(ds.data, partitions);
    const Baselines baselines = compute_baselines(ds.data, partitions, indices, nullptr);
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);

    Sink sink(o.out, out);
    auto& s = sink.get();
    if (o.format == "json") {
        json records = json::array();
        for (const auto& r : curve.records) {
            records.push_back({{"k", r.k},
                               {"abdm", r.abdm},
                               {"awdm", r.awdm},
                               {"bwdm", number_or_null(r.bwdm)},
                               {"degenerate", r.degenerate}});
        }
        json report = {{"dataset_id", ds.id},
                       {"n", ds.data.rows()},
                       {"d", ds.data.cols()},
                       {"standardized", d.standardize},
                       {"k_max", f.kmax},
                       {"partitioner", config_json(config)},
                       {"curve", {{"n", curve.n}, {"best_k", curve.best_k}, {"records", records}}}};
        if (!baselines.records.empty()) {
            json b = json::array();
            for (const auto& r : baselines.records) {
                b.push_back({{"k", r.k}, {"index", baseline_name(r.index)}, {"value", number_or_null(r.value)}});
            }
            report["baselines"] = b;
        }
        if (timing) {
            report["wall_time_ms"] = elapsed.count();
        }
        s << report.dump(2) << '\n';
    } else {
        s << "K,ABDM,AWDM,BWDM\n";
        for (const auto& r : curve.records) {
            s << r.k << ',' << format_sig(r.abdm) << ',' << format_sig(r.awdm) << ',' << format_sig(r.bwdm)
              << '\n';
        }
    }
    sink.finish();
    err << "estimated number of clusters: " << curve.best_k << " (K searched over 2.." << f.kmax
        << "; BWDM cannot test the one-cluster hypothesis)\n";
    if (timing) {
        err << "wall time: " << elapsed.count() << " ms\n";
    }
    return ok;
}

int cmd_compare(const DataOptions& d, const FitOptions& f, const OutputOptions& o,
                const std::vector<std::string>& raw_indices, bool silhouette_pam, std::ostream& out,
                std::ostream& err) {
    const auto indices = parse_indices(raw_indices);
    if (indices.empty()) {
        throw UsageError("--indices must name at least one of bwdm, ch, silhouette");
    }
    const Dataset ds = load_dataset(d);
    check_kmax(ds, f.kmax);
    const PartitionerConfig config = make_config(f, d);
    const auto partitions = fit_range(ds.data, f.kmax, config);

    std::vector<Partition> pam_partitions;
    const bool need_pam = silhouette_pam && config.method != Method::pam &&
                          std::find(indices.begin(), indices.end(), "silhouette") != indices.end();
    if (need_pam) {
        PartitionerConfig pam = config;
        pam.method = Method::pam;
        pam_partitions = fit_range(ds.data, f.kmax, pam);
    }

    std::optional<IndexCurve> curve;
    if (std::find(indices.begin(), indices.end(), "bwdm") != indices.end()) {
        curve = curve_from_partitions(ds.data, partitions);
    }
    const Baselines baselines =
        compute_baselines(ds.data, partitions, indices, need_pam ? &pam_partitions : nullptr);

    struct Row {
        std::size_t k;
        std::string index;
        double value;
    };
    std::vector<Row> rows;
    std::size_t b = 0;
    for (std::size_t t = 0; t < partitions.size(); ++t) {
        for (const auto& name : indices) {
            if (name == "bwdm") {
                rows.push_back({t + 2, name, curve->records[t].bwdm});
            } else {
                rows.push_back({t + 2, name, baselines.records[b++].value});
            }
        }
    }
    std::vector<std::pair<std::string, std::size_t>> best;
    for (const auto& name : indices) {
        if (name == "bwdm") {
            best.emplace_back(name, curve->best_k);
        } else {
            std::vector<BaselineRecord> only;
            for (const auto& r : baselines.records) {
                if (baseline_name(r.index) == name) only.push_back(r);
            }
            best.emplace_back(name, argmax_k(only));
        }
    }

    Sink sink(o.out, out);
    auto& s = sink.get();
    if (o.format == "json") {
        json jrows = json::array();
        for (const auto& r : rows) {
            jrows.push_back({{"k", r.k}, {"index", r.index}, {"value", number_or_null(r.value)}});
        }
        json jbest = json::object();
        for (const auto& [name, k] : best) jbest[name] = k;
        json report = {{"dataset_id", ds.id},
                       {"n", ds.data.rows()},
                       {"k_max", f.kmax},
                       {"partitioner", config_json(config)},
                       {"silhouette_partitioner", need_pam ? "pam" : method_name(config.method)},
                       {"rows", jrows},
                       {"best_k", jbest}};
        s << report.dump(2) << '\n';
    } else {
        s << "K,index,value\n";
        for (const auto& r : rows) {
            s << r.k << ',' << r.index << ',' << format_sig(r.value) << '\n';
        }
    }
    sink.finish();
    for (const auto& [name, k] : best) {
        err << name << ": best K = " << k << '\n';
    }
    return ok;
}

int cmd_curve(const DataOptions& d, const FitOptions& f, const std::string& out_path, std::ostream& out,
              std::ostream& err) {
    const Dataset ds = load_dataset(d);
    check_kmax(ds, f.kmax);
    const IndexCurve curve = select_k(ds.data, f.kmax, make_config(f, d));
    Sink sink(out_path, out);
    auto& s = sink.get();
    s << "K,BWDM\n";
    for (const auto& r : curve.records) {
        s << r.k << ',' << format_sig(r.bwdm) << '\n';
    }
    sink.finish();
    err << "maximum at K = " << curve.best_k << '\n';
    return ok;
}

int cmd_simulate(const DataOptions& d, const std::string& out_path, std::ostream& out) {
    if (d.preset.empty()) {
        throw UsageError("simulate requires --preset");
    }
    const LabeledSample sample = generate(*preset(d.preset, d.n, d.seed));
    Sink sink(out_path, out);
    write_labeled_csv(sink.get(), sample);
    sink.finish();
    return ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Estimate the number of clusters with the BWDM stopping rule"};
    app.name("bwdm");
    app.require_subcommand(1);

    DataOptions est_data, cmp_data, crv_data, sim_data;
    FitOptions est_fit, cmp_fit, crv_fit;
    OutputOptions est_out, cmp_out;
    std::string crv_out, sim_out;
    std::vector<std::string> est_indices;
    std::vector<std::string> cmp_indices{"bwdm", "ch", "silhouette"};
    bool timing = false;
    bool silhouette_pam = false;

    auto* estimate = app.add_subcommand("estimate", "Select K by maximizing BWDM and emit a run report");
    add_data_options(estimate, est_data);
    add_fit_options(estimate, est_fit);
    add_output_options(estimate, est_out, "json");
    estimate->add_option("--indices", est_indices, "Baselines to add to the report (ch, silhouette)")
        ->delimiter(',');
    estimate->add_flag("--timing", timing, "Include wall time in the report");

    auto* compare = app.add_subcommand("compare", "Tabulate BWDM and baseline indices per K");
    add_data_options(compare, cmp_data);
    add_fit_options(compare, cmp_fit);
    add_output_options(compare, cmp_out, "csv");
    compare->add_option("--indices", cmp_indices, "Comma-separated subset of bwdm,ch,silhouette")
        ->delimiter(',');
    compare->add_flag("--silhouette-pam", silhouette_pam, "Score silhouette on PAM partitions");

    auto* curve = app.add_subcommand("curve", "Emit the (K, BWDM) curve as CSV");
    add_data_options(curve, crv_data);
    add_fit_options(curve, crv_fit);
    curve->add_option("--out", crv_out, "Write output to this file instead of stdout");

    auto* simulate = app.add_subcommand("simulate", "Write a simulated scenario as CSV with a label column");
    simulate->add_option("--preset", sim_data.preset, "Scenario")
        ->required()
        ->check(CLI::IsMember({"sim1", "sim2", "sim3"}));
    simulate->add_option("--n", sim_data.n, "Sample size")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim_data.seed, "Random seed");
    simulate->add_option("--out", sim_out, "Write output to this file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e, out, err);
        }
        app.exit(e, err, err);
        return usage_error;
    }

    try {
        if (*estimate) return cmd_estimate(est_data, est_fit, est_out, est_indices, timing, out, err);
        if (*compare) return cmd_compare(cmp_data, cmp_fit, cmp_out, cmp_indices, silhouette_pam, out, err);
        if (*curve) return cmd_curve(crv_data, crv_fit, crv_out, out, err);
        if (*simulate) return cmd_simulate(sim_data, sim_out, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return data_error;
    }
    return usage_error;
}

}  // namespace bwdm::cli
