// Command-line experiment runner: `run`, `inspect`, `tune`, `project`,
// `synth`. Exit codes: 0 success, 2 config/parse error, 3 protocol
// violation, 4 noise-budget error.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ocnn/ocnn.hpp"

namespace {

/// Every experiment option is declared as a string and funnelled through the
/// same key/value parser as config files; command-line values override the
/// file.
struct ExperimentOptions {
    std::string config_path;
    std::vector<std::string> keys;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;

    void attach(CLI::App& app) {
        app.add_option("--config", config_path, "flat key=value config file");
        const std::pair<const char*, const char*> specs[] = {
            {"dataset", "dataset path"},
            {"format", "dataset format: keel or csv"},
            {"label-column", "csv label column name"},
            {"target-label", "raw class string treated as the target"},
            {"classifier", "11nn, 11nn-theta or jknn"},
            {"ensemble", "single, rs50, rs75 or rp"},
            {"folds", "outer folds F"},
            {"inner-folds", "inner folds G"},
            {"members", "ensemble size L"},
            {"j-max", "largest J in the grid"},
            {"k-max", "largest K in the grid"},
            {"omega", "IQR rejection rate"},
            {"min-rejected", "minimum rows the IQR filter must reject"},
            {"omega-decay", "geometric omega decay factor"},
            {"omega-floor", "smallest omega before giving up"},
            {"lower-fence", "apply the lower IQR fence (true/false)"},
            {"projected-dims", "projection output dims, 0 keeps d"},
            {"member-scaling", "member view scaling: none, linear or clamped"},
            {"normalize-rp-rows", "normalize projection rows (true/false)"},
            {"include-noise-in-inner-train", "literal inner-training reading (true/false)"},
            {"seed", "master seed (required for run)"},
            {"threads", "worker threads"},
        };
        for (const auto& [key, help] : specs) {
            keys.push_back(key);
            options[key] = app.add_option("--" + std::string(key), values[key], help);
        }
    }

    ocnn::ExperimentConfig resolve() const {
        ocnn::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = ocnn::load_config_file(config_path);
        for (const auto& key : keys)
            if (options.at(key)->count() > 0) ocnn::apply_config_entry(cfg, key, values.at(key));
        return cfg;
    }
};

ocnn::LabeledDataset load_dataset(const ocnn::ExperimentConfig& cfg) {
    if (cfg.dataset_path.empty()) throw ocnn::ParseError("no dataset given (use --dataset)");
    if (cfg.format == ocnn::DatasetFormat::keel) return ocnn::parse_keel(cfg.dataset_path, cfg.target_label);
    if (cfg.label_column.empty())
        throw ocnn::ParseError("csv datasets need --label-column");
    if (!cfg.target_label)
        throw ocnn::ParseError("csv datasets need --target-label");
    return ocnn::parse_csv(cfg.dataset_path, cfg.label_column, *cfg.target_label);
}

int cmd_run(const ExperimentOptions& opts, const std::string& out_csv,
            const std::string& out_text) {
    ocnn::ExperimentConfig cfg = opts.resolve();
    if (!cfg.seed)
        throw ocnn::ParseError("run refuses to guess a seed; pass --seed (or set it in the config)");
    const ocnn::LabeledDataset ds = load_dataset(cfg);
    const ocnn::EvalReport report = ocnn::run_experiment(ds, cfg);
    ocnn::write_report(report, out_csv, ocnn::ReportFormat::csv);
    if (!out_text.empty()) ocnn::write_report(report, out_text, ocnn::ReportFormat::text);
    std::cout << ocnn::report_to_string(report, ocnn::ReportFormat::text);
    std::cout << "\nwrote " << out_csv << "\n";
    return 0;
}

int cmd_inspect(const ExperimentOptions& opts) {
    const ocnn::ExperimentConfig cfg = opts.resolve();
    const ocnn::LabeledDataset ds = load_dataset(cfg);
    std::cout << "name:            " << ds.name << "\n"
              << "source:          " << ds.source_path << " (" << ds.format << ")\n"
              << "rows:            " << ds.features.rows() << "\n"
              << "dimensions:      " << ds.features.cols() << "\n"
              << "target class:    '" << ds.target_class << "' (" << ds.target_count()
              << " rows)\n"
              << "outliers:        " << ds.outlier_count() << " rows\n";
    std::printf("imbalance ratio: %.2f\n", ds.imbalance_ratio());
    return 0;
}

int cmd_tune(const ExperimentOptions& opts, std::size_t fold) {
    const ocnn::ExperimentConfig cfg = opts.resolve();
    if (!cfg.seed) throw ocnn::ParseError("tune needs --seed");
    if (fold >= cfg.folds) throw ocnn::ParseError("--fold out of range");
    if (cfg.classifier == ocnn::ClassifierMode::nn11)
        throw ocnn::ParseError("classifier 11nn has no tunable parameters");
    const ocnn::LabeledDataset ds = load_dataset(cfg);

    // mirror the run pipeline's stream layout so the printed parameters are
    // exactly what `run` uses in this fold (single-classifier mode)
    const ocnn::RandomStream master(*cfg.seed);
    const ocnn::FoldPlan plan = ocnn::make_fold_plan(ds.labels, cfg.folds, master.derive(0));
    std::vector<std::size_t> train_rows;
    for (std::size_t i = 0; i < ds.labels.size(); ++i)
        if (plan.fold_of_row[i] != fold && ds.labels[i] == ocnn::Label::target)
            train_rows.push_back(i);
    const ocnn::FeatureMatrix train = ds.features.select_rows(train_rows);
    const ocnn::NormalizationParams norm = ocnn::fit_minmax(train);
    const ocnn::FeatureMatrix ntrain = ocnn::apply_minmax(norm, train);

    ocnn::IqrConfig iqr;
    iqr.omega = cfg.omega;
    iqr.min_rejected = std::max<std::size_t>(cfg.min_rejected, cfg.inner_folds);
    iqr.omega_decay = cfg.omega_decay;
    iqr.omega_floor = cfg.omega_floor;
    iqr.lower_fence = cfg.lower_fence;
    const ocnn::NoiseSplit split = ocnn::iqr_reject(ntrain, iqr);
    const ocnn::InnerCvPlan inner =
        ocnn::make_inner_plan(split, cfg.inner_folds, master.derive(1 + fold).derive(0));

    const ocnn::TunedParams tuned = cfg.classifier == ocnn::ClassifierMode::jknn
        ? ocnn::optimise_jk(ntrain, split, inner, ocnn::JkGrid{cfg.j_max, cfg.k_max},
                            cfg.include_noise_in_inner_train)
        : ocnn::optimise_theta(ntrain, split, inner, cfg.include_noise_in_inner_train);

    std::cout << "fold:            " << fold << "\n"
              << "training rows:   " << train_rows.size() << "\n"
              << "rejected noise:  " << split.rejected.size() << " (omega " << split.omega_used
              << ")\n";
    if (tuned.is_jk())
        std::cout << "tuned:           J=" << tuned.jk().j << " K=" << tuned.jk().k << "\n";
    else
        std::cout << "tuned:           theta=" << tuned.theta().theta << "\n";
    std::printf("inner gmean:     %.4f\n", tuned.achieved_gmean);
    return 0;
}

int cmd_project(const ExperimentOptions& opts, std::size_t member, const std::string& out) {
    const ocnn::ExperimentConfig cfg = opts.resolve();
    if (!cfg.seed) throw ocnn::ParseError("project needs --seed");
    const ocnn::LabeledDataset ds = load_dataset(cfg);

    ocnn::RandomStream stream = ocnn::RandomStream(*cfg.seed).derive(member);
    ocnn::FeatureTransform transform;
    switch (cfg.ensemble) {
        case ocnn::EnsembleChoice::rs50:
            transform = ocnn::sample_subspace(ds.features.cols(), 0.5, stream);
            break;
        case ocnn::EnsembleChoice::rs75:
            transform = ocnn::sample_subspace(ds.features.cols(), 0.75, stream);
            break;
        case ocnn::EnsembleChoice::rp: {
            const std::size_t p =
                cfg.projected_dims == 0 ? ds.features.cols() : cfg.projected_dims;
            transform = ocnn::generate_rp_matrix(p, ds.features.cols(), stream,
                                                 cfg.normalize_rp_rows);
            break;
        }
        case ocnn::EnsembleChoice::single:
            throw ocnn::ParseError("project needs --ensemble rs50, rs75 or rp");
    }

    ocnn::LabeledDataset projected = ds;
    projected.features = ocnn::apply_transform(transform, ds.features);
    projected.attribute_names.clear();
    for (std::size_t i = 0; i < projected.features.cols(); ++i)
        projected.attribute_names.push_back("t" + std::to_string(i));
    ocnn::write_dataset_csv(projected, out);
    if (transform.kind == ocnn::TransformKind::subspace) {
        std::cout << "subspace columns:";
        for (std::size_t c : transform.columns) std::cout << ' ' << c;
        std::cout << "\n";
    }
    std::cout << "wrote " << out << " (" << projected.features.rows() << " x "
              << projected.features.cols() << ")\n";
    return 0;
}

int cmd_synth(const ocnn::SyntheticSpec& spec, std::uint64_t seed, const std::string& out,
              const std::string& format) {
    const ocnn::LabeledDataset ds = ocnn::generate_synthetic(spec, ocnn::RandomStream(seed));
    if (format == "csv")
        ocnn::write_dataset_csv(ds, out);
    else if (format == "keel")
        ocnn::write_dataset_keel(ds, out);
    else
        throw ocnn::ParseError("synth format must be csv or keel");
    std::cout << "wrote " << out << " (" << ds.target_count() << " targets, "
              << ds.outlier_count() << " outliers)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-class nearest-neighbour experiment runner"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a full cross-validated experiment");
    ExperimentOptions run_opts;
    run_opts.attach(*run);
    std::string out_csv = "report.csv";
    std::string out_text;
    run->add_option("--out", out_csv, "results CSV path");
    run->add_option("--text-out", out_text, "also write a human-readable report");

    auto* inspect = app.add_subcommand("inspect", "summarise a dataset");
    ExperimentOptions inspect_opts;
    inspect_opts.attach(*inspect);

    auto* tune = app.add_subcommand("tune", "print tuned parameters for one outer fold");
    ExperimentOptions tune_opts;
    tune_opts.attach(*tune);
    std::size_t fold = 0;
    tune->add_option("--fold", fold, "outer fold index");

    auto* project = app.add_subcommand("project", "emit a transformed dataset for debugging");
    ExperimentOptions project_opts;
    project_opts.attach(*project);
    std::size_t member = 0;
    std::string project_out = "projected.csv";
    project->add_option("--member", member, "ensemble member index the transform belongs to");
    project->add_option("--out", project_out, "output CSV path");

    auto* synth = app.add_subcommand("synth", "write a synthetic fixture");
    ocnn::SyntheticSpec spec;
    std::uint64_t synth_seed = 0;
    std::string synth_out = "synthetic.csv";
    std::string synth_format = "csv";
    synth->add_option("--dims", spec.dims, "dimensions");
    synth->add_option("--targets", spec.targets, "target rows");
    synth->add_option("--sigma", spec.target_sigma, "target cluster spread");
    synth->add_option("--outliers", spec.outliers, "outlier rows");
    synth->add_option("--radius", spec.outlier_radius, "outlier ring radius");
    synth->add_option("--seed", synth_seed, "random seed")->required();
    synth->add_option("--out", synth_out, "output path");
    synth->add_option("--format", synth_format, "csv or keel");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_opts, out_csv, out_text);
        if (inspect->parsed()) return cmd_inspect(inspect_opts);
        if (tune->parsed()) return cmd_tune(tune_opts, fold);
        if (project->parsed()) return cmd_project(project_opts, member, project_out);
        if (synth->parsed()) return cmd_synth(spec, synth_seed, synth_out, synth_format);
    } catch (const ocnn::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ocnn::ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ocnn::DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ocnn::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ocnn::NoiseBudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const ocnn::Error& e) { // plan / metric / protocol violations
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
