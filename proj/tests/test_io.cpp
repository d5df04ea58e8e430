#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ocnn/config.hpp"
#include "ocnn/dataset.hpp"
#include "ocnn/report.hpp"
#include "support/oracles.hpp"

using namespace ocnn;
using Catch::Approx;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content) {
        path = (std::filesystem::temp_directory_path() / name).string();
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

std::string data_file(const std::string& name) {
    return std::string(OCNN_DATA_DIR) + "/keel/" + name;
}

} // namespace

TEST_CASE("keel parsing of hand-written files") {
    SECTION("majority class becomes the target") {
        TempFile f("mini.dat",
                   "@relation mini\n"
                   "@attribute width real [0.0, 2.0]\n"
                   "@attribute Class {a, b}\n"
                   "@inputs width\n"
                   "@output Class\n"
                   "@data\n"
                   "0.5, a\n"
                   "1.5, a\n"
                   "1.0, b\n");
        const auto ds = parse_keel(f.path);
        CHECK(ds.name == "mini");
        CHECK(ds.features.rows() == 3);
        CHECK(ds.features.cols() == 1);
        CHECK(ds.target_class == "a");
        CHECK(ds.labels == std::vector<Label>{Label::target, Label::target, Label::outlier});
        CHECK(ds.attribute_names == std::vector<std::string>{"width"});
    }
    SECTION("explicit target label") {
        TempFile f("mini2.dat",
                   "@relation mini\n@attribute x real\n@attribute Class {a, b}\n@data\n"
                   "0.5, a\n1.5, a\n1.0, b\n");
        const auto ds = parse_keel(f.path, std::optional<std::string>("b"));
        CHECK(ds.target_class == "b");
        CHECK(ds.target_count() == 1);
    }
    SECTION("class outside the declared domain") {
        TempFile f("bad_class.dat",
                   "@relation r\n@attribute x real\n@attribute Class {a, b}\n@data\n0.5, c\n");
        CHECK_THROWS_MATCHES(parse_keel(f.path), ParseError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring(":5:")));
    }
    SECTION("ragged row carries its line number") {
        TempFile f("ragged.dat",
                   "@relation r\n@attribute x real\n@attribute y real\n@attribute Class {a, b}\n"
                   "@data\n0.5, 0.5, a\n0.5, b\n");
        CHECK_THROWS_MATCHES(parse_keel(f.path), ParseError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring(":7:")));
    }
    SECTION("non-numeric feature") {
        TempFile f("nonnum.dat",
                   "@relation r\n@attribute x real\n@attribute Class {a, b}\n@data\nfoo, a\n");
        CHECK_THROWS_AS(parse_keel(f.path), ParseError);
    }
    SECTION("missing data section") {
        TempFile f("nodata.dat", "@relation r\n@attribute x real\n");
        CHECK_THROWS_AS(parse_keel(f.path), ParseError);
    }
}

TEST_CASE("keel parsing of repository files") {
    if (!std::filesystem::exists(data_file("glass5.dat"))) {
        WARN("data/keel not present; skipping repository-file checks");
        return;
    }
    SECTION("glass5") {
        const auto ds = parse_keel(data_file("glass5.dat"));
        CHECK(ds.features.rows() == 214);
        CHECK(ds.features.cols() == 9);
        CHECK(ds.target_class == "negative"); // majority in the KEEL labeling
        CHECK(ds.target_count() == 205);
        CHECK(ds.outlier_count() == 9);
        CHECK(ds.imbalance_ratio() == Approx(22.78).margin(0.01));
    }
    SECTION("yeast6") {
        const auto ds = parse_keel(data_file("yeast6.dat"));
        CHECK(ds.features.rows() == 1484);
        CHECK(ds.features.cols() == 8);
        CHECK(ds.outlier_count() == 35);
        CHECK(ds.imbalance_ratio() == Approx(41.4).margin(0.05));
    }
}

TEST_CASE("csv parsing") {
    SECTION("label column anywhere") {
        TempFile f("t.csv",
                   "x,kind,y\n"
                   "1.0,pos,2.0\n"
                   "3.0,neg,4.0\n"
                   "5.0,pos,6.0\n");
        const auto ds = parse_csv(f.path, "kind", "pos");
        CHECK(ds.features.rows() == 3);
        CHECK(ds.features.cols() == 2);
        CHECK(ds.features(1, 1) == 4.0);
        CHECK(ds.labels == std::vector<Label>{Label::target, Label::outlier, Label::target});
    }
    SECTION("missing label column") {
        TempFile f("t2.csv", "x,y\n1,2\n");
        CHECK_THROWS_AS(parse_csv(f.path, "kind", "pos"), ParseError);
    }
    SECTION("target label matching no row") {
        TempFile f("t3.csv", "x,kind\n1,a\n2,b\n");
        CHECK_THROWS_AS(parse_csv(f.path, "kind", "zzz"), ParseError);
    }
    SECTION("write/read round trip") {
        SyntheticSpec spec;
        spec.dims = 2;
        spec.targets = 2;
        spec.outliers = 0;
        const auto ds = generate_synthetic(spec, RandomStream(3));
        const std::string path =
            (std::filesystem::temp_directory_path() / "roundtrip.csv").string();
        write_dataset_csv(ds, path);
        const auto back = parse_csv(path, "class", "target");
        std::remove(path.c_str());
        REQUIRE(back.features.rows() == ds.features.rows());
        CHECK(back.features.values() == ds.features.values());
        CHECK(back.labels == ds.labels);
    }
}

TEST_CASE("synthetic fixtures") {
    SyntheticSpec spec;
    spec.dims = 3;
    spec.targets = 100;
    spec.target_sigma = 0.1;
    spec.outliers = 10;
    spec.outlier_radius = 10.0;

    const auto a = generate_synthetic(spec, RandomStream(9));
    const auto b = generate_synthetic(spec, RandomStream(9));
    CHECK(a.features.values() == b.features.values());
    CHECK(a.target_count() == 100);
    CHECK(a.outlier_count() == 10);
    for (std::size_t i = 100; i < 110; ++i) {
        double sq = 0.0;
        for (double v : a.features.row(i)) sq += v * v;
        CHECK(std::sqrt(sq) == Approx(10.0).epsilon(1e-9));
    }

    SECTION("training-only fixture") {
        SyntheticSpec no_outliers = spec;
        no_outliers.outliers = 0;
        const auto ds = generate_synthetic(no_outliers, RandomStream(1));
        CHECK(ds.outlier_count() == 0);
        CHECK(ds.labels.size() == 100);
    }
    SECTION("invalid spec") {
        SyntheticSpec bad = spec;
        bad.center = {1.0};
        CHECK_THROWS_AS(generate_synthetic(bad, RandomStream(1)), ParameterError);
        SyntheticSpec bad2 = spec;
        bad2.targets = 0;
        CHECK_THROWS_AS(generate_synthetic(bad2, RandomStream(1)), ParameterError);
    }
}

TEST_CASE("report rendering and round trip") {
    // small but real report
    SyntheticSpec spec;
    spec.dims = 2;
    spec.targets = 40;
    spec.outliers = 8;
    const auto ds = generate_synthetic(spec, RandomStream(2));
    ExperimentConfig cfg;
    cfg.classifier = ClassifierMode::nn11;
    cfg.ensemble = EnsembleChoice::single;
    cfg.folds = 4;
    cfg.seed = 3;
    const auto report = run_experiment(ds, cfg);

    SECTION("mean(std) cell format") {
        CHECK(format_mean_std(0.894, 0.042) == "0.894(0.042)");
        CHECK(format_mean_std(1.0, 0.0) == "1.000(0.000)");
    }
    SECTION("csv layout: one row per fold plus mean and std") {
        const std::string csv = report_to_string(report, ReportFormat::csv);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 4 + 2);
        CHECK(csv.find(",fold,") != std::string::npos);
        CHECK(csv.find(",mean,") != std::string::npos);
        CHECK(csv.find(",std,") != std::string::npos);
    }
    SECTION("written csv reads back with identical numbers") {
        const std::string path = (std::filesystem::temp_directory_path() / "report.csv").string();
        write_report(report, path, ReportFormat::csv);
        const auto back = read_report_csv(path);
        std::remove(path.c_str());
        REQUIRE(back.folds.size() == report.folds.size());
        for (std::size_t i = 0; i < back.folds.size(); ++i) {
            CHECK(back.folds[i].tpr == report.folds[i].tpr);
            CHECK(back.folds[i].tnr == report.folds[i].tnr);
            CHECK(back.folds[i].gmean_value == report.folds[i].gmean_value);
            CHECK(back.folds[i].counts.tp == report.folds[i].counts.tp);
        }
        CHECK(back.gmean_agg.mean == report.gmean_agg.mean);
        CHECK(back.gmean_agg.stddev == report.gmean_agg.stddev);
        CHECK(back.config.folds == report.config.folds);
        CHECK(*back.config.seed == *report.config.seed);
    }
    SECTION("text rendering mentions the aggregate cells") {
        const std::string text = report_to_string(report, ReportFormat::text);
        CHECK(text.find("gmean ") != std::string::npos);
        CHECK(text.find("(") != std::string::npos);
    }
}

TEST_CASE("config files") {
    SECTION("values load and CLI-style overrides win") {
        TempFile f("exp.conf",
                   "# experiment\n"
                   "dataset = data/keel/glass5.dat\n"
                   "format = keel\n"
                   "classifier = 11nn-theta\n"
                   "ensemble = rp\n"
                   "folds = 5\n"
                   "members = 25\n"
                   "omega = 1.5\n"
                   "seed = 42\n");
        auto cfg = load_config_file(f.path);
        CHECK(cfg.dataset_path == "data/keel/glass5.dat");
        CHECK(cfg.classifier == ClassifierMode::nn11_theta);
        CHECK(cfg.ensemble == EnsembleChoice::rp);
        CHECK(*cfg.seed == 42);
        apply_config_entry(cfg, "seed", "7"); // what a CLI flag does
        CHECK(*cfg.seed == 7);
    }
    SECTION("unknown keys and malformed lines carry context") {
        TempFile f("bad.conf", "wibble = 3\n");
        CHECK_THROWS_MATCHES(load_config_file(f.path), ParseError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("wibble")));
        TempFile g("bad2.conf", "no equals sign\n");
        CHECK_THROWS_AS(load_config_file(g.path), ParseError);
    }
}
