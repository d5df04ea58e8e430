#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ocnn/detail/text.hpp"
#include "ocnn/errors.hpp"
#include "ocnn/eval.hpp"

namespace ocnn {

enum class ReportFormat { csv, text };

/// Table-style cell, e.g. mean 0.894 and std 0.042 render as "0.894(0.042)".
inline std::string format_mean_std(double mean, double stddev) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f(%.3f)", mean, stddev);
    return buf;
}

namespace detail {

// thread count is deliberately absent: results are independent of it
inline const char* kReportColumns =
    "dataset,dataset_path,format,target_class,classifier,ensemble,seed,folds,inner_folds,"
    "members,j_max,k_max,omega,min_rejected,omega_decay,omega_floor,lower_fence,"
    "projected_dims,member_scaling,normalize_rp_rows,include_noise_in_inner_train,"
    "row_kind,fold,tp,fn,tn,fp,tpr,tnr,gmean,omega_used,tuned";

inline std::string fingerprint_prefix(const EvalReport& r) {
    const ExperimentConfig& c = r.config;
    std::ostringstream out;
    out << r.dataset_name << ',' << r.dataset_path << ',' << r.dataset_format << ','
        << r.target_class << ',' << to_string(c.classifier) << ',' << to_string(c.ensemble) << ','
        << (c.seed ? std::to_string(*c.seed) : "") << ',' << c.folds << ',' << c.inner_folds << ','
        << c.members << ',' << c.j_max << ',' << c.k_max << ',' << format_double(c.omega) << ','
        << c.min_rejected << ',' << format_double(c.omega_decay) << ','
        << format_double(c.omega_floor) << ',' << (c.lower_fence ? "true" : "false") << ','
        << c.projected_dims << ',' << c.member_scaling << ','
        << (c.normalize_rp_rows ? "true" : "false") << ','
        << (c.include_noise_in_inner_train ? "true" : "false");
    return out.str();
}

inline std::string join_omegas(const std::vector<double>& omegas) {
    std::string out;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        if (i) out += ';';
        out += format_double(omegas[i]);
    }
    return out;
}

inline void render_csv(const EvalReport& r, std::ostream& out) {
    out << kReportColumns << "\n";
    const std::string prefix = fingerprint_prefix(r);
    for (const auto& f : r.folds) {
        out << prefix << ",fold," << f.fold << ',' << f.counts.tp << ',' << f.counts.fn << ','
            << f.counts.tn << ',' << f.counts.fp << ',' << format_double(f.tpr) << ','
            << format_double(f.tnr) << ',' << format_double(f.gmean_value) << ','
            << join_omegas(f.omegas_used) << ',' << f.tuned << "\n";
    }
    out << prefix << ",mean,,,,,," << format_double(r.tpr.mean) << ','
        << format_double(r.tnr.mean) << ',' << format_double(r.gmean_agg.mean) << ",,\n";
    out << prefix << ",std,,,,,," << format_double(r.tpr.stddev) << ','
        << format_double(r.tnr.stddev) << ',' << format_double(r.gmean_agg.stddev) << ",,\n";
}

inline void render_text(const EvalReport& r, std::ostream& out) {
    const ExperimentConfig& c = r.config;
    out << "dataset " << r.dataset_name << " (" << r.dataset_format << ", " << r.dataset_path
        << "), target class '" << r.target_class << "'\n";
    out << "classifier " << to_string(c.classifier) << ", ensemble " << to_string(c.ensemble)
        << ", seed " << (c.seed ? std::to_string(*c.seed) : "?") << ", F=" << c.folds
        << ", G=" << c.inner_folds << ", L=" << c.members << ", Jmax=" << c.j_max
        << ", Kmax=" << c.k_max << ", omega=" << c.omega << ", min_rejected=" << c.min_rejected
        << "\n\n";
    out << "fold  tp    fn    tn    fp    tpr      tnr      gmean    tuned\n";
    for (const auto& f : r.folds) {
        char line[160];
        std::snprintf(line, sizeof(line), "%-5zu %-5zu %-5zu %-5zu %-5zu %-8.4f %-8.4f %-8.4f %s\n",
                      f.fold, f.counts.tp, f.counts.fn, f.counts.tn, f.counts.fp, f.tpr, f.tnr,
                      f.gmean_value, f.tuned.c_str());
        out << line;
    }
    out << "\ngmean " << format_mean_std(r.gmean_agg.mean, r.gmean_agg.stddev) << "  tpr "
        << format_mean_std(r.tpr.mean, r.tpr.stddev) << "  tnr "
        << format_mean_std(r.tnr.mean, r.tnr.stddev) << "\n";
}

} // namespace detail

/// Serialize a report. The write is atomic: a temp file in the same
/// directory is renamed over the destination.
inline void write_report(const EvalReport& report, const std::string& path, ReportFormat format) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw IoError("cannot write report: " + tmp);
        if (format == ReportFormat::csv)
            detail::render_csv(report, out);
        else
            detail::render_text(report, out);
        if (!out) throw IoError("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw IoError("cannot rename " + tmp + " to " + path);
}

inline std::string report_to_string(const EvalReport& report, ReportFormat format) {
    std::ostringstream out;
    if (format == ReportFormat::csv)
        detail::render_csv(report, out);
    else
        detail::render_text(report, out);
    return out.str();
}

/// Parse a CSV report back; numeric fields round-trip exactly.
inline EvalReport read_report_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open report: " + path);
    std::string header;
    if (!std::getline(in, header) || detail::trim(header) != detail::kReportColumns)
        throw ParseError(path + ": unrecognised report header");

    EvalReport r;
    std::string line;
    std::size_t lineno = 1;
    bool fingerprint_set = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        std::vector<std::string> f;
        {
            std::string field;
            std::stringstream ss(line);
            while (std::getline(ss, field, ',')) f.push_back(field);
            while (f.size() < 32) f.push_back("");
        }
        if (f.size() != 32)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected 32 fields");
        if (!fingerprint_set) {
            r.dataset_name = f[0];
            r.dataset_path = f[1];
            r.dataset_format = f[2];
            r.target_class = f[3];
            r.config.classifier = classifier_from_string(f[4]);
            r.config.ensemble = ensemble_from_string(f[5]);
            if (!f[6].empty()) r.config.seed = std::stoull(f[6]);
            r.config.folds = std::stoull(f[7]);
            r.config.inner_folds = std::stoull(f[8]);
            r.config.members = std::stoull(f[9]);
            r.config.j_max = std::stoull(f[10]);
            r.config.k_max = std::stoull(f[11]);
            r.config.omega = std::stod(f[12]);
            r.config.min_rejected = std::stoull(f[13]);
            r.config.omega_decay = std::stod(f[14]);
            r.config.omega_floor = std::stod(f[15]);
            r.config.lower_fence = f[16] == "true";
            r.config.projected_dims = std::stoull(f[17]);
            r.config.member_scaling = f[18];
            r.config.normalize_rp_rows = f[19] == "true";
            r.config.include_noise_in_inner_train = f[20] == "true";
            fingerprint_set = true;
        }
        const std::string& kind = f[21];
        if (kind == "fold") {
            FoldResult fr;
            fr.fold = std::stoull(f[22]);
            fr.counts.tp = std::stoull(f[23]);
            fr.counts.fn = std::stoull(f[24]);
            fr.counts.tn = std::stoull(f[25]);
            fr.counts.fp = std::stoull(f[26]);
            fr.tpr = std::stod(f[27]);
            fr.tnr = std::stod(f[28]);
            fr.gmean_value = std::stod(f[29]);
            if (!f[30].empty()) {
                std::stringstream ss(f[30]);
                std::string v;
                while (std::getline(ss, v, ';')) fr.omegas_used.push_back(std::stod(v));
            }
            fr.tuned = f[31];
            r.folds.push_back(std::move(fr));
        } else if (kind == "mean") {
            r.tpr.mean = std::stod(f[27]);
            r.tnr.mean = std::stod(f[28]);
            r.gmean_agg.mean = std::stod(f[29]);
        } else if (kind == "std") {
            r.tpr.stddev = std::stod(f[27]);
            r.tnr.stddev = std::stod(f[28]);
            r.gmean_agg.stddev = std::stod(f[29]);
        } else {
            throw ParseError(path + ":" + std::to_string(lineno) + ": unknown row kind '" + kind +
                             "'");
        }
    }
    if (!fingerprint_set) throw ParseError(path + ": no report rows");
    return r;
}

} // namespace ocnn
