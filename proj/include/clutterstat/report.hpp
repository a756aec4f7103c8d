#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "clutterstat/cfar.hpp"
#include "clutterstat/distributions.hpp"
#include "clutterstat/error.hpp"
#include "clutterstat/model_selection.hpp"

namespace clutterstat {

inline constexpr int kReportSchemaVersion = 1;

/// One fitted family inside a run report.
struct FitEntry {
    std::string family;
    std::map<std::string, double> params;
    double mean = 0.0;
    double kl = 0.0;
    int rank = 0;
    bool operator==(const FitEntry&) const = default;
};

struct SkipEntry {
    std::string family;
    std::string reason;
    bool operator==(const SkipEntry&) const = default;
};

struct ThresholdBlock {
    double t_a = 0.0;
    double q = 0.0;
    double mu_c = 0.0;
    double sigma_c = 0.0;
    bool operator==(const ThresholdBlock&) const = default;
};

struct DetectionBlock {
    std::uint64_t detections = 0;
    std::uint64_t skipped = 0;
    std::string mask_path;
    bool operator==(const DetectionBlock&) const = default;
};

/// Schema-versioned result document emitted by every CLI command.
struct RunReport {
    int schema_version = kReportSchemaVersion;
    std::string command;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> inputs;   // echo of paths and flags
    std::vector<FitEntry> fits;
    std::vector<SkipEntry> skipped;
    std::optional<ThresholdBlock> thresholds;
    std::optional<DetectionBlock> detection;
    double elapsed_seconds = 0.0;
    bool operator==(const RunReport&) const = default;
};

inline std::map<std::string, double> param_map(const ClutterModel& model) {
    switch (model.family()) {
        case Family::Weibull: {
            const auto& p = model.as<WeibullParams>();
            return {{"alpha", p.alpha}, {"beta", p.beta}};
        }
        case Family::Rayleigh:
            return {{"sigma", model.as<RayleighParams>().sigma}};
        case Family::Gamma: {
            const auto& p = model.as<GammaParams>();
            return {{"a", p.a}, {"b", p.b}};
        }
        case Family::LogNormal: {
            const auto& p = model.as<LogNormalParams>();
            return {{"eta", p.eta}, {"gamma", p.gamma_loc}};
        }
    }
    throw DomainError("param_map: unknown family");
}

inline FitEntry make_fit_entry(const FitReport& report) {
    return FitEntry{family_name(report.model.family()), param_map(report.model),
                    model_mean(report.model), report.kl, report.rank};
}

inline void fill_selection(RunReport& report, const SelectionResult& selection) {
    for (const FitReport& fr : selection.reports)
        report.fits.push_back(make_fit_entry(fr));
    for (const SkippedFit& sk : selection.skipped)
        report.skipped.push_back(SkipEntry{family_name(sk.family), sk.reason});
}

inline void to_json(nlohmann::json& j, const FitEntry& e) {
    j = {{"family", e.family}, {"params", e.params}, {"mean", e.mean},
         {"kl", e.kl},         {"rank", e.rank}};
}
inline void from_json(const nlohmann::json& j, FitEntry& e) {
    j.at("family").get_to(e.family);
    j.at("params").get_to(e.params);
    j.at("mean").get_to(e.mean);
    j.at("kl").get_to(e.kl);
    j.at("rank").get_to(e.rank);
}

inline void to_json(nlohmann::json& j, const SkipEntry& e) {
    j = {{"family", e.family}, {"reason", e.reason}};
}
inline void from_json(const nlohmann::json& j, SkipEntry& e) {
    j.at("family").get_to(e.family);
    j.at("reason").get_to(e.reason);
}

inline void to_json(nlohmann::json& j, const ThresholdBlock& t) {
    j = {{"t_a", t.t_a}, {"q", t.q}, {"mu_c", t.mu_c}, {"sigma_c", t.sigma_c}};
}
inline void from_json(const nlohmann::json& j, ThresholdBlock& t) {
    j.at("t_a").get_to(t.t_a);
    j.at("q").get_to(t.q);
    j.at("mu_c").get_to(t.mu_c);
    j.at("sigma_c").get_to(t.sigma_c);
}

inline void to_json(nlohmann::json& j, const DetectionBlock& d) {
    j = {{"detections", d.detections}, {"skipped", d.skipped},
         {"mask_path", d.mask_path}};
}
inline void from_json(const nlohmann::json& j, DetectionBlock& d) {
    j.at("detections").get_to(d.detections);
    j.at("skipped").get_to(d.skipped);
    j.at("mask_path").get_to(d.mask_path);
}

inline void to_json(nlohmann::json& j, const RunReport& r) {
    j = {{"schema_version", r.schema_version},
         {"command", r.command},
         {"seed", r.seed},
         {"inputs", r.inputs},
         {"fits", r.fits},
         {"skipped", r.skipped},
         {"elapsed_seconds", r.elapsed_seconds}};
    if (r.thresholds) j["thresholds"] = *r.thresholds;
    if (r.detection) j["detection"] = *r.detection;
}
inline void from_json(const nlohmann::json& j, RunReport& r) {
    j.at("schema_version").get_to(r.schema_version);
    j.at("command").get_to(r.command);
    j.at("seed").get_to(r.seed);
    j.at("inputs").get_to(r.inputs);
    j.at("fits").get_to(r.fits);
    j.at("skipped").get_to(r.skipped);
    j.at("elapsed_seconds").get_to(r.elapsed_seconds);
    if (j.contains("thresholds")) r.thresholds = j.at("thresholds").get<ThresholdBlock>();
    if (j.contains("detection")) r.detection = j.at("detection").get<DetectionBlock>();
}

/// Writes a JSON document atomically (temp file in the target directory,
/// then rename).
inline void write_json_atomic(const nlohmann::json& j,
                              const std::filesystem::path& path) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            throw IoError("write_json_atomic: cannot open " + tmp.string());
        out << j.dump(2) << '\n';
        if (!out)
            throw IoError("write_json_atomic: write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline void write_report(const RunReport& report, const std::filesystem::path& path) {
    write_json_atomic(nlohmann::json(report), path);
}

inline RunReport read_report(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("read_report: cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
        return j.get<RunReport>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("read_report: ") + e.what());
    }
}

/// JSON sidecar accompanying a detection mask: thresholds, config echo, and
/// detection counts.
inline nlohmann::json detection_sidecar(const DetectionResult& result,
                                        const CfarConfig& config) {
    nlohmann::json j = {
        {"schema_version", kReportSchemaVersion},
        {"t_a", result.t_a},
        {"q", result.q},
        {"pfa", config.pfa},
        {"train", config.train},
        {"guard", config.guard},
        {"stats_mode", stats_mode_name(result.stats_mode)},
        {"border_policy", border_policy_name(result.border_policy)},
        {"rows", result.rows},
        {"cols", result.cols},
        {"detections", result.detections},
        {"skipped", result.skipped},
    };
    if (result.global_stats) {
        j["mu_c"] = result.global_stats->mu_c;
        j["sigma_c"] = result.global_stats->sigma_c;
    }
    if (config.q_override) j["q_override"] = *config.q_override;
    if (config.fixed_threshold) j["fixed_threshold"] = true;
    return j;
}

inline void write_detection_json(const DetectionResult& result, const CfarConfig& config,
                                 const std::filesystem::path& path) {
    write_json_atomic(detection_sidecar(result, config), path);
}

}  // namespace clutterstat
