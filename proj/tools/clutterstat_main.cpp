// clutterstat: fit clutter amplitude models, rank them by KL distance, and
// run CFAR detection on SAR chips or synthetic scenes.

#include <glob.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "clutterstat/clutterstat.hpp"

namespace fs = std::filesystem;
using namespace clutterstat;

namespace {

// Exit codes, one per error class; listed in --help.
constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitDegenerate = 4;
constexpr int kExitConvergence = 5;
constexpr int kExitDivergence = 6;
constexpr int kExitFormat = 7;
constexpr int kExitLength = 8;
constexpr int kExitBounds = 9;
constexpr int kExitUnsupported = 10;
constexpr int kExitIo = 11;

constexpr const char kExitFooter[] =
    "Exit codes:\n"
    "  0 success            1 internal error      2 usage error\n"
    "  3 domain error        4 degenerate data     5 no convergence\n"
    "  6 divergent estimate  7 format error        8 length mismatch\n"
    "  9 out of bounds      10 unsupported model  11 i/o error";

struct Options {
    std::string input;
    std::string glob_pattern;
    std::vector<std::size_t> pixel;       // R,C
    std::vector<std::size_t> rect;        // R0,C0,R1,C1
    std::size_t bins = 256;
    double pfa = 1e-6;
    int train = 15;
    int guard = 5;
    std::string mode = "windowed";
    std::string border = "shrink";
    std::string family;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    double floor_eps = 0.0;
    bool raw_frequency = false;
    std::optional<double> q_override;
    std::string raw_endian = "big";
    bool gray = false;

    // synth-only
    std::size_t rows = 64, cols = 64;
    std::vector<double> params;
    std::vector<std::string> targets;     // "R,C,AMP" entries
};

ByteOrder parse_endian(const std::string& s) {
    if (s == "big") return ByteOrder::Big;
    if (s == "little") return ByteOrder::Little;
    throw DomainError("--raw-endian must be big or little");
}

AmplitudeImage load_image(const Options& opt, const std::string& path) {
    fs::path p(path);
    AmplitudeImage image = p.extension() == ".pgm"
                               ? read_pgm(p)
                               : read_mstar(p, parse_endian(opt.raw_endian));
    return opt.gray ? normalize_to_gray(image) : image;
}

std::vector<std::string> expand_glob(const std::string& pattern) {
    glob_t g{};
    const int rc = glob(pattern.c_str(), 0, nullptr, &g);
    std::vector<std::string> paths;
    if (rc == 0)
        for (std::size_t i = 0; i < g.gl_pathc; ++i) paths.emplace_back(g.gl_pathv[i]);
    globfree(&g);
    if (rc != 0 && rc != GLOB_NOMATCH)
        throw IoError("glob failed for pattern " + pattern);
    if (paths.empty())
        throw IoError("no files match " + pattern);
    std::sort(paths.begin(), paths.end());
    return paths;
}

SampleSet load_samples_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::vector<double> values;
    std::string token;
    while (in >> token) {
        // Accept comma- or whitespace-separated numbers; skip header words.
        std::stringstream ss(token);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            if (cell.empty()) continue;
            try {
                std::size_t pos = 0;
                const double v = std::stod(cell, &pos);
                if (pos == cell.size()) values.push_back(v);
            } catch (...) {
                // non-numeric cell (header) — ignore
            }
        }
    }
    if (values.empty())
        throw FormatError("no numeric samples in " + path.string());
    return SampleSet(std::move(values));
}

Rect rect_from(const std::vector<std::size_t>& v) {
    return Rect(v[0], v[1], v[2], v[3]);
}

SampleSet gather_samples(const Options& opt) {
    fs::path p(opt.input);
    SampleSet samples = (p.extension() == ".csv" || p.extension() == ".txt")
        ? load_samples_csv(p)
        : [&] {
              AmplitudeImage image = load_image(opt, opt.input);
              const Rect rect =
                  opt.rect.empty() ? image.full_rect() : rect_from(opt.rect);
              return region_samples(image, rect);
          }();
    return opt.floor_eps > 0.0 ? floor_samples(samples, opt.floor_eps) : samples;
}

SelectOptions select_options(const Options& opt) {
    SelectOptions so;
    if (opt.raw_frequency) so.kl.mode = KlMode::RawFrequency;
    return so;
}

void print_ranking(const SelectionResult& sel) {
    std::printf("%-4s %-10s %-14s %s\n", "rank", "family", "kl", "params");
    for (const FitReport& r : sel.reports) {
        std::string params;
        for (const auto& [k, v] : param_map(r.model)) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%s%s=%.6g", params.empty() ? "" : " ",
                          k.c_str(), v);
            params += buf;
        }
        std::printf("%-4d %-10s %-14.8g %s\n", r.rank, family_name(r.model.family()),
                    r.kl, params.c_str());
    }
    for (const SkippedFit& sk : sel.skipped)
        std::printf("--   %-10s skipped: %s\n", family_name(sk.family), sk.reason.c_str());
}

/// Per-bin empirical probabilities next to each fitted family's bin mass.
void write_curves_csv(const SelectionResult& sel, const fs::path& path) {
    const EmpiricalHistogram& hist = sel.histogram;
    std::vector<std::pair<std::string, std::vector<double>>> columns;
    for (const FitReport& r : sel.reports)
        columns.emplace_back(family_name(r.model.family()),
                             model_bin_masses(r.model, hist));

    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::trunc);
        if (!os)
            throw IoError("cannot open " + tmp.string());
        os.precision(17);
        os << "gray_level,empirical";
        for (const auto& [name, _] : columns) os << ',' << name;
        os << '\n';
        for (std::size_t k = 0; k < hist.bins(); ++k) {
            const double center = 0.5 * (hist.edges()[k] + hist.edges()[k + 1]);
            os << center << ',' << hist.probs()[k];
            for (const auto& [_, masses] : columns) os << ',' << masses[k];
            os << '\n';
        }
    }
    fs::rename(tmp, path);
}

RunReport base_report(const Options& opt, const std::string& command) {
    RunReport report;
    report.command = command;
    report.seed = opt.seed;
    if (!opt.input.empty()) report.inputs["input"] = opt.input;
    if (!opt.glob_pattern.empty()) report.inputs["glob"] = opt.glob_pattern;
    return report;
}

void finish_report(RunReport& report, const Options& opt,
                   std::chrono::steady_clock::time_point start) {
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    fs::create_directories(opt.out_dir);
    write_report(report, fs::path(opt.out_dir) / "report.json");
}

int cmd_fit(const Options& opt) {
    const auto start = std::chrono::steady_clock::now();
    const SampleSet samples = gather_samples(opt);
    RunReport report = base_report(opt, "fit");

    constexpr Family kFamilies[] = {Family::Weibull, Family::Rayleigh, Family::Gamma,
                                    Family::LogNormal};
    std::printf("%-10s %-30s %s\n", "family", "params", "mean");
    for (Family family : kFamilies) {
        try {
            const ClutterModel model = fit_model(family, samples);
            FitEntry entry{family_name(family), param_map(model), model_mean(model),
                           0.0, 0};
            std::string params;
            for (const auto& [k, v] : entry.params) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%s%s=%.8g", params.empty() ? "" : " ",
                              k.c_str(), v);
                params += buf;
            }
            std::printf("%-10s %-30s %.8g\n", entry.family.c_str(), params.c_str(),
                        entry.mean);
            report.fits.push_back(std::move(entry));
        } catch (const Error& e) {
            std::printf("%-10s skipped: %s\n", family_name(family), e.what());
            report.skipped.push_back(SkipEntry{family_name(family), e.what()});
        }
    }
    if (report.fits.empty())
        throw DegenerateDataError("fit: every family fit failed");
    finish_report(report, opt, start);
    return kExitOk;
}

int cmd_gof(const Options& opt) {
    const auto start = std::chrono::steady_clock::now();
    const SampleSet samples = gather_samples(opt);
    const SelectionResult sel = select_model(samples, opt.bins, select_options(opt));
    print_ranking(sel);

    RunReport report = base_report(opt, "gof");
    fill_selection(report, sel);
    fs::create_directories(opt.out_dir);
    {
        const fs::path tmp = fs::path(opt.out_dir) / "histogram.csv.tmp";
        std::ofstream os(tmp, std::ios::trunc);
        write_histogram_csv(sel.histogram, os);
        os.close();
        fs::rename(tmp, fs::path(opt.out_dir) / "histogram.csv");
    }
    write_curves_csv(sel, fs::path(opt.out_dir) / "curves.csv");
    finish_report(report, opt, start);
    return kExitOk;
}

int cmd_series(const Options& opt) {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<std::string> paths = expand_glob(opt.glob_pattern);
    if (paths.size() < 2)
        throw DomainError("series: need at least 2 images");
    std::vector<AmplitudeImage> images;
    images.reserve(paths.size());
    for (const std::string& p : paths) images.push_back(load_image(opt, p));

    const PixelSeries series = stack_series(images, opt.pixel[0], opt.pixel[1]);
    SampleSet samples = series.samples();
    if (opt.floor_eps > 0.0) samples = floor_samples(samples, opt.floor_eps);
    const SelectionResult sel = select_model(samples, opt.bins, select_options(opt));
    std::printf("pixel (%zu,%zu), %zu realizations\n", series.row, series.col,
                series.values.size());
    print_ranking(sel);

    RunReport report = base_report(opt, "series");
    report.inputs["pixel"] =
        std::to_string(series.row) + "," + std::to_string(series.col);
    report.inputs["images"] = std::to_string(paths.size());
    fill_selection(report, sel);
    fs::create_directories(opt.out_dir);
    {
        const fs::path tmp = fs::path(opt.out_dir) / "series.csv.tmp";
        std::ofstream os(tmp, std::ios::trunc);
        write_series_csv(series, os);
        os.close();
        fs::rename(tmp, fs::path(opt.out_dir) / "series.csv");
    }
    {
        const fs::path tmp = fs::path(opt.out_dir) / "histogram.csv.tmp";
        std::ofstream os(tmp, std::ios::trunc);
        write_histogram_csv(sel.histogram, os);
        os.close();
        fs::rename(tmp, fs::path(opt.out_dir) / "histogram.csv");
    }
    write_curves_csv(sel, fs::path(opt.out_dir) / "curves.csv");
    finish_report(report, opt, start);
    return kExitOk;
}

int cmd_detect(const Options& opt) {
    const auto start = std::chrono::steady_clock::now();
    const AmplitudeImage image = load_image(opt, opt.input);
    const Rect clutter_rect = opt.rect.empty() ? image.full_rect() : rect_from(opt.rect);
    SampleSet clutter = region_samples(image, clutter_rect);
    if (opt.floor_eps > 0.0) clutter = floor_samples(clutter, opt.floor_eps);

    const Family family = parse_family(opt.family);
    ClutterModel model = [&] {
        switch (family) {
            case Family::Weibull:  return ClutterModel(fit_weibull(clutter).params);
            case Family::Rayleigh: return ClutterModel(fit_rayleigh(clutter));
            default:
                throw UnsupportedModelError(
                    "detect: only weibull and rayleigh have analytic thresholds");
        }
    }();

    CfarConfig config;
    config.train = opt.train;
    config.guard = opt.guard;
    config.pfa = opt.pfa;
    config.q_override = opt.q_override;
    config.stats_mode = opt.mode == "global" ? StatsMode::Global : StatsMode::Windowed;
    if (opt.mode != "global" && opt.mode != "windowed")
        throw DomainError("--mode must be windowed or global");
    if (opt.border == "shrink") config.border = BorderPolicy::Shrink;
    else if (opt.border == "strict") config.border = BorderPolicy::Strict;
    else if (opt.border == "skip") config.border = BorderPolicy::Skip;
    else throw DomainError("--border must be shrink, strict, or skip");
    if (!opt.rect.empty()) config.global_region = clutter_rect;

    const DetectionResult result = detect(image, model, config);
    std::printf("t_a=%.6g q=%.6g detections=%zu", result.t_a, result.q,
                result.detections);
    if (result.global_stats)
        std::printf(" mu_c=%.6g sigma_c=%.6g", result.global_stats->mu_c,
                    result.global_stats->sigma_c);
    std::printf("\n");

    fs::create_directories(opt.out_dir);
    write_pgm(mask_to_image(result), fs::path(opt.out_dir) / "mask.pgm");
    write_detection_json(result, config, fs::path(opt.out_dir) / "detection.json");

    RunReport report = base_report(opt, "detect");
    report.inputs["family"] = opt.family;
    FitEntry entry{family_name(family), param_map(model), model_mean(model), 0.0, 0};
    report.fits.push_back(std::move(entry));
    ThresholdBlock thresholds{result.t_a, result.q, 0.0, 0.0};
    if (result.global_stats) {
        thresholds.mu_c = result.global_stats->mu_c;
        thresholds.sigma_c = result.global_stats->sigma_c;
    }
    report.thresholds = thresholds;
    report.detection = DetectionBlock{result.detections, result.skipped, "mask.pgm"};
    finish_report(report, opt, start);
    return kExitOk;
}

int cmd_synth(const Options& opt) {
    const auto start = std::chrono::steady_clock::now();
    const Family family = parse_family(opt.family);
    ClutterModel model = [&]() -> ClutterModel {
        const auto& p = opt.params;
        switch (family) {
            case Family::Weibull:
                if (p.size() != 2) throw DomainError("weibull needs --params ALPHA,BETA");
                return ClutterModel(WeibullParams(p[0], p[1]));
            case Family::Rayleigh:
                if (p.size() != 1) throw DomainError("rayleigh needs --params SIGMA");
                return ClutterModel(RayleighParams(p[0]));
            case Family::Gamma:
                if (p.size() != 2) throw DomainError("gamma needs --params A,B");
                return ClutterModel(GammaParams(p[0], p[1]));
            case Family::LogNormal:
                if (p.size() != 2) throw DomainError("lognormal needs --params ETA,GAMMA");
                return ClutterModel(LogNormalParams(p[0], p[1]));
        }
        throw DomainError("unknown family");
    }();

    SceneSpec spec{opt.rows, opt.cols, model, {}, opt.seed};
    for (const std::string& t : opt.targets) {
        std::size_t r = 0, c = 0;
        double amp = 0.0;
        if (std::sscanf(t.c_str(), "%zu,%zu,%lf", &r, &c, &amp) != 3)
            throw DomainError("--target expects R,C,AMPLITUDE");
        spec.targets.push_back(TargetSpec{r, c, amp});
    }
    const AmplitudeImage scene = synth_scene(spec);

    fs::create_directories(opt.out_dir);
    write_pgm(scene, fs::path(opt.out_dir) / "scene.pgm");
    std::printf("wrote %zux%zu scene, %zu targets, seed %llu\n", scene.rows(),
                scene.cols(), spec.targets.size(),
                static_cast<unsigned long long>(spec.seed));

    RunReport report = base_report(opt, "synth");
    report.inputs["family"] = opt.family;
    report.inputs["rows"] = std::to_string(opt.rows);
    report.inputs["cols"] = std::to_string(opt.cols);
    report.inputs["targets"] = std::to_string(spec.targets.size());
    finish_report(report, opt, start);
    return kExitOk;
}

int run(int argc, char** argv) {
    CLI::App app{"SAR land-clutter amplitude statistics: ML model fitting, "
                 "KL-distance ranking, and CFAR detection"};
    app.footer(kExitFooter);
    app.require_subcommand(1);

    Options opt;
    int (*handler)(const Options&) = nullptr;

    auto add_common = [&opt](CLI::App* sub) {
        sub->add_option("--out", opt.out_dir, "Output directory")
            ->capture_default_str();
        sub->add_option("--seed", opt.seed,
                        "RNG seed (drives synth; echoed into every report)")
            ->capture_default_str();
    };
    auto add_ingest = [&opt](CLI::App* sub) {
        sub->add_option("--raw-endian", opt.raw_endian,
                        "Payload byte order for MSTAR files (big|little)")
            ->capture_default_str();
        sub->add_flag("--gray", opt.gray,
                      "Normalize input amplitudes to gray levels [0,255]");
        sub->add_option("--floor", opt.floor_eps,
                        "Raise samples below EPS to EPS before fitting");
    };
    auto add_gof = [&opt](CLI::App* sub) {
        sub->add_option("--bins", opt.bins, "Histogram bin count")
            ->capture_default_str();
        sub->add_flag("--raw-frequency", opt.raw_frequency,
                      "Score KL on raw counts instead of probabilities");
    };

    CLI::App* fit = app.add_subcommand("fit", "Fit all four families to samples");
    fit->add_option("--input", opt.input, "Image (PGM/MSTAR) or CSV sample file")
        ->required();
    fit->add_option("--rect", opt.rect, "Region R0,C0,R1,C1 (inclusive)")
        ->delimiter(',')->expected(4);
    add_ingest(fit);
    add_common(fit);
    fit->callback([&] { handler = cmd_fit; });

    CLI::App* gof = app.add_subcommand(
        "gof", "Rank families by KL distance on an image region");
    gof->add_option("--input", opt.input, "Image (PGM/MSTAR) or CSV sample file")
        ->required();
    gof->add_option("--rect", opt.rect, "Region R0,C0,R1,C1 (inclusive)")
        ->delimiter(',')->expected(4);
    add_ingest(gof);
    add_gof(gof);
    add_common(gof);
    gof->callback([&] { handler = cmd_gof; });

    CLI::App* series = app.add_subcommand(
        "series", "Rank families on a per-pixel series across an image stack");
    series->add_option("--glob", opt.glob_pattern, "Glob matching the image stack")
        ->required();
    series->add_option("--pixel", opt.pixel, "Tracked pixel R,C")
        ->delimiter(',')->expected(2)->required();
    add_ingest(series);
    add_gof(series);
    add_common(series);
    series->callback([&] { handler = cmd_series; });

    CLI::App* detect_cmd = app.add_subcommand(
        "detect", "CFAR detection with an analytic adaptive threshold");
    detect_cmd->add_option("--input", opt.input, "Image (PGM/MSTAR)")->required();
    detect_cmd->add_option("--family", opt.family, "Clutter family (weibull|rayleigh)")
        ->required();
    detect_cmd->add_option("--rect", opt.rect,
                           "Clutter region R0,C0,R1,C1 for fitting/global stats")
        ->delimiter(',')->expected(4);
    detect_cmd->add_option("--pfa", opt.pfa, "Design false-alarm probability")
        ->capture_default_str();
    detect_cmd->add_option("--train", opt.train, "Training cells per wing")
        ->capture_default_str();
    detect_cmd->add_option("--guard", opt.guard, "Guard cells per wing")
        ->capture_default_str();
    detect_cmd->add_option("--mode", opt.mode, "Stats mode (windowed|global)")
        ->capture_default_str();
    detect_cmd->add_option("--border", opt.border,
                           "Window border policy (shrink|strict|skip)")
        ->capture_default_str();
    detect_cmd->add_option("--q", opt.q_override, "Override the design parameter Q");
    add_ingest(detect_cmd);
    add_common(detect_cmd);
    detect_cmd->callback([&] { handler = cmd_detect; });

    CLI::App* synth = app.add_subcommand(
        "synth", "Write a synthetic clutter scene with optional point targets");
    synth->add_option("--rows", opt.rows, "Scene rows")->capture_default_str();
    synth->add_option("--cols", opt.cols, "Scene cols")->capture_default_str();
    synth->add_option("--family", opt.family,
                      "Clutter family (weibull|rayleigh|gamma|lognormal)")
        ->required();
    synth->add_option("--params", opt.params,
                      "Family parameters (weibull A,B | rayleigh S | gamma A,B | "
                      "lognormal ETA,GAMMA)")
        ->delimiter(',')->required();
    synth->add_option("--target", opt.targets, "Point target R,C,AMPLITUDE (repeatable)");
    add_common(synth);
    synth->callback([&] { handler = cmd_synth; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }
    return handler(opt);
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const DegenerateDataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConvergence;
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const UnsupportedModelError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUnsupported;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFormat;
    } catch (const LengthError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitLength;
    } catch (const BoundsError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBounds;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}
