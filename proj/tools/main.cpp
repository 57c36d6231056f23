// artifact — nanostructure-image authentication toolkit.
//
// Subcommands: synth (generate a corpus), match (score two images),
// clone (tile-average attack image), eval (FMR/FNMR/CMR curves).
// Exit codes: 0 ok, 1 data or I/O error, 2 usage error.

#include "artifact/clone.hpp"
#include "artifact/errors.hpp"
#include "artifact/eval.hpp"
#include "artifact/image.hpp"
#include "artifact/similarity.hpp"
#include "artifact/synth.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

std::optional<std::string> env_out_dir() {
    if (const char* v = std::getenv("ARTIFACT_OUT"); v && *v)
        return std::string(v);
    return std::nullopt;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw artifact::Error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out)
        throw artifact::Error("short write to " + path.string());
}

struct SynthArgs {
    std::string out_dir;
    int samples = 20;
    int measurements = 5;
    std::uint64_t seed = 42;
    std::uint64_t model_seed = 0;
    bool model_seed_set = false;
    int size = 0;
    artifact::PillarArraySpec spec;
    artifact::MeasurementModel model;
};

int run_synth(const SynthArgs& args) {
    artifact::PillarArraySpec spec = args.spec;
    spec.seed = args.seed;
    artifact::MeasurementModel model = args.model;
    model.seed = args.model_seed_set ? args.model_seed : args.seed + 1;

    const auto manifest = artifact::generate_corpus(args.samples, args.measurements, spec,
                                                    model, args.out_dir, args.size);
    std::cout << manifest.manifest_path().string() << "\n";
    return 0;
}

struct MatchArgs {
    std::string path_a, path_b;
    bool raw = false;
    artifact::PreprocessParams preprocess;
    artifact::MatchParams match;
};

int run_match(const MatchArgs& args) {
    artifact::GrayImage a = artifact::read_pgm_file(args.path_a);
    artifact::GrayImage b = artifact::read_pgm_file(args.path_b);
    if (!args.raw) {
        a = artifact::preprocess_image(a, args.preprocess);
        b = artifact::preprocess_image(b, args.preprocess);
    }
    const auto score = artifact::shifted_similarity(a, b, args.match);
    std::cout << artifact::format_score(score.value) << "\t" << score.dx << "\t" << score.dy
              << "\n";
    return 0;
}

struct CloneArgs {
    std::string input;
    artifact::CloneParams params;
    double nm_per_pixel = 3.3;
};

int run_clone(const CloneArgs& args) {
    const artifact::GrayImage img = artifact::read_pgm_file(args.input);
    if (args.params.k > img.width() || args.params.k > img.height()) {
        // usage-level rejection: k must fit the image
        std::cerr << "error: --k " << args.params.k << " exceeds image " << img.width() << "x"
                  << img.height() << "\n";
        return 2;
    }
    const artifact::GrayImage clone = artifact::make_virtual_clone(img, args.params);

    const fs::path in_path(args.input);
    fs::path out_path = in_path.parent_path() /
                        (in_path.stem().string() + ".clone.k" + std::to_string(args.params.k) +
                         ".pgm");
    artifact::write_pgm_file(out_path, clone);

    const long nm = artifact::tile_physical_size_nm_rounded(args.params.k,
                                                            {args.nm_per_pixel});
    std::cout << out_path.string() << "\n";
    std::cout << "tile " << args.params.k << " px ~ " << nm << " nm\n";
    return 0;
}

struct EvalArgs {
    std::string corpus;
    std::string out_dir;
    int grid = 1001;
    std::vector<int> clone_k = {3, 6, 9, 12, 15, 18};
    artifact::EvalOptions opts;
    std::string impostor_mode = "unordered";
    std::string genuine_mode = "pairs";
};

int run_eval(const EvalArgs& args) {
    artifact::EvalOptions opts = args.opts;
    opts.impostor_mode = args.impostor_mode == "ordered" ? artifact::PairMode::ordered
                                                         : artifact::PairMode::unordered;
    opts.genuine_scheme = args.genuine_mode == "ref"
                              ? artifact::GenuineScheme::reference_vs_rest
                              : artifact::GenuineScheme::all_pairs;

    const artifact::Corpus corpus = artifact::load_corpus(args.corpus);
    std::cerr << "corpus: " << corpus.samples.size() << " samples\n";

    const artifact::PreparedCorpus prepared = artifact::prepare_corpus(corpus, opts);

    const artifact::ScoreSet genuine = artifact::genuine_scores(prepared, opts);
    std::cerr << "genuine pairs: " << genuine.pair_count() << "\n";
    const artifact::ScoreSet impostor = artifact::impostor_scores(prepared, opts);
    std::cerr << "impostor pairs: " << impostor.pair_count() << "\n";

    std::vector<artifact::ScoreSet> clones;
    for (const int k : args.clone_k) {
        artifact::CloneParams cp;
        cp.k = k;
        cp.threshold = opts.match.threshold;
        clones.push_back(artifact::clone_scores(prepared, opts, cp));
        std::cerr << "clone k=" << k << ": " << clones.back().pair_count() << " scores\n";
    }

    const auto grid = artifact::threshold_grid(args.grid);
    const auto fmr = artifact::rate_curve(impostor, grid, artifact::RateDirection::above);
    const auto fnmr = artifact::rate_curve(genuine, grid, artifact::RateDirection::below);
    std::vector<std::pair<int, artifact::RateCurve>> cmr;
    for (const auto& set : clones)
        cmr.emplace_back(set.clone_k,
                         artifact::rate_curve(set, grid, artifact::RateDirection::above));

    const fs::path out_dir(args.out_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw artifact::Error("cannot create " + out_dir.string() + ": " + ec.message());

    write_text_file(out_dir / "curves.tsv", artifact::curves_to_tsv(fmr, fnmr, cmr));
    write_text_file(out_dir / "scores_genuine.txt", artifact::scores_to_text(genuine));
    write_text_file(out_dir / "scores_impostor.txt", artifact::scores_to_text(impostor));
    for (const auto& set : clones)
        write_text_file(out_dir / ("scores_clone_k" + std::to_string(set.clone_k) + ".txt"),
                        artifact::scores_to_text(set));

    const auto point = artifact::eer(fmr, fnmr);
    std::cout << "EER: rate " << artifact::format_rate(point.rate) << " at threshold "
              << artifact::format_rate(point.threshold) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nanostructure-image authentication toolkit"};
    app.require_subcommand(1);

    SynthArgs synth;
    CLI::App* synth_cmd =
        app.add_subcommand("synth", "generate a synthetic collapsed-pillar corpus");
    auto* out_opt = synth_cmd->add_option("--out", synth.out_dir, "output directory");
    if (const auto env = env_out_dir())
        out_opt->default_val(*env);
    else
        out_opt->required();
    synth_cmd->add_option("--samples", synth.samples, "number of samples")
        ->default_val(20)->check(CLI::PositiveNumber);
    synth_cmd->add_option("--measurements", synth.measurements, "measurements per sample")
        ->default_val(5)->check(CLI::PositiveNumber);
    synth_cmd->add_option("--seed", synth.seed, "pattern seed")->default_val(42);
    auto* model_seed_opt =
        synth_cmd->add_option("--model-seed", synth.model_seed,
                              "measurement-noise seed (default: seed+1)");
    synth_cmd->add_option("--size", synth.size,
                          "center-crop masters to this side length (0 = full canvas)")
        ->default_val(0)->check(CLI::NonNegativeNumber);
    synth_cmd->add_option("--grid-n", synth.spec.grid_n, "pillars per side")
        ->default_val(16)->check(CLI::PositiveNumber);
    synth_cmd->add_option("--pitch", synth.spec.pitch_px, "pillar pitch in px")
        ->default_val(36)->check(CLI::PositiveNumber);
    synth_cmd->add_option("--pillar", synth.spec.pillar_px, "pillar side in px")
        ->default_val(18)->check(CLI::PositiveNumber);
    synth_cmd->add_option("--fall-len", synth.spec.fall_len_px, "fallen-pillar length in px")
        ->default_val(61)->check(CLI::PositiveNumber);
    synth_cmd->add_option("--collapse-prob", synth.spec.collapse_prob,
                          "per-pillar collapse probability")
        ->default_val(0.75)->check(CLI::Range(0.0, 1.0));
    synth_cmd->add_option("--debris", synth.spec.debris_per_collapse,
                          "debris fragments per collapsed pillar")
        ->default_val(40)->check(CLI::NonNegativeNumber);
    synth_cmd->add_option("--frag-min", synth.spec.frag_min_px, "min fragment side in px")
        ->default_val(2)->check(CLI::PositiveNumber);
    synth_cmd->add_option("--frag-max", synth.spec.frag_max_px, "max fragment side in px")
        ->default_val(7)->check(CLI::PositiveNumber);
    synth_cmd->add_option("--hi", synth.spec.hi_level, "high intensity level")->default_val(130);
    synth_cmd->add_option("--lo", synth.spec.lo_level, "low intensity level")->default_val(80);
    synth_cmd->add_option("--noise-sigma", synth.model.noise_sigma,
                          "per-frame Gaussian noise sigma")
        ->default_val(12.0)->check(CLI::NonNegativeNumber);
    synth_cmd->add_option("--jitter", synth.model.jitter_px, "max |translation| per measurement")
        ->default_val(2)->check(CLI::NonNegativeNumber);
    synth_cmd->add_option("--frames", synth.model.frames, "frames averaged per measurement")
        ->default_val(8)->check(CLI::PositiveNumber);

    MatchArgs match;
    CLI::App* match_cmd = app.add_subcommand("match", "score two PGM images");
    match_cmd->add_option("imageA", match.path_a, "first image")->required();
    match_cmd->add_option("imageB", match.path_b, "second image")->required();
    match_cmd->add_flag("--raw", match.raw, "skip preprocessing (crop + median filter)");
    match_cmd->add_option("--crop", match.preprocess.crop_size,
                          "center-crop size before matching (0 = no crop)")
        ->default_val(512)->check(CLI::NonNegativeNumber);
    match_cmd->add_option("--filter", match.preprocess.filter_window,
                          "median filter window (odd; 1 = no filtering)")
        ->default_val(11)->check(CLI::PositiveNumber);
    match_cmd->add_option("--threshold", match.match.threshold, "mask threshold T")
        ->default_val(90)->check(CLI::Range(0, 255));
    match_cmd->add_option("--max-shift", match.match.max_shift, "shift-search radius")
        ->default_val(5)->check(CLI::NonNegativeNumber);
    match_cmd->add_flag("--full-grid", match.match.full_grid,
                        "search the full offset grid, not just axis shifts");
    match_cmd->add_flag("--masked-stats", match.match.masked_stats,
                        "restrict correlation statistics to mask-support pixels");

    CloneArgs clone;
    CLI::App* clone_cmd = app.add_subcommand("clone", "write a k x k tile-average clone");
    clone_cmd->add_option("image", clone.input, "input PGM")->required();
    clone_cmd->add_option("--k", clone.params.k, "tile side in px")
        ->required()->check(CLI::PositiveNumber);
    clone_cmd->add_option("--threshold", clone.params.threshold, "tile decision threshold T")
        ->default_val(90)->check(CLI::Range(0, 255));
    clone_cmd->add_option("--hi", clone.params.hi_level, "high output level")->default_val(130);
    clone_cmd->add_option("--lo", clone.params.lo_level, "low output level")->default_val(80);
    clone_cmd->add_option("--nm-per-px", clone.nm_per_pixel, "pixel calibration in nm")
        ->default_val(3.3)->check(CLI::PositiveNumber);

    EvalArgs eval;
    CLI::App* eval_cmd =
        app.add_subcommand("eval", "compute FMR/FNMR/CMR curves over a corpus");
    eval_cmd->add_option("corpus", eval.corpus, "corpus directory or manifest.tsv")->required();
    eval_cmd->add_option("--out", eval.out_dir, "output directory for TSV and score dumps")
        ->default_val(env_out_dir().value_or("."));
    eval_cmd->add_option("--grid", eval.grid, "threshold grid points over [0,1]")
        ->default_val(1001)->check(CLI::Range(2, 10000001));
    eval_cmd->add_option("--clone-k", eval.clone_k, "clone tile sizes (comma separated)")
        ->delimiter(',')->check(CLI::PositiveNumber);
    eval_cmd->add_option("--workers", eval.opts.workers, "worker threads (0 = all cores)")
        ->default_val(0)->check(CLI::NonNegativeNumber);
    eval_cmd->add_option("--crop", eval.opts.preprocess.crop_size,
                         "center-crop size (0 = no crop)")
        ->default_val(512)->check(CLI::NonNegativeNumber);
    eval_cmd->add_option("--filter", eval.opts.preprocess.filter_window,
                         "median filter window (odd; 1 = none)")
        ->default_val(11)->check(CLI::PositiveNumber);
    eval_cmd->add_option("--threshold", eval.opts.match.threshold, "mask threshold T")
        ->default_val(90)->check(CLI::Range(0, 255));
    eval_cmd->add_option("--max-shift", eval.opts.match.max_shift, "shift-search radius")
        ->default_val(5)->check(CLI::NonNegativeNumber);
    eval_cmd->add_option("--impostor-mode", eval.impostor_mode,
                         "impostor pair counting: unordered | ordered")
        ->default_val("unordered")
        ->check(CLI::IsMember({"unordered", "ordered"}));
    eval_cmd->add_option("--genuine-mode", eval.genuine_mode,
                         "genuine pairing: pairs (all within-sample) | ref (reference-vs-rest)")
        ->default_val("pairs")
        ->check(CLI::IsMember({"pairs", "ref"}));
    eval_cmd->add_flag("--full-grid", eval.opts.match.full_grid, "full offset grid search");
    eval_cmd->add_flag("--masked-stats", eval.opts.match.masked_stats,
                       "mask-support correlation statistics");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*synth_cmd) {
            synth.model_seed_set = model_seed_opt->count() > 0;
            return run_synth(synth);
        }
        if (*match_cmd) return run_match(match);
        if (*clone_cmd) return run_clone(clone);
        if (*eval_cmd) return run_eval(eval);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2; // invalid parameter combinations are usage errors
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
