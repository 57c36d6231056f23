#ifndef ARTIFACT_EVAL_HPP
#define ARTIFACT_EVAL_HPP

#include "artifact/clone.hpp"
#include "artifact/image.hpp"
#include "artifact/similarity.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace artifact {

/// One physical sample: its measurement images (manifest order) and an
/// optional noise-free master.
struct CorpusSample {
    int id = 0;
    std::vector<std::filesystem::path> measurements; // absolute paths
    std::optional<std::filesystem::path> master;
};

struct Corpus {
    std::filesystem::path root;
    std::filesystem::path manifest;
    std::vector<CorpusSample> samples; // manifest order
};

/// Loads and validates a corpus from `<dir>/manifest.tsv` (or a direct
/// manifest path). Checks: parseable rows, unique ids, files present, every
/// sample has at least one measurement. Throws CorpusError naming the
/// manifest on any inconsistency.
Corpus load_corpus(const std::filesystem::path& root_or_manifest);

enum class ScoreKind { genuine, impostor, clone };

struct ScoreSet {
    ScoreKind kind = ScoreKind::genuine;
    int clone_k = 0; // set for ScoreKind::clone
    std::vector<double> scores;

    std::size_t pair_count() const { return scores.size(); }
};

/// Preprocessing applied to every corpus image before matching:
/// center crop first (crop_size 0 skips cropping), then median filter.
struct PreprocessParams {
    int crop_size = 512;
    int filter_window = 11;
};

GrayImage preprocess_image(const GrayImage& img, const PreprocessParams& params);

enum class PairMode { unordered, ordered };
enum class GenuineScheme { all_pairs, reference_vs_rest };

struct EvalOptions {
    PreprocessParams preprocess{};
    MatchParams match{};
    GenuineScheme genuine_scheme = GenuineScheme::all_pairs;
    PairMode impostor_mode = PairMode::unordered;
    int workers = 0; // 0 = hardware concurrency; any value gives identical results
};

/// Corpus images loaded and preprocessed once, in memory. Scoring runs on
/// this; preprocessing each image exactly once keeps large sweeps cheap and
/// scores independent of evaluation order.
struct PreparedCorpus {
    std::vector<int> sample_ids;
    std::vector<std::vector<GrayImage>> measurements; // [sample][measurement]
};

PreparedCorpus prepare_corpus(const Corpus& corpus, const EvalOptions& opts);

/// All unordered within-sample measurement pairs (or reference-vs-rest when
/// opts.genuine_scheme says so). Requires >= 2 measurements per sample.
ScoreSet genuine_scores(const PreparedCorpus& prepared, const EvalOptions& opts);
ScoreSet genuine_scores(const Corpus& corpus, const EvalOptions& opts);

/// Cross-sample scores over one representative measurement per sample (the
/// first by manifest order). Ordered mode counts every pair twice — scores
/// are symmetric, so each value is simply duplicated. Requires >= 2 samples.
ScoreSet impostor_scores(const PreparedCorpus& prepared, const EvalOptions& opts);
ScoreSet impostor_scores(const Corpus& corpus, const EvalOptions& opts);

/// Per sample: virtual clone of the preprocessed representative, scored
/// against that representative. One score per sample.
ScoreSet clone_scores(const PreparedCorpus& prepared, const EvalOptions& opts,
                      const CloneParams& clone_params);
ScoreSet clone_scores(const Corpus& corpus, const EvalOptions& opts,
                      const CloneParams& clone_params);

/// Error rate as a function of the decision threshold.
struct RateCurve {
    std::vector<double> thresholds; // strictly ascending
    std::vector<double> rates;
};

enum class RateDirection {
    above, // rate(t) = |{s : s > t}| / n   (FMR, CMR)
    below  // rate(t) = |{s : s < t}| / n   (FNMR)
};

/// Strict-inequality counting in both directions. Throws EmptyScores.
RateCurve rate_curve(const ScoreSet& scores, const std::vector<double>& thresholds,
                     RateDirection direction);

/// Evenly spaced grid over [0, 1] inclusive (points >= 2).
std::vector<double> threshold_grid(int points);

struct EerPoint {
    double threshold = 0.0;
    double rate = 0.0;
};

/// Threshold minimizing |FMR - FNMR| (ties toward the lower threshold) and
/// the average of the two rates there. Curves must share their grid.
EerPoint eer(const RateCurve& fmr, const RateCurve& fnmr);

/// Locale-independent numeric formatting used in every emitted file.
std::string format_rate(double value);  // 9 significant digits
std::string format_score(double value); // fixed 12 decimals

/// TSV with header "threshold<TAB>fmr<TAB>fnmr<TAB>cmr_k<k>...", one row per
/// threshold, rates with 9 significant digits.
std::string curves_to_tsv(const RateCurve& fmr, const RateCurve& fnmr,
                          const std::vector<std::pair<int, RateCurve>>& cmr_by_k);

/// One score per line, fixed 12 decimals, sorted ascending.
std::string scores_to_text(const ScoreSet& scores);

} // namespace artifact

#endif
