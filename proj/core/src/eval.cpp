#include "artifact/eval.hpp"
#include "artifact/errors.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace artifact {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

int parse_int(const std::string& text, const std::string& context) {
    int value = 0;
    const auto [ptr, err] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (err != std::errc() || ptr != text.data() + text.size())
        throw CorpusError(context + ": bad integer '" + text + "'");
    return value;
}

} // namespace

Corpus load_corpus(const std::filesystem::path& root_or_manifest) {
    Corpus corpus;
    if (std::filesystem::is_directory(root_or_manifest)) {
        corpus.root = root_or_manifest;
        corpus.manifest = root_or_manifest / "manifest.tsv";
    } else {
        corpus.manifest = root_or_manifest;
        corpus.root = root_or_manifest.parent_path();
    }
    const std::string where = "corpus manifest " + corpus.manifest.string();

    std::ifstream in(corpus.manifest);
    if (!in)
        throw CorpusError(where + ": cannot open");

    std::string line;
    if (!std::getline(in, line))
        throw CorpusError(where + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (split_tabs(line) != std::vector<std::string>{"sample_id", "measurement_id", "path", "role"})
        throw CorpusError(where + ": unexpected header '" + line + "'");

    std::map<int, std::size_t> sample_index;
    std::map<std::pair<int, int>, bool> seen;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        const std::string ctx = where + " line " + std::to_string(line_no);
        if (fields.size() != 4)
            throw CorpusError(ctx + ": expected 4 tab-separated fields");

        const int sample_id = parse_int(fields[0], ctx);
        const int measurement_id = parse_int(fields[1], ctx);
        const std::string& rel = fields[2];
        const std::string& role = fields[3];
        if (rel.empty())
            throw CorpusError(ctx + ": empty path");
        if (role != "master" && role != "measurement")
            throw CorpusError(ctx + ": unknown role '" + role + "'");

        if (!seen.emplace(std::make_pair(sample_id, measurement_id), true).second)
            throw CorpusError(ctx + ": duplicate entry for sample " + fields[0] +
                              " measurement " + fields[1]);

        const std::filesystem::path abs = corpus.root / rel;
        if (!std::filesystem::exists(abs))
            throw CorpusError(ctx + ": missing file " + rel);

        auto [it, inserted] = sample_index.emplace(sample_id, corpus.samples.size());
        if (inserted)
            corpus.samples.push_back(CorpusSample{sample_id, {}, std::nullopt});
        CorpusSample& sample = corpus.samples[it->second];
        if (role == "master") {
            if (sample.master)
                throw CorpusError(ctx + ": duplicate master for sample " + fields[0]);
            sample.master = abs;
        } else {
            sample.measurements.push_back(abs);
        }
    }

    if (corpus.samples.empty())
        throw CorpusError(where + ": no samples listed");
    for (const auto& sample : corpus.samples)
        if (sample.measurements.empty())
            throw CorpusError(where + ": sample " + std::to_string(sample.id) +
                              " has no measurements");
    return corpus;
}

GrayImage preprocess_image(const GrayImage& img, const PreprocessParams& params) {
    const GrayImage cropped = params.crop_size > 0 ? center_crop(img, params.crop_size) : img;
    return median_filter(cropped, params.filter_window);
}

PreparedCorpus prepare_corpus(const Corpus& corpus, const EvalOptions& opts) {
    PreparedCorpus prepared;
    prepared.sample_ids.reserve(corpus.samples.size());
    prepared.measurements.resize(corpus.samples.size());

    std::vector<std::pair<std::size_t, std::size_t>> jobs;
    for (std::size_t s = 0; s < corpus.samples.size(); ++s) {
        prepared.sample_ids.push_back(corpus.samples[s].id);
        prepared.measurements[s].resize(corpus.samples[s].measurements.size());
        for (std::size_t m = 0; m < corpus.samples[s].measurements.size(); ++m)
            jobs.emplace_back(s, m);
    }
    detail::parallel_for(jobs.size(), opts.workers, [&](std::size_t i) {
        const auto [s, m] = jobs[i];
        prepared.measurements[s][m] =
            preprocess_image(read_pgm_file(corpus.samples[s].measurements[m]), opts.preprocess);
    });
    return prepared;
}

ScoreSet genuine_scores(const PreparedCorpus& prepared, const EvalOptions& opts) {
    for (std::size_t s = 0; s < prepared.measurements.size(); ++s)
        if (prepared.measurements[s].size() < 2)
            throw CorpusTooSmall("genuine_scores: sample " +
                                 std::to_string(prepared.sample_ids[s]) +
                                 " has fewer than 2 measurements");

    struct Pair { std::size_t s, i, j; };
    std::vector<Pair> pairs;
    for (std::size_t s = 0; s < prepared.measurements.size(); ++s) {
        const std::size_t m = prepared.measurements[s].size();
        if (opts.genuine_scheme == GenuineScheme::all_pairs) {
            for (std::size_t i = 0; i + 1 < m; ++i)
                for (std::size_t j = i + 1; j < m; ++j)
                    pairs.push_back({s, i, j});
        } else {
            for (std::size_t j = 1; j < m; ++j)
                pairs.push_back({s, 0, j});
        }
    }

    ScoreSet out;
    out.kind = ScoreKind::genuine;
    out.scores.resize(pairs.size());
    detail::parallel_for(pairs.size(), opts.workers, [&](std::size_t p) {
        const auto& [s, i, j] = pairs[p];
        out.scores[p] = shifted_similarity(prepared.measurements[s][i],
                                           prepared.measurements[s][j], opts.match).value;
    });
    return out;
}

ScoreSet impostor_scores(const PreparedCorpus& prepared, const EvalOptions& opts) {
    const std::size_t n = prepared.measurements.size();
    if (n < 2)
        throw CorpusTooSmall("impostor_scores: need at least 2 samples");

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (std::size_t a = 0; a + 1 < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            pairs.emplace_back(a, b);

    std::vector<double> unordered(pairs.size());
    detail::parallel_for(pairs.size(), opts.workers, [&](std::size_t p) {
        const auto& [a, b] = pairs[p];
        unordered[p] = shifted_similarity(prepared.measurements[a][0],
                                          prepared.measurements[b][0], opts.match).value;
    });

    ScoreSet out;
    out.kind = ScoreKind::impostor;
    if (opts.impostor_mode == PairMode::ordered) {
        out.scores.reserve(unordered.size() * 2);
        for (const double v : unordered) {
            out.scores.push_back(v);
            out.scores.push_back(v);
        }
    } else {
        out.scores = std::move(unordered);
    }
    return out;
}

ScoreSet clone_scores(const PreparedCorpus& prepared, const EvalOptions& opts,
                      const CloneParams& clone_params) {
    const std::size_t n = prepared.measurements.size();
    if (n == 0)
        throw CorpusTooSmall("clone_scores: empty corpus");

    ScoreSet out;
    out.kind = ScoreKind::clone;
    out.clone_k = clone_params.k;
    out.scores.resize(n);
    detail::parallel_for(n, opts.workers, [&](std::size_t s) {
        const GrayImage& authentic = prepared.measurements[s][0];
        const GrayImage clone = make_virtual_clone(authentic, clone_params);
        out.scores[s] = shifted_similarity(clone, authentic, opts.match).value;
    });
    return out;
}

ScoreSet genuine_scores(const Corpus& corpus, const EvalOptions& opts) {
    return genuine_scores(prepare_corpus(corpus, opts), opts);
}
ScoreSet impostor_scores(const Corpus& corpus, const EvalOptions& opts) {
    return impostor_scores(prepare_corpus(corpus, opts), opts);
}
ScoreSet clone_scores(const Corpus& corpus, const EvalOptions& opts,
                      const CloneParams& clone_params) {
    return clone_scores(prepare_corpus(corpus, opts), opts, clone_params);
}

RateCurve rate_curve(const ScoreSet& scores, const std::vector<double>& thresholds,
                     RateDirection direction) {
    if (scores.scores.empty())
        throw EmptyScores("rate_curve: no scores");
    for (std::size_t i = 1; i < thresholds.size(); ++i)
        if (!(thresholds[i - 1] < thresholds[i]))
            throw std::invalid_argument("rate_curve: thresholds must be strictly ascending");

    std::vector<double> sorted = scores.scores;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());

    RateCurve curve;
    curve.thresholds = thresholds;
    curve.rates.reserve(thresholds.size());
    for (const double t : thresholds) {
        std::size_t count;
        if (direction == RateDirection::above) {
            count = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
        } else {
            count = std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
        }
        curve.rates.push_back(static_cast<double>(count) / n);
    }
    return curve;
}

std::vector<double> threshold_grid(int points) {
    if (points < 2)
        throw std::invalid_argument("threshold_grid: need at least 2 points");
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(i)] = static_cast<double>(i) / (points - 1);
    return grid;
}

EerPoint eer(const RateCurve& fmr, const RateCurve& fnmr) {
    if (fmr.thresholds != fnmr.thresholds)
        throw GridMismatch("eer: curves use different threshold grids");
    if (fmr.thresholds.empty())
        throw GridMismatch("eer: empty curves");

    EerPoint best{fmr.thresholds[0],
                  (fmr.rates[0] + fnmr.rates[0]) / 2.0};
    double best_gap = std::abs(fmr.rates[0] - fnmr.rates[0]);
    for (std::size_t i = 1; i < fmr.thresholds.size(); ++i) {
        const double gap = std::abs(fmr.rates[i] - fnmr.rates[i]);
        if (gap < best_gap) {
            best_gap = gap;
            best = {fmr.thresholds[i], (fmr.rates[i] + fnmr.rates[i]) / 2.0};
        }
    }
    return best;
}

std::string format_rate(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                   std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

std::string format_score(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                   std::chars_format::fixed, 12);
    return std::string(buf, res.ptr);
}

std::string curves_to_tsv(const RateCurve& fmr, const RateCurve& fnmr,
                          const std::vector<std::pair<int, RateCurve>>& cmr_by_k) {
    if (fmr.thresholds != fnmr.thresholds)
        throw GridMismatch("curves_to_tsv: fmr/fnmr grids differ");
    for (const auto& [k, curve] : cmr_by_k)
        if (curve.thresholds != fmr.thresholds)
            throw GridMismatch("curves_to_tsv: cmr_k" + std::to_string(k) + " grid differs");

    std::string out = "threshold\tfmr\tfnmr";
    for (const auto& [k, curve] : cmr_by_k)
        out += "\tcmr_k" + std::to_string(k);
    out += "\n";
    for (std::size_t i = 0; i < fmr.thresholds.size(); ++i) {
        out += format_rate(fmr.thresholds[i]);
        out += "\t" + format_rate(fmr.rates[i]);
        out += "\t" + format_rate(fnmr.rates[i]);
        for (const auto& [k, curve] : cmr_by_k)
            out += "\t" + format_rate(curve.rates[i]);
        out += "\n";
    }
    return out;
}

std::string scores_to_text(const ScoreSet& scores) {
    std::vector<double> sorted = scores.scores;
    std::sort(sorted.begin(), sorted.end());
    std::string out;
    out.reserve(sorted.size() * 15);
    for (const double s : sorted) {
        out += format_score(s);
        out += "\n";
    }
    return out;
}

} // namespace artifact
