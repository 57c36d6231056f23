#ifndef ARTIFACT_SYNTH_HPP
#define ARTIFACT_SYNTH_HPP

#include "artifact/image.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace artifact {

/// Geometry and randomness of a synthetic collapsed-pillar master pattern.
///
/// The generator is a calibrated stand-in, not a physics model: pillars
/// stand on a regular grid and each one independently topples with
/// collapse_prob. A standing pillar renders as a pillar_px square; a
/// collapsed one renders as a pillar_px-wide, fall_len_px-long rectangle
/// from the pillar base in a direction drawn uniformly from [0, 2pi), plus
/// debris_per_collapse small square fragments scattered uniformly over the
/// disc of radius fall_len_px around the base — the stand-in for the
/// fine-grained rubble real collapse leaves behind. Overlaps saturate at
/// hi_level, so masters are exactly two-valued.
///
/// Defaults follow the reference geometry at 3.3 nm/px: 60 nm pillars on a
/// 120 nm grid, 200 nm tall, 16 pillars per side.
struct PillarArraySpec {
    int grid_n = 16;
    int pitch_px = 36;
    int pillar_px = 18;
    int fall_len_px = 61;
    double collapse_prob = 0.75;
    int debris_per_collapse = 40;
    int frag_min_px = 2;
    int frag_max_px = 7;
    std::uint8_t hi_level = 130;
    std::uint8_t lo_level = 80;
    std::uint64_t seed = 0;

    /// Canvas side: the pillar grid plus a fall_len_px margin all around.
    int canvas_px() const { return grid_n * pitch_px + 2 * fall_len_px; }
};

/// Simulated repeated capture: one integer jitter translation per
/// measurement, i.i.d. Gaussian intensity noise per frame, frames averaged.
struct MeasurementModel {
    double noise_sigma = 12.0;
    int jitter_px = 2;
    int frames = 8;
    std::uint64_t seed = 0;
};

/// Collapse draw for one pillar (row-major pillar order).
struct PillarState {
    bool collapsed = false;
};

/// Stage-1 draws of generate_master: one Bernoulli(collapse_prob) per pillar
/// in row-major order. Exposed so tests can check collapse statistics
/// against the rendered image's stream.
std::vector<PillarState> sample_pillar_states(const PillarArraySpec& spec);

/// Renders the master pattern. Deterministic in spec.seed: stage 1 draws the
/// collapse flags, stage 2 walks collapsed pillars in row-major order and
/// draws fall direction then debris placements. A pixel belongs to a
/// rectangle when its center lies inside (closed edges).
GrayImage generate_master(const PillarArraySpec& spec);

/// Jitter translation drawn for a given measurement index (dx first, then dy).
std::pair<int, int> measurement_jitter(const MeasurementModel& model, int measurement_index);

/// One simulated capture: translate the master by the measurement's jitter
/// (clamp-to-edge fill), add Gaussian(0, noise_sigma) per frame (rounded
/// half-up, clamped to 0..255), then average the frames. Deterministic in
/// (model.seed, measurement_index).
GrayImage measure(const GrayImage& master, const MeasurementModel& model,
                  int measurement_index);

struct CorpusEntry {
    int sample_id = 0;
    int measurement_id = 0; // -1 marks the master row
    std::string path;       // relative to the corpus root, forward slashes
    bool is_master = false;
};

struct CorpusManifest {
    std::filesystem::path root;
    std::vector<CorpusEntry> entries;

    std::filesystem::path manifest_path() const { return root / "manifest.tsv"; }
};

/// Writes a corpus of n_samples x n_measurements PGMs plus each sample's
/// noise-free master and a manifest.tsv. Sample s derives its pattern seed
/// as spec.seed XOR s and its measurement-model seed as model.seed XOR s.
/// image_px > 0 center-crops every master to image_px x image_px before
/// measuring (0 keeps the full canvas). Re-runs produce a bit-identical tree.
CorpusManifest generate_corpus(int n_samples, int n_measurements,
                               const PillarArraySpec& spec, const MeasurementModel& model,
                               const std::filesystem::path& out_dir, int image_px = 0);

} // namespace artifact

#endif
