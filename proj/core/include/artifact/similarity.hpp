#ifndef ARTIFACT_SIMILARITY_HPP
#define ARTIFACT_SIMILARITY_HPP

#include "artifact/image.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace artifact {

/// Per-pixel region-of-interest: bit (x, y) is 1 where at least one of the
/// two images compared exceeds the intensity threshold.
struct BitMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits; // row-major, values 0/1

    std::uint8_t operator()(int x, int y) const {
        return bits[static_cast<std::size_t>(y) * width + x];
    }
};

struct MatchParams {
    int threshold = 90;       // mask intensity threshold
    int max_shift = 5;        // shift-search radius in pixels
    bool full_grid = false;   // search the full (2d+1)^2 offset grid instead of axis offsets
    bool masked_stats = false; // restrict Pearson statistics to mask-support pixels
};

/// Clamped, shift-maximized correlation. `value` is in [0, 1]; `dx`, `dy` is
/// the translation applied to B that produced it; `degenerate` is set when
/// every offset had a zero-variance comparison.
struct SimilarityScore {
    double value = 0.0;
    int dx = 0;
    int dy = 0;
    bool degenerate = false;
};

/// Mask bit is 1 exactly where a(x,y) > threshold or b(x,y) > threshold
/// (strict). Throws DimensionMismatch.
BitMask build_mask(const GrayImage& a, const GrayImage& b, int threshold);

/// Pearson correlation of the masked images (pixels outside the mask are
/// zeroed; means run over all pixels). Returns nullopt when either masked
/// image has zero variance. With masked_stats, means and sums are restricted
/// to mask-support pixels instead.
///
/// Accumulation is double precision in row-major order, so results are
/// bit-reproducible across runs and thread counts.
std::optional<double> masked_pearson(const GrayImage& a, const GrayImage& b,
                                     const BitMask& mask, bool masked_stats = false);

/// The offset search order: (0,0) first, then per distance d = 1..max_shift
/// the axis offsets (-d,0), (d,0), (0,-d), (0,d). With full_grid, rings of
/// Chebyshev distance d in (dy, dx)-lexicographic order. Ties keep the
/// earliest offset.
std::vector<std::pair<int, int>> shift_offsets(int max_shift, bool full_grid);

/// For each offset: translate B, restrict both images to the overlapping
/// rectangle, rebuild the mask there, compute masked_pearson, clamp negative
/// correlations to 0, and return the maximum with its offset. Degenerate
/// offsets contribute 0. Requires both dimensions > 2 * max_shift.
SimilarityScore shifted_similarity(const GrayImage& a, const GrayImage& b,
                                   const MatchParams& params = {});

} // namespace artifact

#endif
