#include "artifact/similarity.hpp"
#include "artifact/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

namespace artifact {

BitMask build_mask(const GrayImage& a, const GrayImage& b, int threshold) {
    if (a.width() != b.width() || a.height() != b.height())
        throw DimensionMismatch("build_mask: image dimensions differ");
    BitMask mask;
    mask.width = a.width();
    mask.height = a.height();
    mask.bits.resize(a.pixel_count());
    const auto& pa = a.pixels();
    const auto& pb = b.pixels();
    for (std::size_t i = 0; i < pa.size(); ++i)
        mask.bits[i] = (pa[i] > threshold || pb[i] > threshold) ? 1 : 0;
    return mask;
}

std::optional<double> masked_pearson(const GrayImage& a, const GrayImage& b,
                                     const BitMask& mask, bool masked_stats) {
    if (a.width() != b.width() || a.height() != b.height() ||
        a.width() != mask.width || a.height() != mask.height)
        throw DimensionMismatch("masked_pearson: dimensions differ");

    const auto& pa = a.pixels();
    const auto& pb = b.pixels();
    const auto& m = mask.bits;
    const std::size_t n = pa.size();

    // Masked pixel sums are exact in 64-bit integers.
    std::int64_t sa = 0, sb = 0, support = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i]) {
            sa += pa[i];
            sb += pb[i];
            ++support;
        }
    }

    const double denom_count = masked_stats ? static_cast<double>(support)
                                            : static_cast<double>(n);
    if (masked_stats && support == 0)
        return std::nullopt;
    const double mean_a = static_cast<double>(sa) / denom_count;
    const double mean_b = static_cast<double>(sb) / denom_count;

    double num = 0.0, var_a = 0.0, var_b = 0.0;
    if (masked_stats) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!m[i]) continue;
            const double da = pa[i] - mean_a;
            const double db = pb[i] - mean_b;
            num += da * db;
            var_a += da * da;
            var_b += db * db;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double da = (m[i] ? pa[i] : 0) - mean_a;
            const double db = (m[i] ? pb[i] : 0) - mean_b;
            num += da * db;
            var_a += da * da;
            var_b += db * db;
        }
    }

    if (var_a == 0.0 || var_b == 0.0)
        return std::nullopt;
    return num / (std::sqrt(var_a) * std::sqrt(var_b));
}

std::vector<std::pair<int, int>> shift_offsets(int max_shift, bool full_grid) {
    std::vector<std::pair<int, int>> offsets;
    offsets.emplace_back(0, 0);
    if (full_grid) {
        for (int d = 1; d <= max_shift; ++d)
            for (int dy = -d; dy <= d; ++dy)
                for (int dx = -d; dx <= d; ++dx)
                    if (std::max(std::abs(dx), std::abs(dy)) == d)
                        offsets.emplace_back(dx, dy);
    } else {
        for (int d = 1; d <= max_shift; ++d) {
            offsets.emplace_back(-d, 0);
            offsets.emplace_back(d, 0);
            offsets.emplace_back(0, -d);
            offsets.emplace_back(0, d);
        }
    }
    return offsets;
}

namespace {

GrayImage crop_rect(const GrayImage& img, int x0, int y0, int w, int h) {
    GrayImage out(w, h);
    for (int y = 0; y < h; ++y)
        std::memcpy(out.row(y), img.row(y0 + y) + x0, static_cast<std::size_t>(w));
    return out;
}

} // namespace

SimilarityScore shifted_similarity(const GrayImage& a, const GrayImage& b,
                                   const MatchParams& params) {
    if (a.width() != b.width() || a.height() != b.height())
        throw DimensionMismatch("shifted_similarity: image dimensions differ");
    if (params.max_shift < 0)
        throw ImageTooSmall("shifted_similarity: max_shift must be >= 0");
    if (a.width() <= 2 * params.max_shift || a.height() <= 2 * params.max_shift)
        throw ImageTooSmall("shifted_similarity: image " + std::to_string(a.width()) + "x" +
                            std::to_string(a.height()) + " too small for shift radius " +
                            std::to_string(params.max_shift));

    const int w = a.width(), h = a.height();
    SimilarityScore best;
    bool all_degenerate = true;

    for (const auto& [dx, dy] : shift_offsets(params.max_shift, params.full_grid)) {
        // Comparing a(x,y) against b(x-dx, y-dy) on the overlap of both domains.
        const int x0 = std::max(0, dx), x1 = std::min(w, w + dx);
        const int y0 = std::max(0, dy), y1 = std::min(h, h + dy);
        const GrayImage sub_a = crop_rect(a, x0, y0, x1 - x0, y1 - y0);
        const GrayImage sub_b = crop_rect(b, x0 - dx, y0 - dy, x1 - x0, y1 - y0);

        const BitMask mask = build_mask(sub_a, sub_b, params.threshold);
        const auto r = masked_pearson(sub_a, sub_b, mask, params.masked_stats);
        if (!r)
            continue; // degenerate offset contributes score 0
        all_degenerate = false;
        const double value = std::clamp(*r, 0.0, 1.0);
        if (value > best.value) {
            best.value = value;
            best.dx = dx;
            best.dy = dy;
        }
    }

    best.degenerate = all_degenerate;
    return best;
}

} // namespace artifact
