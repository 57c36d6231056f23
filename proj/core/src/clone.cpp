#include "artifact/clone.hpp"
#include "artifact/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace artifact {

GrayImage make_virtual_clone(const GrayImage& img, const CloneParams& params) {
    if (params.k < 1)
        throw std::invalid_argument("make_virtual_clone: k must be >= 1");
    if (params.lo_level >= params.hi_level)
        throw std::invalid_argument("make_virtual_clone: lo_level must be < hi_level");
    if (params.k > img.width() || params.k > img.height())
        throw TileLargerThanImage("make_virtual_clone: k " + std::to_string(params.k) +
                                  " exceeds image " + std::to_string(img.width()) + "x" +
                                  std::to_string(img.height()));

    const int w = img.width(), h = img.height(), k = params.k;
    GrayImage out(w, h);
    for (int ty = 0; ty < h; ty += k) {
        const int th = std::min(k, h - ty);
        for (int tx = 0; tx < w; tx += k) {
            const int tw = std::min(k, w - tx);
            std::int64_t sum = 0;
            for (int y = ty; y < ty + th; ++y) {
                const std::uint8_t* row = img.row(y);
                for (int x = tx; x < tx + tw; ++x)
                    sum += row[x];
            }
            // mean > threshold, decided without division: sum > T * count
            const std::int64_t count = static_cast<std::int64_t>(tw) * th;
            const std::uint8_t level =
                sum > static_cast<std::int64_t>(params.threshold) * count ? params.hi_level
                                                                          : params.lo_level;
            for (int y = ty; y < ty + th; ++y) {
                std::uint8_t* row = out.row(y);
                for (int x = tx; x < tx + tw; ++x)
                    row[x] = level;
            }
        }
    }
    return out;
}

double tile_physical_size_nm(int k, PixelScale scale) {
    if (k < 1)
        throw std::invalid_argument("tile_physical_size_nm: k must be >= 1");
    return k * scale.nm_per_pixel;
}

long tile_physical_size_nm_rounded(int k, PixelScale scale) {
    return std::lround(tile_physical_size_nm(k, scale));
}

} // namespace artifact
