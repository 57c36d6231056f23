#ifndef ARTIFACT_CLONE_HPP
#define ARTIFACT_CLONE_HPP

#include "artifact/image.hpp"

#include <cstdint>

namespace artifact {

/// Attacker model: the clone reproduces the pattern only up to k x k tiles
/// quantized to two intensity levels.
struct CloneParams {
    int k = 3;
    int threshold = 90;
    std::uint8_t hi_level = 130;
    std::uint8_t lo_level = 80;
};

/// Partitions the image into non-overlapping k x k tiles anchored at (0,0);
/// right/bottom edge tiles may be partial and average over their actual
/// pixels. A tile becomes hi_level when its mean exceeds the threshold
/// (strict, decided in exact integer arithmetic: sum > threshold * count),
/// else lo_level. Output dimensions equal input dimensions.
/// Throws TileLargerThanImage when k exceeds either dimension.
GrayImage make_virtual_clone(const GrayImage& img, const CloneParams& params);

/// Physical side length of a k x k tile in nanometres (k * nm_per_pixel).
double tile_physical_size_nm(int k, PixelScale scale = {});

/// tile_physical_size_nm rounded to the nearest integer nanometre for display.
long tile_physical_size_nm_rounded(int k, PixelScale scale = {});

} // namespace artifact

#endif
