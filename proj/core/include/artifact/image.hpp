#ifndef ARTIFACT_IMAGE_HPP
#define ARTIFACT_IMAGE_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace artifact {

/// 8-bit grayscale raster, row-major. The universal currency of the pipeline.
///
/// Pixel (x, y) lives at pixels()[y * width() + x]; x grows rightwards,
/// y grows downwards. Images are immutable values in practice: every
/// operation returns a new image, so sharing across threads is safe.
class GrayImage {
public:
    GrayImage() = default; // empty placeholder (0x0); operations never produce one

    GrayImage(int width, int height, std::uint8_t fill = 0);
    GrayImage(int width, int height, std::vector<std::uint8_t> pixels);

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return pixels_.empty(); }
    std::size_t pixel_count() const { return pixels_.size(); }

    std::uint8_t operator()(int x, int y) const {
        return pixels_[static_cast<std::size_t>(y) * width_ + x];
    }
    std::uint8_t& operator()(int x, int y) {
        return pixels_[static_cast<std::size_t>(y) * width_ + x];
    }
    const std::uint8_t* row(int y) const {
        return pixels_.data() + static_cast<std::size_t>(y) * width_;
    }
    std::uint8_t* row(int y) {
        return pixels_.data() + static_cast<std::size_t>(y) * width_;
    }
    const std::vector<std::uint8_t>& pixels() const { return pixels_; }

    bool operator==(const GrayImage&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

/// Physical calibration of the raster.
struct PixelScale {
    double nm_per_pixel = 3.3;
};

/// Decodes a binary PGM ("P5", maxval <= 255). Comment lines are accepted
/// anywhere in the header after the magic. Bytes beyond the payload are
/// ignored. Throws MalformedHeader / UnsupportedMaxval / TruncatedPayload.
GrayImage load_pgm(std::span<const std::uint8_t> bytes);

/// Canonical binary PGM encoding: "P5\n<w> <h>\n255\n" + raw pixels.
/// load_pgm(save_pgm(img)) == img for every image.
std::vector<std::uint8_t> save_pgm(const GrayImage& img);

GrayImage read_pgm_file(const std::filesystem::path& path);
void write_pgm_file(const std::filesystem::path& path, const GrayImage& img);

/// size x size window whose top-left corner is
/// (floor((width-size)/2), floor((height-size)/2)). Throws CropTooLarge.
GrayImage center_crop(const GrayImage& img, int size);

/// Square median filter with clamp-to-edge borders: every output pixel is
/// the median of its window x window neighborhood, with out-of-range
/// coordinates clamped to the nearest edge so output dimensions equal input
/// dimensions. window must be odd (window == 1 is the identity).
GrayImage median_filter(const GrayImage& img, int window);

/// Per-pixel arithmetic mean of the frames, rounded half-up and clamped to
/// 0..255. All frames must share dimensions.
GrayImage frame_average(std::span<const GrayImage> frames);

/// Integer translation with clamp-to-edge fill: out(x, y) = in(clamp(x-dx),
/// clamp(y-dy)). Positive dx moves content rightwards, positive dy downwards.
GrayImage translate_clamped(const GrayImage& img, int dx, int dy);

} // namespace artifact

#endif
