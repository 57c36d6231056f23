#include "artifact/image.hpp"
#include "artifact/errors.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

namespace artifact {

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("GrayImage: dimensions must be >= 1");
    pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("GrayImage: dimensions must be >= 1");
    if (pixels_.size() != static_cast<std::size_t>(width) * height)
        throw std::invalid_argument("GrayImage: pixel count does not match dimensions");
}

namespace {

bool is_ws(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

// Skips whitespace and '#' comments; returns false if the input ran out.
bool skip_ws_and_comments(std::span<const std::uint8_t> bytes, std::size_t& pos) {
    while (pos < bytes.size()) {
        if (is_ws(bytes[pos])) {
            ++pos;
        } else if (bytes[pos] == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else {
            return true;
        }
    }
    return false;
}

long parse_header_int(std::span<const std::uint8_t> bytes, std::size_t& pos) {
    if (!skip_ws_and_comments(bytes, pos))
        throw MalformedHeader("PGM: header ended before all fields were read");
    if (bytes[pos] < '0' || bytes[pos] > '9')
        throw MalformedHeader("PGM: expected a decimal header field");
    long value = 0;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
        value = value * 10 + (bytes[pos] - '0');
        if (value > (1L << 31))
            throw MalformedHeader("PGM: header field out of range");
        ++pos;
    }
    return value;
}

} // namespace

GrayImage load_pgm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
        throw MalformedHeader("PGM: missing P5 magic");
    std::size_t pos = 2;

    const long width = parse_header_int(bytes, pos);
    const long height = parse_header_int(bytes, pos);
    const long maxval = parse_header_int(bytes, pos);
    if (width < 1 || height < 1)
        throw MalformedHeader("PGM: dimensions must be >= 1");
    if (width * height > (1L << 31))
        throw MalformedHeader("PGM: image too large");
    if (maxval < 1)
        throw MalformedHeader("PGM: maxval must be >= 1");
    if (maxval > 255)
        throw UnsupportedMaxval("PGM: maxval " + std::to_string(maxval) + " exceeds 255");

    // exactly one whitespace byte separates the header from the payload
    if (pos >= bytes.size() || !is_ws(bytes[pos]))
        throw MalformedHeader("PGM: missing whitespace after maxval");
    ++pos;

    const std::size_t need = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bytes.size() - pos < need)
        throw TruncatedPayload("PGM: payload has " + std::to_string(bytes.size() - pos) +
                               " bytes, expected " + std::to_string(need));
    std::vector<std::uint8_t> pixels(bytes.begin() + pos, bytes.begin() + pos + need);
    return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

std::vector<std::uint8_t> save_pgm(const GrayImage& img) {
    const std::string header = "P5\n" + std::to_string(img.width()) + " " +
                               std::to_string(img.height()) + "\n255\n";
    std::vector<std::uint8_t> out;
    out.reserve(header.size() + img.pixel_count());
    out.insert(out.end(), header.begin(), header.end());
    out.insert(out.end(), img.pixels().begin(), img.pixels().end());
    return out;
}

GrayImage read_pgm_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    try {
        return load_pgm(bytes);
    } catch (const Error& e) {
        throw MalformedHeader(path.string() + ": " + e.what());
    }
}

void write_pgm_file(const std::filesystem::path& path, const GrayImage& img) {
    const auto bytes = save_pgm(img);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw Error("short write to " + path.string());
}

GrayImage center_crop(const GrayImage& img, int size) {
    if (size < 1)
        throw CropTooLarge("center_crop: size must be >= 1");
    if (size > img.width() || size > img.height())
        throw CropTooLarge("center_crop: size " + std::to_string(size) + " exceeds " +
                           std::to_string(img.width()) + "x" + std::to_string(img.height()));
    const int ox = (img.width() - size) / 2;
    const int oy = (img.height() - size) / 2;
    GrayImage out(size, size);
    for (int y = 0; y < size; ++y)
        std::memcpy(out.row(y), img.row(oy + y) + ox, static_cast<std::size_t>(size));
    return out;
}

GrayImage median_filter(const GrayImage& img, int window) {
    if (window < 1 || window % 2 == 0)
        throw EvenWindow("median_filter: window must be odd and >= 1, got " +
                         std::to_string(window));
    if (window == 1)
        return img;

    const int w = img.width(), h = img.height();
    const int r = window / 2;

    // Clamp-to-edge padding materialized once; afterwards every window is a
    // plain rectangle and the sliding histogram needs no boundary logic.
    const int pw = w + 2 * r, ph = h + 2 * r;
    std::vector<std::uint8_t> pad(static_cast<std::size_t>(pw) * ph);
    for (int y = 0; y < ph; ++y) {
        const int sy = std::clamp(y - r, 0, h - 1);
        std::uint8_t* dst = pad.data() + static_cast<std::size_t>(y) * pw;
        const std::uint8_t* src = img.row(sy);
        for (int x = 0; x < r; ++x) dst[x] = src[0];
        std::memcpy(dst + r, src, static_cast<std::size_t>(w));
        for (int x = 0; x < r; ++x) dst[pw - r + x] = src[w - 1];
    }

    GrayImage out(w, h);
    const int count = window * window;
    const int median_rank = count / 2; // 0-based rank of the median (count is odd)
    std::array<int, 256> hist{};

    for (int y = 0; y < h; ++y) {
        hist.fill(0);
        for (int wy = 0; wy < window; ++wy) {
            const std::uint8_t* prow = pad.data() + static_cast<std::size_t>(y + wy) * pw;
            for (int wx = 0; wx < window; ++wx)
                ++hist[prow[wx]];
        }
        std::uint8_t* orow = out.row(y);
        for (int x = 0; x < w; ++x) {
            if (x > 0) {
                // slide window right: drop column x-1, add column x-1+window
                for (int wy = 0; wy < window; ++wy) {
                    const std::uint8_t* prow = pad.data() + static_cast<std::size_t>(y + wy) * pw;
                    --hist[prow[x - 1]];
                    ++hist[prow[x - 1 + window]];
                }
            }
            int seen = 0;
            int v = 0;
            for (;; ++v) {
                seen += hist[v];
                if (seen > median_rank) break;
            }
            orow[x] = static_cast<std::uint8_t>(v);
        }
    }
    return out;
}

GrayImage frame_average(std::span<const GrayImage> frames) {
    if (frames.empty())
        throw EmptyFrameList("frame_average: no frames");
    const int w = frames[0].width(), h = frames[0].height();
    for (const auto& f : frames)
        if (f.width() != w || f.height() != h)
            throw DimensionMismatch("frame_average: frame dimensions differ");

    const std::size_t n = frames[0].pixel_count();
    std::vector<std::int64_t> acc(n, 0);
    for (const auto& f : frames) {
        const auto& px = f.pixels();
        for (std::size_t i = 0; i < n; ++i)
            acc[i] += px[i];
    }
    const std::int64_t m = static_cast<std::int64_t>(frames.size());
    std::vector<std::uint8_t> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t v = (2 * acc[i] + m) / (2 * m); // mean rounded half-up
        out[i] = static_cast<std::uint8_t>(std::clamp<std::int64_t>(v, 0, 255));
    }
    return GrayImage(w, h, std::move(out));
}

GrayImage translate_clamped(const GrayImage& img, int dx, int dy) {
    const int w = img.width(), h = img.height();
    GrayImage out(w, h);
    for (int y = 0; y < h; ++y) {
        const int sy = std::clamp(y - dy, 0, h - 1);
        const std::uint8_t* src = img.row(sy);
        std::uint8_t* dst = out.row(y);
        for (int x = 0; x < w; ++x)
            dst[x] = src[std::clamp(x - dx, 0, w - 1)];
    }
    return out;
}

} // namespace artifact
