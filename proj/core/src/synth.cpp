#include "artifact/synth.hpp"
#include "artifact/errors.hpp"
#include "artifact/rng.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>

namespace artifact {

namespace {

void validate(const PillarArraySpec& spec) {
    if (spec.grid_n < 1 || spec.pitch_px < 1 || spec.pillar_px < 1 || spec.fall_len_px < 1)
        throw std::invalid_argument("PillarArraySpec: pixel counts must be >= 1");
    if (spec.pillar_px > spec.pitch_px)
        throw std::invalid_argument("PillarArraySpec: pillar_px must be <= pitch_px");
    if (spec.collapse_prob < 0.0 || spec.collapse_prob > 1.0)
        throw std::invalid_argument("PillarArraySpec: collapse_prob must be in [0, 1]");
    if (spec.debris_per_collapse < 0)
        throw std::invalid_argument("PillarArraySpec: debris_per_collapse must be >= 0");
    if (spec.frag_min_px < 1 || spec.frag_max_px < spec.frag_min_px)
        throw std::invalid_argument("PillarArraySpec: fragment size range invalid");
    if (spec.lo_level >= spec.hi_level)
        throw std::invalid_argument("PillarArraySpec: lo_level must be < hi_level");
}

void validate(const MeasurementModel& model) {
    if (model.noise_sigma < 0.0)
        throw std::invalid_argument("MeasurementModel: noise_sigma must be >= 0");
    if (model.jitter_px < 0)
        throw std::invalid_argument("MeasurementModel: jitter_px must be >= 0");
    if (model.frames < 1)
        throw std::invalid_argument("MeasurementModel: frames must be >= 1");
}

void fill_square(GrayImage& img, int x0, int y0, int side, std::uint8_t level) {
    const int xa = std::max(0, x0), xb = std::min(img.width(), x0 + side);
    const int ya = std::max(0, y0), yb = std::min(img.height(), y0 + side);
    for (int y = ya; y < yb; ++y) {
        std::uint8_t* row = img.row(y);
        for (int x = xa; x < xb; ++x)
            row[x] = level;
    }
}

// Fallen pillar: rectangle of width `width` extending `length` from the base
// center (cx, cy) along direction theta. A pixel is inside when its center
// satisfies 0 <= s <= length and |t| <= width/2 in rectangle coordinates.
void fill_fall_rect(GrayImage& img, double cx, double cy, double theta,
                    double length, double width, std::uint8_t level) {
    const double ux = std::cos(theta), uy = std::sin(theta);
    const double ext = length + width;
    const int xa = std::max(0, static_cast<int>(std::floor(cx - ext)));
    const int xb = std::min(img.width(), static_cast<int>(std::ceil(cx + ext)) + 1);
    const int ya = std::max(0, static_cast<int>(std::floor(cy - ext)));
    const int yb = std::min(img.height(), static_cast<int>(std::ceil(cy + ext)) + 1);
    const double half_w = width / 2.0;
    for (int y = ya; y < yb; ++y) {
        std::uint8_t* row = img.row(y);
        const double qy = y + 0.5 - cy;
        for (int x = xa; x < xb; ++x) {
            const double qx = x + 0.5 - cx;
            const double s = qx * ux + qy * uy;
            if (s < 0.0 || s > length) continue;
            const double t = -qx * uy + qy * ux;
            if (t < -half_w || t > half_w) continue;
            row[x] = level;
        }
    }
}

} // namespace

std::vector<PillarState> sample_pillar_states(const PillarArraySpec& spec) {
    validate(spec);
    rng::Stream stream(spec.seed);
    std::vector<PillarState> states(static_cast<std::size_t>(spec.grid_n) * spec.grid_n);
    for (auto& st : states)
        st.collapsed = stream.bernoulli(spec.collapse_prob);
    return states;
}

GrayImage generate_master(const PillarArraySpec& spec) {
    validate(spec);
    const int canvas = spec.canvas_px();
    GrayImage img(canvas, canvas, spec.lo_level);

    // Stage 1: collapse flags, row-major (same stream prefix as
    // sample_pillar_states). Stage 2: per collapsed pillar, fall direction
    // then debris placements.
    rng::Stream stream(spec.seed);
    std::vector<PillarState> states(static_cast<std::size_t>(spec.grid_n) * spec.grid_n);
    for (auto& st : states)
        st.collapsed = stream.bernoulli(spec.collapse_prob);

    const int inset = (spec.pitch_px - spec.pillar_px) / 2;
    for (int r = 0; r < spec.grid_n; ++r) {
        for (int c = 0; c < spec.grid_n; ++c) {
            const int ox = spec.fall_len_px + c * spec.pitch_px;
            const int oy = spec.fall_len_px + r * spec.pitch_px;
            if (!states[static_cast<std::size_t>(r) * spec.grid_n + c].collapsed) {
                fill_square(img, ox + inset, oy + inset, spec.pillar_px, spec.hi_level);
                continue;
            }
            const double cx = ox + spec.pitch_px / 2.0;
            const double cy = oy + spec.pitch_px / 2.0;
            const double theta = 2.0 * std::numbers::pi * stream.uniform();
            fill_fall_rect(img, cx, cy, theta, spec.fall_len_px, spec.pillar_px,
                           spec.hi_level);
            for (int f = 0; f < spec.debris_per_collapse; ++f) {
                const double radius = spec.fall_len_px * std::sqrt(stream.uniform());
                const double phi = 2.0 * std::numbers::pi * stream.uniform();
                const int side = stream.uniform_int(spec.frag_min_px, spec.frag_max_px);
                const int fx = static_cast<int>(std::floor(cx + radius * std::cos(phi) - side / 2.0));
                const int fy = static_cast<int>(std::floor(cy + radius * std::sin(phi) - side / 2.0));
                fill_square(img, fx, fy, side, spec.hi_level);
            }
        }
    }
    return img;
}

std::pair<int, int> measurement_jitter(const MeasurementModel& model, int measurement_index) {
    validate(model);
    rng::Stream stream(rng::measurement_seed(model.seed, measurement_index));
    const int dx = stream.uniform_int(-model.jitter_px, model.jitter_px);
    const int dy = stream.uniform_int(-model.jitter_px, model.jitter_px);
    return {dx, dy};
}

GrayImage measure(const GrayImage& master, const MeasurementModel& model,
                  int measurement_index) {
    validate(model);
    if (master.empty())
        throw std::invalid_argument("measure: empty master");

    rng::Stream stream(rng::measurement_seed(model.seed, measurement_index));
    const int dx = stream.uniform_int(-model.jitter_px, model.jitter_px);
    const int dy = stream.uniform_int(-model.jitter_px, model.jitter_px);
    const GrayImage base = translate_clamped(master, dx, dy);

    std::vector<GrayImage> frames;
    frames.reserve(static_cast<std::size_t>(model.frames));
    const std::size_t n = base.pixel_count();
    for (int f = 0; f < model.frames; ++f) {
        std::vector<std::uint8_t> px(n);
        const auto& src = base.pixels();
        for (std::size_t i = 0; i < n; ++i) {
            const double v = std::floor(src[i] + stream.gaussian(model.noise_sigma) + 0.5);
            px[i] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
        }
        frames.emplace_back(base.width(), base.height(), std::move(px));
    }
    return frame_average(frames);
}

CorpusManifest generate_corpus(int n_samples, int n_measurements,
                               const PillarArraySpec& spec, const MeasurementModel& model,
                               const std::filesystem::path& out_dir, int image_px) {
    validate(spec);
    validate(model);
    if (n_samples < 1 || n_measurements < 1)
        throw std::invalid_argument("generate_corpus: need at least one sample and measurement");
    if (image_px < 0 || (image_px > 0 && image_px > spec.canvas_px()))
        throw std::invalid_argument("generate_corpus: image_px exceeds the master canvas");

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw Error("cannot create " + out_dir.string() + ": " + ec.message());

    CorpusManifest manifest;
    manifest.root = out_dir;

    detail::parallel_for(static_cast<std::size_t>(n_samples), 0, [&](std::size_t si) {
        const int s = static_cast<int>(si);
        const std::filesystem::path sample_dir = out_dir / ("s" + std::to_string(s));
        std::error_code dir_ec;
        std::filesystem::create_directories(sample_dir, dir_ec);
        if (dir_ec)
            throw Error("cannot create " + sample_dir.string() + ": " + dir_ec.message());

        PillarArraySpec sample_spec = spec;
        sample_spec.seed = rng::master_seed(spec.seed, s);
        GrayImage master = generate_master(sample_spec);
        if (image_px > 0)
            master = center_crop(master, image_px);
        write_pgm_file(sample_dir / "master.pgm", master);

        MeasurementModel sample_model = model;
        sample_model.seed = model.seed ^ static_cast<std::uint64_t>(s);
        for (int m = 0; m < n_measurements; ++m)
            write_pgm_file(sample_dir / ("m" + std::to_string(m) + ".pgm"),
                           measure(master, sample_model, m));
    });

    std::string text = "sample_id\tmeasurement_id\tpath\trole\n";
    for (int s = 0; s < n_samples; ++s) {
        const std::string prefix = "s" + std::to_string(s) + "/";
        text += std::to_string(s) + "\t-1\t" + prefix + "master.pgm\tmaster\n";
        manifest.entries.push_back({s, -1, prefix + "master.pgm", true});
        for (int m = 0; m < n_measurements; ++m) {
            const std::string rel = prefix + "m" + std::to_string(m) + ".pgm";
            text += std::to_string(s) + "\t" + std::to_string(m) + "\t" + rel +
                    "\tmeasurement\n";
            manifest.entries.push_back({s, m, rel, false});
        }
    }

    const std::filesystem::path manifest_path = manifest.manifest_path();
    std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot open " + manifest_path.string() + " for writing");
    out << text;
    if (!out)
        throw Error("short write to " + manifest_path.string());
    return manifest;
}

} // namespace artifact
