#include "artifact/errors.hpp"
#include "artifact/rng.hpp"
#include "artifact/similarity.hpp"
#include "artifact/synth.hpp"

#include <doctest.h>

#include "oracles.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

using namespace artifact;

namespace {

BitMask full_mask(int w, int h) {
    BitMask m;
    m.width = w;
    m.height = h;
    m.bits.assign(static_cast<std::size_t>(w) * h, 1);
    return m;
}

// small seeded two-level pattern, non-constant
GrayImage two_level_pattern(std::uint64_t seed, int w, int h) {
    rng::Stream stream(seed);
    std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h);
    for (auto& v : px)
        v = stream.bernoulli(0.5) ? 130 : 80;
    return GrayImage(w, h, std::move(px));
}

} // namespace

TEST_CASE("build_mask follows the strict disjunction") {
    const GrayImage a(2, 1, std::vector<std::uint8_t>{100, 90});
    const GrayImage b(2, 1, std::vector<std::uint8_t>{50, 90});
    const auto mask = build_mask(a, b, 90);
    CHECK(mask(0, 0) == 1); // a exceeds T
    CHECK(mask(1, 0) == 0); // both exactly T: strict

    const GrayImage hi(3, 3, 130), lo(3, 3, 80);
    const auto all_one = build_mask(hi, lo, 90);
    for (const auto bit : all_one.bits)
        CHECK(bit == 1);

    const GrayImage at_t(3, 3, 90);
    const auto all_zero = build_mask(at_t, at_t, 90);
    for (const auto bit : all_zero.bits)
        CHECK(bit == 0);

    CHECK_THROWS_AS(build_mask(hi, GrayImage(2, 3, 0), 90), DimensionMismatch);
}

TEST_CASE("raising the threshold only clears mask bits") {
    rng::Stream stream(31);
    const auto a = oracles::random_image(stream, 12, 12);
    const auto b = oracles::random_image(stream, 12, 12);
    const auto loose = build_mask(a, b, 60);
    const auto tight = build_mask(a, b, 140);
    for (std::size_t i = 0; i < loose.bits.size(); ++i)
        CHECK(tight.bits[i] <= loose.bits[i]);
}

TEST_CASE("masked_pearson on exact cases") {
    const auto a = two_level_pattern(3, 8, 8);
    const auto mask = full_mask(8, 8);

    CHECK(*masked_pearson(a, a, mask) == doctest::Approx(1.0).epsilon(1e-12));

    // affine negation gives exactly -1
    std::vector<std::uint8_t> neg(a.pixels().size());
    for (std::size_t i = 0; i < neg.size(); ++i)
        neg[i] = static_cast<std::uint8_t>(255 - a.pixels()[i]);
    const GrayImage b(8, 8, std::move(neg));
    CHECK(*masked_pearson(a, b, mask) == doctest::Approx(-1.0).epsilon(1e-12));

    // zero variance is signalled, not thrown
    const GrayImage flat(8, 8, 100);
    CHECK(!masked_pearson(flat, a, mask).has_value());

    // an all-zero mask zeroes both images
    BitMask none = full_mask(8, 8);
    std::fill(none.bits.begin(), none.bits.end(), 0);
    CHECK(!masked_pearson(a, a, none).has_value());
}

TEST_CASE("masked_pearson matches the double-loop oracle") {
    rng::Stream stream(12345);
    for (int it = 0; it < 200; ++it) {
        const auto a = oracles::random_image(stream, 8, 8);
        const auto b = oracles::random_image(stream, 8, 8);
        const auto mask = oracles::random_mask(stream, 8, 8);
        const auto got = masked_pearson(a, b, mask);
        const auto expected = oracles::naive_masked_pearson(a, b, mask);
        REQUIRE(got.has_value() == expected.has_value());
        if (got)
            CHECK(*got == doctest::Approx(*expected).epsilon(1e-12));
    }
}

TEST_CASE("masked_stats mode restricts statistics to the mask support") {
    rng::Stream stream(55);
    const auto a = oracles::random_image(stream, 8, 8);
    const auto b = oracles::random_image(stream, 8, 8);
    const auto mask = oracles::random_mask(stream, 8, 8);
    const auto all_px = masked_pearson(a, b, mask, false);
    const auto support = masked_pearson(a, b, mask, true);
    REQUIRE(all_px.has_value());
    REQUIRE(support.has_value());
    CHECK(*all_px != *support); // different statistics in general
}

TEST_CASE("shift_offsets enumerates 21 axis offsets by default") {
    const auto axis = shift_offsets(5, false);
    CHECK(axis.size() == 21);
    CHECK(axis[0] == std::pair{0, 0});
    for (const auto& [dx, dy] : axis)
        CHECK((dx == 0 || dy == 0));

    const auto grid = shift_offsets(5, true);
    CHECK(grid.size() == 121);
}

TEST_CASE("shifted_similarity self-match and shift recovery") {
    const auto master = [] {
        PillarArraySpec spec;
        spec.grid_n = 3;
        spec.seed = 9;
        return generate_master(spec);
    }();

    const auto self = shifted_similarity(master, master);
    CHECK(self.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(self.dx == 0);
    CHECK(self.dy == 0);
    CHECK(!self.degenerate);

    for (const int d : {1, 3, 5}) {
        const auto score = shifted_similarity(master, translate_clamped(master, d, 0));
        CHECK(score.value == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(score.dx) == d);
        CHECK(score.dy == 0);
    }
    const auto down = shifted_similarity(master, translate_clamped(master, 0, 4));
    CHECK(down.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(down.dy) == 4);
}

TEST_CASE("negated pattern clamps to zero") {
    const auto a = two_level_pattern(17, 16, 16);
    // anti-monotone two-level map keeping the union mask all-one:
    // 130 -> 100 and 80 -> 180, so R is exactly -1 at the null offset
    std::vector<std::uint8_t> swapped(a.pixels().size());
    for (std::size_t i = 0; i < swapped.size(); ++i)
        swapped[i] = a.pixels()[i] == 130 ? 100 : 180;
    const GrayImage b(16, 16, std::move(swapped));
    const auto raw = masked_pearson(a, b, build_mask(a, b, 90));
    REQUIRE(raw.has_value());
    CHECK(*raw == doctest::Approx(-1.0).epsilon(1e-12));
    const auto score = shifted_similarity(a, b, MatchParams{90, 0, false, false});
    CHECK(score.value == 0.0);
    CHECK(!score.degenerate);
}

TEST_CASE("similarity is symmetric, bounded and flags degenerate input") {
    rng::Stream stream(23);
    MatchParams params;
    params.max_shift = 3;
    for (int it = 0; it < 10; ++it) {
        const auto a = oracles::random_image(stream, 24, 24);
        const auto b = oracles::random_image(stream, 24, 24);
        const auto ab = shifted_similarity(a, b, params);
        const auto ba = shifted_similarity(b, a, params);
        CHECK(ab.value == ba.value); // bit-identical
        CHECK(ab.value >= 0.0);
        CHECK(ab.value <= 1.0);
        CHECK(std::abs(ab.dx) <= params.max_shift);
        CHECK(std::abs(ab.dy) <= params.max_shift);
    }

    const GrayImage flat(16, 16, 80);
    const auto degenerate = shifted_similarity(flat, flat);
    CHECK(degenerate.value == 0.0);
    CHECK(degenerate.degenerate);
}

TEST_CASE("full-grid mode recovers diagonal translations") {
    const auto a = two_level_pattern(41, 32, 32);
    const auto b = translate_clamped(a, 2, 2);

    MatchParams axis_only;
    const auto axis_score = shifted_similarity(a, b, axis_only);
    CHECK(axis_score.value < 1.0 - 1e-6);

    MatchParams grid = axis_only;
    grid.full_grid = true;
    const auto grid_score = shifted_similarity(a, b, grid);
    CHECK(grid_score.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(grid_score.dx) == 2);
    CHECK(std::abs(grid_score.dy) == 2);
}

TEST_CASE("shifted_similarity input validation") {
    const GrayImage a(11, 11, 0), b(12, 11, 0);
    CHECK_THROWS_AS(shifted_similarity(a, b), DimensionMismatch);
    // 10 <= 2 * 5: too small for the default shift radius
    const GrayImage small(10, 10, 0);
    CHECK_THROWS_AS(shifted_similarity(small, small), ImageTooSmall);
    CHECK_NOTHROW(shifted_similarity(a, GrayImage(11, 11, 1)));
}

TEST_CASE("translation beyond the shift budget scores below 1") {
    for (const std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        PillarArraySpec spec;
        spec.grid_n = 3;
        spec.seed = seed;
        const auto master = generate_master(spec);
        const auto score = shifted_similarity(master, translate_clamped(master, 6, 0));
        CHECK(score.value < 0.999);
    }
}
