#include <gtest/gtest.h>

#include <fstream>
#include <map>

#include "support.hpp"
#include "vesselforge/error.hpp"
#include "vesselforge/image_io.hpp"
#include "vesselforge/texture.hpp"

namespace vesselforge {
namespace {

using testing::TempDir;

Image8 patterned(int w, int h, int c, int salt) {
    Image8 img(w, h, c);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int ch = 0; ch < c; ++ch) img.at(x, y, ch) = static_cast<std::uint8_t>((x * 7 + y * 13 + ch * 50 + salt) % 256);
    return img;
}

void write_png(const std::filesystem::path& p, const Image8& img) {
    std::filesystem::create_directories(p.parent_path());
    write_bytes(p, encode_png(img));
}

TEST(OpenPool, IndexesClassesAndFiles) {
    TempDir dir;
    for (int i = 0; i < 3; ++i) write_png(dir / ("a/" + std::to_string(i) + ".png"), patterned(8, 8, 3, i));
    for (int i = 0; i < 2; ++i) write_png(dir / ("b/" + std::to_string(i) + ".png"), patterned(8, 8, 3, 10 + i));
    const TexturePool pool = open_pool(dir.path());
    ASSERT_EQ(pool.classes.size(), 2u);
    EXPECT_EQ(pool.classes[0].id, "a");
    EXPECT_EQ(pool.classes[1].id, "b");
    EXPECT_EQ(pool.file_count(), 5u);
    EXPECT_TRUE(std::is_sorted(pool.classes[0].files.begin(), pool.classes[0].files.end()));
}

TEST(OpenPool, SingleClassIsConfigError) {
    TempDir dir;
    write_png(dir / "only/x.png", patterned(4, 4, 3, 0));
    EXPECT_THROW(open_pool(dir.path()), ConfigError);
}

TEST(OpenPool, EmptyClassesIgnored) {
    TempDir dir;
    write_png(dir / "a/0.png", patterned(4, 4, 3, 0));
    write_png(dir / "a/1.png", patterned(4, 4, 3, 1));
    std::filesystem::create_directories(dir / "b");
    write_png(dir / "c/0.png", patterned(4, 4, 3, 2));
    std::ofstream(dir / "c/readme.txt") << "not an image";
    const TexturePool pool = open_pool(dir.path());
    ASSERT_EQ(pool.classes.size(), 2u);
    EXPECT_EQ(pool.classes[1].id, "c");
    EXPECT_EQ(pool.classes[1].files.size(), 1u);
}

TEST(OpenPool, MissingRootIsIoError) {
    EXPECT_THROW(open_pool("/nonexistent/vesselforge/pool"), IoError);
}

TEST(CropResize, IdentityWhenCropEqualsTarget) {
    const Image8 src = patterned(16, 16, 3, 5);
    EXPECT_EQ(crop_resize(src, 0, 0, 16, 16, 16), src);
}

TEST(CropResize, UpscaleOfConstantIsConstant) {
    const Image8 src(10, 10, 1, 77);
    const Image8 out = crop_resize(src, 2, 3, 5, 13, 9);
    EXPECT_EQ(out.width(), 13);
    EXPECT_EQ(out.height(), 9);
    for (auto v : out.data()) EXPECT_EQ(v, 77);
}

TEST(CropResize, HalfPixelCentersOnTwoToOneDownscale) {
    // Downscaling 2x samples exactly between source pixel pairs.
    Image8 src(4, 4, 1);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) src.at(x, y) = static_cast<std::uint8_t>(x * 10 + y * 50);
    const Image8 out = crop_resize(src, 0, 0, 4, 2, 2);
    EXPECT_EQ(out.at(0, 0), 30);   // mean of 0, 10, 50, 60
    EXPECT_EQ(out.at(1, 0), 50);   // mean of 20, 30, 70, 80
    EXPECT_EQ(out.at(0, 1), 130);  // mean of 100, 110, 150, 160
    EXPECT_EQ(out.at(1, 1), 150);
}

TEST(CropResize, RejectsBadRectangle) {
    const Image8 src(8, 8, 1);
    EXPECT_THROW(crop_resize(src, 4, 4, 5, 8, 8), DomainError);
    EXPECT_THROW(crop_resize(src, 0, 0, 0, 8, 8), DomainError);
}

TEST(DrawTexturePair, ClassesAlwaysDistinct) {
    TempDir dir;
    write_png(dir / "a/0.png", patterned(12, 12, 3, 1));
    write_png(dir / "b/0.png", patterned(12, 12, 3, 2));
    const TexturePool pool = open_pool(dir.path());
    RandomStream rng(3);
    for (int i = 0; i < 200; ++i) {
        const TexturePair pair = draw_texture_pair(pool, 6, 6, 3, rng);
        ASSERT_NE(pair.foreground.identity.substr(0, 2), pair.background.identity.substr(0, 2));
        ASSERT_EQ(pair.foreground.tile.width(), 6);
        ASSERT_EQ(pair.background.tile.height(), 6);
    }
}

TEST(DrawTexturePair, FullCropOfTargetSizedSourceIsIdentity) {
    TempDir dir;
    const Image8 a = patterned(20, 20, 3, 1);
    const Image8 b = patterned(20, 20, 3, 99);
    write_png(dir / "a/0.png", a);
    write_png(dir / "b/0.png", b);
    const TexturePool pool = open_pool(dir.path());
    RandomStream rng(8);
    const TexturePair pair = draw_texture_pair(pool, 20, 20, 3, rng, 1.0);
    const Image8& fg_src = pair.foreground.identity == "a/0.png" ? a : b;
    const Image8& bg_src = pair.background.identity == "a/0.png" ? a : b;
    EXPECT_EQ(pair.foreground.tile, fg_src);
    EXPECT_EQ(pair.background.tile, bg_src);
}

TEST(DrawTexturePair, DeterministicForFixedSeed) {
    TempDir dir;
    for (int c = 0; c < 4; ++c)
        for (int i = 0; i < 3; ++i)
            write_png(dir / ("c" + std::to_string(c) + "/" + std::to_string(i) + ".png"),
                      patterned(30 + 3 * i, 25 + c, 3, c * 10 + i));
    const TexturePool pool = open_pool(dir.path());
    RandomStream r1(42), r2(42);
    const TexturePair p1 = draw_texture_pair(pool, 17, 11, 3, r1);
    const TexturePair p2 = draw_texture_pair(pool, 17, 11, 3, r2);
    EXPECT_EQ(p1.foreground.tile, p2.foreground.tile);
    EXPECT_EQ(p1.background.tile, p2.background.tile);
    EXPECT_EQ(p1.foreground.identity, p2.foreground.identity);
}

TEST(DrawTexturePair, GrayscaleUsesBt601Luma) {
    TempDir dir;
    write_png(dir / "a/0.png", Image8(8, 8, 3, 0));
    Image8 b(8, 8, 3);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
            b.at(x, y, 0) = 200;
            b.at(x, y, 1) = 100;
            b.at(x, y, 2) = 50;
        }
    write_png(dir / "b/0.png", b);
    const TexturePool pool = open_pool(dir.path());
    RandomStream rng(1);
    const TexturePair pair = draw_texture_pair(pool, 4, 4, 1, rng);
    const auto& tile = pair.foreground.identity == "b/0.png" ? pair.foreground.tile : pair.background.tile;
    ASSERT_EQ(tile.channels(), 1);
    // 0.299*200 + 0.587*100 + 0.114*50 = 124.2
    for (auto v : tile.data()) EXPECT_EQ(v, 124);
}

TEST(DrawTexturePair, UndecodableFilesExhaustRedraws) {
    TempDir dir;
    std::filesystem::create_directories(dir / "a");
    std::ofstream(dir / "a/broken.png") << "garbage";
    write_png(dir / "b/0.png", patterned(8, 8, 3, 0));
    const TexturePool pool = open_pool(dir.path());
    RandomStream rng(2);
    EXPECT_THROW(draw_texture_pair(pool, 4, 4, 3, rng), IoError);
}

TEST(DrawTexturePair, SkipsOccasionalBrokenFile) {
    TempDir dir;
    std::filesystem::create_directories(dir / "a");
    std::ofstream(dir / "a/0_broken.png") << "garbage";
    for (int i = 1; i < 8; ++i) write_png(dir / ("a/" + std::to_string(i) + ".png"), patterned(8, 8, 3, i));
    for (int i = 0; i < 8; ++i) write_png(dir / ("b/" + std::to_string(i) + ".png"), patterned(8, 8, 3, 50 + i));
    const TexturePool pool = open_pool(dir.path());
    RandomStream rng(5);
    for (int i = 0; i < 50; ++i) {
        const TexturePair pair = draw_texture_pair(pool, 4, 4, 3, rng);
        ASSERT_NE(pair.foreground.identity, "a/0_broken.png");
        ASSERT_NE(pair.background.identity, "a/0_broken.png");
    }
}

TEST(ProceduralFallback, Constant) {
    EXPECT_EQ(constant_tile(128, 5, 4, 3), Image8(5, 4, 3, 128));
    RandomStream rng(9);
    const Image8 t = procedural_fallback(ProceduralKind::constant, 6, 6, 1, rng);
    for (auto v : t.data()) EXPECT_EQ(v, t.data()[0]);
}

TEST(ProceduralFallback, NoiseReproducible) {
    RandomStream a(4), b(4), c(5);
    const Image8 ta = procedural_fallback(ProceduralKind::noise, 32, 16, 3, a);
    EXPECT_EQ(ta, procedural_fallback(ProceduralKind::noise, 32, 16, 3, b));
    EXPECT_NE(ta, procedural_fallback(ProceduralKind::noise, 32, 16, 3, c));
}

TEST(ProceduralFallback, GradientStrictlyMonotoneAlongOneAxis) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        RandomStream rng(seed);
        const Image8 t = procedural_fallback(ProceduralKind::gradient, 64, 48, 1, rng);
        bool x_increasing = true, x_decreasing = true, y_increasing = true, y_decreasing = true;
        for (int y = 0; y < 48; ++y)
            for (int x = 1; x < 64; ++x) {
                x_increasing &= t.at(x, y) > t.at(x - 1, y);
                x_decreasing &= t.at(x, y) < t.at(x - 1, y);
            }
        for (int y = 1; y < 48; ++y)
            for (int x = 0; x < 64; ++x) {
                y_increasing &= t.at(x, y) > t.at(x, y - 1);
                y_decreasing &= t.at(x, y) < t.at(x, y - 1);
            }
        EXPECT_TRUE(x_increasing || x_decreasing || y_increasing || y_decreasing) << "seed " << seed;
    }
}

TEST(TextureSource, ProceduralDescribesItself) {
    const TextureSource s = TextureSource::procedural(ProceduralKind::gradient);
    EXPECT_EQ(s.describe(), "procedural:gradient");
    RandomStream rng(1);
    const TexturePair p = s.draw(10, 12, 3, rng);
    EXPECT_EQ(p.foreground.tile.width(), 10);
    EXPECT_EQ(p.background.tile.height(), 12);
    EXPECT_EQ(parse_procedural_kind("noise"), ProceduralKind::noise);
    EXPECT_FALSE(parse_procedural_kind("plaid").has_value());
}

}  // namespace
}  // namespace vesselforge
