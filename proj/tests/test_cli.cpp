#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"
#include "vesselforge/cli.hpp"
#include "vesselforge/image_io.hpp"

namespace vesselforge {
namespace {

using testing::TempDir;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

const std::vector<std::string> kSmall = {"--width", "48", "--height", "40", "--procedural", "noise"};

std::vector<std::string> with_small(std::vector<std::string> args) {
    args.insert(args.end(), kSmall.begin(), kSmall.end());
    return args;
}

TEST(Cli, HelpAndParseErrors) {
    EXPECT_EQ(cli({"--help"}).code, kExitOk);
    EXPECT_EQ(cli({}).code, kExitConfig);
    EXPECT_EQ(cli({"generate", "--bogus"}).code, kExitConfig);
    EXPECT_EQ(cli({"frobnicate"}).code, kExitConfig);
}

TEST(Cli, GenerateRejectsInvalidParameters) {
    TempDir dir;
    EXPECT_EQ(cli({"generate", "--count", "0", "--out", (dir / "a").string()}).code, kExitConfig);
    EXPECT_EQ(cli(with_small({"generate", "--count", "2", "--out", (dir / "b").string(), "--r0", "3,1"})).code,
              kExitConfig);
    EXPECT_EQ(cli(with_small({"generate", "--count", "2", "--out", (dir / "c").string(), "--delta", "x"})).code,
              kExitConfig);
    EXPECT_EQ(cli({"generate", "--count", "2", "--out", (dir / "d").string(), "--procedural", "plaid"}).code,
              kExitConfig);
    EXPECT_EQ(cli({"generate", "--count", "2", "--out", (dir / "e").string(), "--procedural", "noise",
                   "--texture-root", dir.path().string()})
                  .code,
              kExitConfig);
}

TEST(Cli, GenerateIsDeterministic) {
    TempDir dir;
    const auto a = cli(with_small({"generate", "--count", "6", "--seed", "11", "--out", (dir / "a").string(),
                                   "--json", "--workers", "1"}));
    const auto b = cli(with_small({"generate", "--count", "6", "--seed", "11", "--out", (dir / "b").string(),
                                   "--json", "--workers", "3"}));
    ASSERT_EQ(a.code, kExitOk) << a.err;
    ASSERT_EQ(b.code, kExitOk) << b.err;
    const auto ja = nlohmann::json::parse(a.out);
    const auto jb = nlohmann::json::parse(b.out);
    EXPECT_EQ(ja["count"], 6);
    EXPECT_EQ(ja["manifest_sha256"], jb["manifest_sha256"]);
    EXPECT_EQ(read_bytes(dir / "a/images/3.png"), read_bytes(dir / "b/images/3.png"));

    const auto c = cli(with_small({"generate", "--count", "6", "--seed", "12", "--out", (dir / "c").string(),
                                   "--json"}));
    EXPECT_NE(nlohmann::json::parse(c.out)["manifest_sha256"], ja["manifest_sha256"]);
}

TEST(Cli, ConfigFileWithFlagOverride) {
    TempDir dir;
    const std::string cfg = R"({"image_width": 32, "image_height": 24, "master_seed": 3})";
    write_bytes(dir / "cfg.json", std::span(reinterpret_cast<const std::uint8_t*>(cfg.data()), cfg.size()));
    const auto r = cli({"generate", "--count", "1", "--out", (dir / "o").string(), "--config",
                        (dir / "cfg.json").string(), "--width", "20", "--procedural", "constant"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const Image8 img = read_image(dir / "o/images/0.png");
    EXPECT_EQ(img.width(), 20);
    EXPECT_EQ(img.height(), 24);

    const std::string bad = R"({"image_widht": 32})";
    write_bytes(dir / "bad.json", std::span(reinterpret_cast<const std::uint8_t*>(bad.data()), bad.size()));
    EXPECT_EQ(cli({"generate", "--count", "1", "--out", (dir / "p").string(), "--config",
                   (dir / "bad.json").string()})
                  .code,
              kExitConfig);
}

TEST(Cli, VerboseReportsResolvedSettings) {
    TempDir dir;
    const auto r = cli(with_small({"-v", "preview", "--n", "1", "--out", (dir / "p.png").string(), "--seed", "4"}));
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.err.find("\"master_seed\":4"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("textures: procedural:noise"), std::string::npos) << r.err;
    EXPECT_TRUE(cli(with_small({"preview", "--n", "1", "--out", (dir / "q.png").string()})).err.empty());
}

TEST(Cli, GenerateIoErrorExitCode) {
    TempDir dir;
    write_bytes(dir / "file", std::vector<std::uint8_t>{1});
    const auto r = cli(with_small({"generate", "--count", "1", "--out", (dir / "file/sub").string()}));
    EXPECT_EQ(r.code, kExitIo) << r.err;
    EXPECT_EQ(cli({"generate", "--count", "1", "--out", (dir / "x").string(), "--texture-root",
                   (dir / "missing").string()})
                  .code,
              kExitIo);
}

TEST(Cli, PreviewSheetShapeAndDeterminism) {
    TempDir dir;
    const auto a = cli(with_small({"preview", "--n", "4", "--out", (dir / "a.png").string(), "--seed", "5"}));
    const auto b = cli(with_small({"preview", "--n", "4", "--out", (dir / "b.png").string(), "--seed", "5"}));
    ASSERT_EQ(a.code, kExitOk) << a.err;
    ASSERT_EQ(b.code, kExitOk) << b.err;
    const Image8 sheet = read_image(dir / "a.png");
    EXPECT_EQ(sheet.width(), 3 * 48);
    EXPECT_EQ(sheet.height(), 4 * 40);
    EXPECT_EQ(sheet.channels(), 3);
    EXPECT_EQ(read_bytes(dir / "a.png"), read_bytes(dir / "b.png"));
    EXPECT_EQ(cli(with_small({"preview", "--n", "0", "--out", (dir / "c.png").string()})).code, kExitConfig);
}

TEST(Cli, EvalIdenticalAndIncomplete) {
    TempDir dir;
    ASSERT_EQ(cli(with_small({"generate", "--count", "3", "--out", (dir / "d").string()})).code, kExitOk);
    const auto r = cli({"eval", "--pred", (dir / "d/masks").string(), "--gt", (dir / "d/masks").string(), "--json",
                        (dir / "report.json").string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto bytes = read_bytes(dir / "report.json");
    const auto j = nlohmann::json::parse(std::string(bytes.begin(), bytes.end()));
    EXPECT_EQ(j["summary"]["dice"]["mean"], 1.0);

    std::filesystem::create_directories(dir / "partial");
    std::filesystem::copy_file(dir / "d/masks/0.png", dir / "partial/0.png");
    const auto inc = cli({"eval", "--pred", (dir / "partial").string(), "--gt", (dir / "d/masks").string()});
    EXPECT_EQ(inc.code, kExitIncomplete);
    EXPECT_NE(inc.err.find("2 missing"), std::string::npos);

    EXPECT_EQ(cli({"eval", "--pred", (dir / "nope").string(), "--gt", (dir / "d/masks").string()}).code, kExitIo);
}

TEST(Cli, PlanFewShotDrivePreset) {
    const auto r = cli({"plan-fewshot", "--preset", "drive", "--zero-shot", "--json"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["entries"], 46);
    EXPECT_EQ(j["few_shot_entries"], 45);
    EXPECT_EQ(j["coverage"].size(), 9u);

    const auto text = cli({"plan-fewshot", "--preset", "drive", "--zero-shot"});
    EXPECT_NE(text.out.find("entries: 45 + 1 zero-shot"), std::string::npos);

    EXPECT_EQ(cli({"plan-fewshot", "--preset", "stare"}).code, kExitConfig);
    EXPECT_EQ(cli({"plan-fewshot"}).code, kExitConfig);
}

TEST(Cli, PlanFewShotFromDatasetPool) {
    TempDir dir;
    ASSERT_EQ(cli(with_small({"generate", "--count", "5", "--out", (dir / "d").string()})).code, kExitOk);
    const auto r = cli({"plan-fewshot", "--pool", (dir / "d").string(), "--sizes", "1,2,5", "--runs", "3", "--out",
                        (dir / "plan.jsonl").string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto bytes = read_bytes(dir / "plan.jsonl");
    const std::string s(bytes.begin(), bytes.end());
    EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 1 + 9);
    EXPECT_EQ(cli({"plan-fewshot", "--pool", (dir / "d").string(), "--sizes", "1,6"}).code, kExitConfig);
}

TEST(Cli, BenchJsonRoundTrip) {
    EXPECT_EQ(cli(with_small({"bench", "--count", "10"})).code, kExitConfig);
    const auto r = cli(with_small({"bench", "--count", "100", "--worker-counts", "1,2", "--json"}));
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["count"], 100);
    EXPECT_EQ(nlohmann::json::parse(j.dump()), j);
    EXPECT_EQ(j["scaling"].size(), 2u);
    EXPECT_GT(j["samples_per_second"].get<double>(), 0.0);
}

}  // namespace
}  // namespace vesselforge
