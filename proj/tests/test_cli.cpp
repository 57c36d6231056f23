// End-to-end checks of the `artifact` binary: wiring, formats, exit codes.
#include "artifact/image.hpp"
#include "artifact/rng.hpp"

#include <doctest.h>

#include "oracles.hpp"
#include "temp_dir.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

RunResult run(const std::string& args, const fs::path& scratch) {
    const fs::path out_file = scratch / "stdout.txt";
    const std::string full = std::string(ARTIFACT_CLI_PATH) + " " + args + " >" +
                             out_file.string() + " 2>" + (scratch / "stderr.txt").string();
    const int status = std::system(full.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = read_file(out_file);
    return result;
}

// order-insensitive digest of a directory tree (paths + bytes)
std::uint64_t tree_hash(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root))
        if (entry.is_regular_file())
            files[fs::relative(entry.path(), root).string()] = read_file(entry.path());
    std::uint64_t h = 1469598103934665603ULL;
    auto feed = [&h](const std::string& s) {
        for (const unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
    };
    for (const auto& [rel, bytes] : files) {
        feed(rel);
        feed(bytes);
    }
    return h;
}

} // namespace

TEST_CASE("synth writes a corpus, prints the manifest path and reruns identically") {
    testutil::TempDir dir("cli_synth");
    const std::string flags = "--samples 2 --measurements 2 --seed 7 --grid-n 3 ";
    const auto r1 = run("synth " + flags + "--out " + (dir.path() / "one").string(), dir.path());
    CHECK(r1.exit_code == 0);
    CHECK(r1.out.find("manifest.tsv") != std::string::npos);
    CHECK(fs::exists(dir.path() / "one/manifest.tsv"));
    CHECK(fs::exists(dir.path() / "one/s1/m1.pgm"));
    CHECK(fs::exists(dir.path() / "one/s1/master.pgm"));

    const auto r2 = run("synth " + flags + "--out " + (dir.path() / "two").string(), dir.path());
    CHECK(r2.exit_code == 0);
    CHECK(tree_hash(dir.path() / "one") == tree_hash(dir.path() / "two"));
}

TEST_CASE("synth rejects invalid parameters before writing anything") {
    testutil::TempDir dir("cli_synth_bad");
    const auto target = dir.path() / "corpus";
    const auto r = run("synth --collapse-prob 1.5 --out " + target.string(), dir.path());
    CHECK(r.exit_code == 2);
    CHECK(!fs::exists(target));
}

TEST_CASE("ARTIFACT_OUT provides the synth output directory") {
    testutil::TempDir dir("cli_env_out");
    const auto target = dir.path() / "from_env";
    const fs::path out_file = dir.path() / "stdout.txt";
    const std::string cmd = "ARTIFACT_OUT=" + target.string() + " " + ARTIFACT_CLI_PATH +
                            " synth --samples 1 --measurements 1 --grid-n 2 >" +
                            out_file.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 0);
    CHECK(fs::exists(target / "manifest.tsv"));
}

TEST_CASE("match prints score, dx, dy with a 12-decimal score") {
    testutil::TempDir dir("cli_match");
    artifact::rng::Stream stream(3);
    const auto img = oracles::random_image(stream, 64, 64);
    const auto path = dir.path() / "img.pgm";
    artifact::write_pgm_file(path, img);

    const auto self = run("match " + path.string() + " " + path.string() + " --raw", dir.path());
    CHECK(self.exit_code == 0);
    CHECK(self.out == "1.000000000000\t0\t0\n");

    // shifted copy: preprocessing path, crop 0 keeps the full frame
    const auto moved = dir.path() / "moved.pgm";
    artifact::write_pgm_file(moved, artifact::translate_clamped(img, 2, 0));
    const auto shifted =
        run("match " + path.string() + " " + moved.string() + " --crop 0 --filter 3", dir.path());
    CHECK(shifted.exit_code == 0);
    CHECK(shifted.out.rfind("1.000000000000\t", 0) == 0);

    // output parses back: score \t dx \t dy
    double score = -1.0;
    int dx = 99, dy = 99;
    REQUIRE(std::sscanf(shifted.out.c_str(), "%lf\t%d\t%d", &score, &dx, &dy) == 3);
    CHECK(score == 1.0);
    CHECK(std::abs(dx) == 2);
    CHECK(dy == 0);
}

TEST_CASE("match error paths") {
    testutil::TempDir dir("cli_match_err");
    const auto bogus = dir.path() / "bogus.pgm";
    std::ofstream(bogus) << "not a pgm";
    const auto bad_img = run("match " + bogus.string() + " " + bogus.string(), dir.path());
    CHECK(bad_img.exit_code == 1);

    const auto bad_flag = run("match a.pgm b.pgm --no-such-flag", dir.path());
    CHECK(bad_flag.exit_code == 2);

    const auto missing_args = run("match", dir.path());
    CHECK(missing_args.exit_code == 2);
}

TEST_CASE("clone writes the suffixed file and reports the tile size") {
    testutil::TempDir dir("cli_clone");
    artifact::rng::Stream stream(5);
    std::vector<std::uint8_t> px(64 * 64);
    for (auto& v : px)
        v = stream.bernoulli(0.5) ? 130 : 80;
    const artifact::GrayImage img(64, 64, std::move(px));
    const auto path = dir.path() / "sample.pgm";
    artifact::write_pgm_file(path, img);

    const auto r = run("clone " + path.string() + " --k 3", dir.path());
    CHECK(r.exit_code == 0);
    const auto clone_path = dir.path() / "sample.clone.k3.pgm";
    CHECK(fs::exists(clone_path));
    CHECK(r.out.find("~ 10 nm") != std::string::npos);

    // k=1 on a two-valued image reproduces the input payload exactly
    const auto r1 = run("clone " + path.string() + " --k 1", dir.path());
    CHECK(r1.exit_code == 0);
    CHECK(read_file(dir.path() / "sample.clone.k1.pgm") == read_file(path));

    const auto too_big = run("clone " + path.string() + " --k 600", dir.path());
    CHECK(too_big.exit_code == 2);
}

TEST_CASE("eval emits curves and score dumps, byte-identical across workers") {
    testutil::TempDir dir("cli_eval");
    const auto corpus = dir.path() / "corpus";
    const auto synth = run("synth --samples 3 --measurements 3 --seed 11 --size 224 --out " +
                               corpus.string(),
                           dir.path());
    REQUIRE(synth.exit_code == 0);

    const std::string common = "eval " + corpus.string() + " --crop 200 --grid 101 --clone-k 3,15";
    const auto r1 = run(common + " --workers 1 --out " + (dir.path() / "w1").string(), dir.path());
    CHECK(r1.exit_code == 0);
    CHECK(r1.out.rfind("EER: ", 0) == 0);

    const auto r4 = run(common + " --workers 4 --out " + (dir.path() / "w4").string(), dir.path());
    CHECK(r4.exit_code == 0);

    for (const std::string name : {"curves.tsv", "scores_genuine.txt", "scores_impostor.txt",
                                   "scores_clone_k3.txt", "scores_clone_k15.txt"}) {
        CAPTURE(name);
        REQUIRE(fs::exists(dir.path() / "w1" / name));
        CHECK(read_file(dir.path() / "w1" / name) == read_file(dir.path() / "w4" / name));
    }

    // curve file: requested columns only, one row per grid point, monotone rates
    std::ifstream curves(dir.path() / "w1/curves.tsv");
    std::string header;
    std::getline(curves, header);
    CHECK(header == "threshold\tfmr\tfnmr\tcmr_k3\tcmr_k15");
    int rows = 0;
    double prev_fmr = 2.0, prev_fnmr = -1.0;
    double t, fmr, fnmr, c3, c15;
    while (curves >> t >> fmr >> fnmr >> c3 >> c15) {
        CHECK(fmr <= prev_fmr);
        CHECK(fnmr >= prev_fnmr);
        prev_fmr = fmr;
        prev_fnmr = fnmr;
        ++rows;
    }
    CHECK(rows == 101);
}

TEST_CASE("eval rejects a broken corpus with exit 1 naming the manifest") {
    testutil::TempDir dir("cli_eval_bad");
    const auto missing = run("eval " + (dir.path() / "nope").string(), dir.path());
    CHECK(missing.exit_code == 1);

    fs::create_directories(dir.path() / "empty");
    std::ofstream(dir.path() / "empty/manifest.tsv")
        << "sample_id\tmeasurement_id\tpath\trole\n";
    const auto empty = run("eval " + (dir.path() / "empty").string(), dir.path());
    CHECK(empty.exit_code == 1);
    CHECK(read_file(dir.path() / "stderr.txt").find("manifest.tsv") != std::string::npos);
}

TEST_CASE("help exits zero on every command") {
    testutil::TempDir dir("cli_help");
    for (const std::string cmd : {"--help", "synth --help", "match --help", "clone --help",
                                  "eval --help"})
        CHECK(run(cmd, dir.path()).exit_code == 0);
}
