// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "wavelearn/dataio.hpp"
#include "wavelearn/trainer.hpp"

using namespace wavelearn;

namespace {

namespace fs = std::filesystem;

struct CliFixture {
    fs::path dir;
    CliFixture() {
        dir = fs::temp_directory_path() /
              ("wavelearn-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++));
        fs::create_directories(dir);
    }
    ~CliFixture() { fs::remove_all(dir); }
    std::string file(const std::string& name) const { return (dir / name).string(); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

int run(const std::string& args) {
    const std::string cmd = std::string(WAVELEARN_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("help exits cleanly; unknown flags do not") {
    CHECK(run("--help") == 0);
    for (const char* sub : {"train", "transform", "basis", "costmap", "generate"})
        CHECK(run(std::string(sub) + " --help") == 0);
    CHECK(run("--no-such-flag") == 1);
    CHECK(run("train --bogus") == 1);
    CHECK(run("frobnicate") == 1);
}

TEST_CASE("generate writes deterministic CSV datasets") {
    CliFixture fx;
    const std::string out1 = fx.file("a.csv"), out2 = fx.file("b.csv");
    const std::string flags = "generate --kind point-like --shape 16 --count 5 --seed 3 --out ";
    CHECK(run(flags + out1) == 0);
    CHECK(run(flags + out2) == 0);
    const std::string t1 = read_text(out1);
    CHECK(!t1.empty());
    CHECK(t1 == read_text(out2));
    CHECK(read_csv(out1).size() == 5);

    CHECK(run("generate --kind nope --shape 16 --count 1 --seed 1 --out " + fx.file("x.csv")) ==
          1);
}

TEST_CASE("train requires exactly one data source") {
    CliFixture fx;
    const std::string out = fx.file("f.flt");
    CHECK(run("train --out " + out) == 1);
    CHECK(run("train --data a.csv --generate constant --out " + out) == 1);
}

TEST_CASE("zero-step training writes the initialisation") {
    CliFixture fx;
    const std::string out = fx.file("init.flt");
    CHECK(run("train --generate point-like --shape 16 --count 4 --gen-seed 2 --nfilt 4 --steps 0 "
              "--seed 123 --out " +
              out) == 0);
    CHECK(load_filter(out).lowpass() == init_hypersphere(4, 123).lowpass());
}

TEST_CASE("training a two-tap filter from the command line") {
    CliFixture fx;
    const std::string data = fx.file("d.csv");
    CHECK(run("generate --kind point-like --shape 32 --count 30 --seed 5 --out " + data) == 0);
    const std::string out = fx.file("learned.flt");
    const std::string hist = fx.file("hist.csv");
    CHECK(run("train --data " + data +
              " --nfilt 2 --lr 2e-4 --momentum 0.9 --lambda 100 --batch 30 --steps 2000 "
              "--seed 1 --history-stride 20 --out " +
              out + " --history " + hist) == 0);
    const FilterBank fb = load_filter(out);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::hypot(fb.lowpass()[0] - s, fb.lowpass()[1] - s) < 5e-2);
    CHECK(!read_text(hist).empty());
}

TEST_CASE("diverging training exits with the numerical-failure code") {
    CliFixture fx;
    CHECK(run("train --generate point-like --shape 16 --count 4 --gen-seed 2 --nfilt 2 "
              "--lr 1e9 --lambda 100 --steps 200 --out " +
              fx.file("f.flt")) == 3);
}

TEST_CASE("transform round trip through files") {
    CliFixture fx;
    const std::string filter = fx.file("haar.flt");
    save_filter(FilterBank::haar(), filter);
    const std::string data = fx.file("d.csv");
    CHECK(run("generate --kind sinusoid-noise --shape 16x16 --count 3 --seed 9 --out " + data) ==
          0);
    const std::string coeffs = fx.file("c.csv"), back = fx.file("r.csv");
    CHECK(run("transform --filter " + filter + " --data " + data + " --out " + coeffs) == 0);
    CHECK(run("transform --filter " + filter + " --data " + coeffs + " --inverse --out " + back) ==
          0);
    const Dataset original = read_csv(data), rebuilt = read_csv(back);
    REQUIRE(rebuilt.size() == original.size());
    for (std::size_t i = 0; i < original.size(); ++i)
        for (std::size_t k = 0; k < original.signals[i].size(); ++k)
            CHECK(rebuilt.signals[i].values[k] ==
                  doctest::Approx(original.signals[i].values[k]).epsilon(1e-9));

    CHECK(run("transform --filter " + fx.file("missing.flt") + " --data " + data + " --out " +
              fx.file("x.csv")) == 2);
}

TEST_CASE("constant signals transform to a single nonzero column") {
    CliFixture fx;
    const std::string filter = fx.file("haar.flt");
    save_filter(FilterBank::haar(), filter);
    const std::string data = fx.file("d.csv");
    CHECK(run("generate --kind constant --shape 8 --count 2 --seed 4 --out " + data) == 0);
    const std::string coeffs = fx.file("c.csv");
    CHECK(run("transform --filter " + filter + " --data " + data + " --out " + coeffs) == 0);
    for (const Signal& s : read_csv(coeffs).signals) {
        CHECK(s.values[0] != 0.0);
        for (std::size_t k = 1; k < s.size(); ++k) CHECK(std::fabs(s.values[k]) < 1e-12);
    }
}

TEST_CASE("basis export") {
    CliFixture fx;
    const std::string filter = fx.file("haar.flt");
    save_filter(FilterBank::haar(), filter);
    const std::string out = fx.file("b.csv");
    CHECK(run("basis --filter " + filter + " --size 8 --index 0 --out " + out) == 0);
    const Dataset b = read_csv(out);
    REQUIRE(b.size() == 1);
    for (double v : b.signals[0].values)
        CHECK(v == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-12));

    CHECK(run("basis --filter " + filter + " --size 8 --index 8 --out " + out) == 1);
    CHECK(run("basis --filter " + filter + " --size 7 --index 0 --out " + out) == 1);

    // 2D basis function
    CHECK(run("basis --filter " + filter + " --size 4 --index 1,2 --out " + out) == 0);
    CHECK(read_csv(out).signals[0].dim == 2);
}

TEST_CASE("costmap subcommand") {
    CliFixture fx;
    const std::string data = fx.file("d.csv");
    CHECK(run("generate --kind point-like --shape 8x8 --count 5 --seed 7 --out " + data) == 0);
    const std::string out = fx.file("map.csv");
    CHECK(run("costmap --data " + data + " --grid -1.5:1.5:11 --lambda 10 --out " + out) == 0);
    CHECK(!read_text(out).empty());

    std::ofstream(fx.file("empty.csv")).close();
    CHECK(run("costmap --data " + fx.file("empty.csv") + " --grid -1:1:5 --lambda 1 --out " +
              fx.file("m2.csv")) == 2);
    CHECK(run("costmap --data " + data + " --grid nonsense --out " + fx.file("m3.csv")) == 1);
}

TEST_CASE("malformed data files exit with the data code") {
    CliFixture fx;
    const std::string bad = fx.file("bad.csv");
    std::ofstream(bad) << "1,2,3\n";
    const std::string filter = fx.file("haar.flt");
    save_filter(FilterBank::haar(), filter);
    CHECK(run("transform --filter " + filter + " --data " + bad + " --out " + fx.file("o.csv")) ==
          2);
}
