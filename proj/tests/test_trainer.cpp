// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "test_util.hpp"
#include "wavelearn/dwt.hpp"
#include "wavelearn/trainer.hpp"

using namespace wavelearn;

namespace {

const double kS = 1.0 / std::sqrt(2.0);

double dist_to_haar(const std::vector<double>& a) {
    // distance up to filter reflection
    const double d1 = std::hypot(a[0] - kS, a[1] - kS);
    const double d2 = std::hypot(a[1] - kS, a[0] - kS);
    return std::min(d1, d2);
}

Dataset pointlike_1d(std::size_t len, int count, std::uint64_t seed) {
    GenParams p;
    p.components = 3;
    return generate(GeneratorKind::point_like, {1, len}, count, seed, p);
}

} // namespace

TEST_CASE("hypersphere initialisation") {
    for (std::uint64_t seed : {0ull, 1ull, 42ull}) {
        const FilterBank fb = init_hypersphere(16, seed);
        double norm = 0.0;
        for (double x : fb.lowpass()) norm += x * x;
        CHECK(std::fabs(std::sqrt(norm) - 1.0) < 1e-12);
    }
    const FilterBank circle = init_hypersphere(2, 3);
    CHECK(std::fabs(circle.lowpass()[0] * circle.lowpass()[0] +
                    circle.lowpass()[1] * circle.lowpass()[1] - 1.0) < 1e-12);
    CHECK(init_hypersphere(4, 9).lowpass() == init_hypersphere(4, 9).lowpass());
    CHECK_THROWS_AS(init_hypersphere(3, 0), InvalidFilterError);
}

TEST_CASE("training is bit-deterministic") {
    const Dataset data = pointlike_1d(16, 20, 4);
    TrainConfig cfg;
    cfg.n_filt = 2;
    cfg.learning_rate = 2e-4;
    cfg.momentum = 0.9;
    cfg.lambda_final = 50.0;
    cfg.batch_size = 7; // exercises cycling
    cfg.max_steps = 200;
    cfg.seed = 5;
    auto [fb1, h1] = train(data, cfg);
    auto [fb2, h2] = train(data, cfg);
    CHECK(fb1.lowpass() == fb2.lowpass());
    REQUIRE(h1.step.size() == h2.step.size());
    for (std::size_t i = 0; i < h1.step.size(); ++i) {
        CHECK(h1.filters[i] == h2.filters[i]);
        CHECK(h1.cost[i].total == h2.cost[i].total);
    }
}

TEST_CASE("zero steps returns the initialisation unchanged") {
    const Dataset data = pointlike_1d(16, 5, 8);
    TrainConfig cfg;
    cfg.n_filt = 4;
    cfg.max_steps = 0;
    cfg.seed = 77;
    auto [fb, history] = train(data, cfg);
    CHECK(fb.lowpass() == init_hypersphere(4, 77).lowpass());
    CHECK(history.steps == 0);
    CHECK(history.reason == StopReason::max_steps);
}

TEST_CASE("two-tap training lands on the Haar pair") {
    const Dataset data = pointlike_1d(32, 40, 11);
    TrainConfig cfg;
    cfg.n_filt = 2;
    cfg.learning_rate = 2e-4;
    cfg.momentum = 0.9;
    cfg.lambda_final = 100.0;
    cfg.anneal_steps = 0;
    cfg.batch_size = 40;
    cfg.max_steps = 2500;
    cfg.seed = 1;
    cfg.history_stride = 10;
    auto [fb, history] = train(data, cfg);
    CHECK(dist_to_haar(fb.lowpass()) < 1e-2);
    CHECK(check_conditions(fb).total() < 1e-3);
    CHECK(history.reason != StopReason::diverged);

    // running best of the final-multiplier metric never increases
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < history.cost.size(); ++i) {
        double reg_sum = 0.0;
        for (double r : history.cost[i].reg) reg_sum += r;
        const double metric = history.cost[i].sparsity + cfg.lambda_final * reg_sum;
        best = std::min(best, metric);
        CHECK(best <= metric + 1e-15);
    }
}

TEST_CASE("huge learning rate diverges with a reported step") {
    const Dataset data = pointlike_1d(16, 10, 2);
    TrainConfig cfg;
    cfg.n_filt = 2;
    cfg.learning_rate = 1e9;
    cfg.momentum = 0.9;
    cfg.lambda_final = 100.0;
    cfg.batch_size = 10;
    cfg.max_steps = 500;
    auto [fb, history] = train(data, cfg);
    CHECK(history.reason == StopReason::diverged);
    CHECK(history.failed_step >= 0);
}

TEST_CASE("input validation") {
    Dataset empty;
    TrainConfig cfg;
    CHECK_THROWS_AS(train(empty, cfg), std::invalid_argument);

    Dataset mixed;
    mixed.signals.push_back(Signal::vector({1, 2, 3, 4}));
    mixed.signals.push_back(Signal::vector({1, 2}));
    CHECK_THROWS_AS(train(mixed, cfg), ShapeError);

    const Dataset data = pointlike_1d(8, 3, 1);
    TrainConfig bad = cfg;
    bad.n_filt = 3;
    CHECK_THROWS_AS(train(data, bad), InvalidFilterError);
    bad = cfg;
    bad.momentum = 1.0;
    CHECK_THROWS_AS(train(data, bad), std::invalid_argument);
    bad = cfg;
    bad.batch_size = 0;
    CHECK_THROWS_AS(train(data, bad), std::invalid_argument);
}

TEST_CASE("ablating the sum conditions trains toward the pixel basis") {
    GenParams p;
    p.components = 1;
    const Dataset data = generate(GeneratorKind::point_like, {1, 16}, 60, 21, p);
    TrainConfig cfg;
    cfg.n_filt = 4;
    cfg.learning_rate = 3e-4;
    cfg.momentum = 0.9;
    cfg.lambda_final = 100.0;
    cfg.anneal_steps = 400;
    cfg.batch_size = 60;
    cfg.max_steps = 4000;
    cfg.seed = 3;
    cfg.history_stride = 50;
    cfg.condition_toggle = ConditionMask{false, true, true, false, true};
    auto [fb, history] = train(data, cfg);
    REQUIRE(history.reason != StopReason::diverged);
    const int levels = 3;
    for (std::size_t index = 0; index < (std::size_t{1} << levels); ++index) {
        const Signal basis = basis_function(fb, levels, index);
        double norm = 0.0, peak = 0.0;
        for (double v : basis.values) {
            norm += v * v;
            peak = std::max(peak, std::fabs(v));
        }
        CHECK(peak > 0.9 * std::sqrt(norm));
    }
}

TEST_CASE("cost map basics") {
    GenParams p;
    p.components = 2;
    const Dataset data = generate(GeneratorKind::point_like, {2, 8}, 20, 6, p);

    GridSpec grid;
    grid.steps = 41;
    const CostMap map = cost_map(data, grid, 10.0);
    REQUIRE(map.axis.size() == 41);
    REQUIRE(map.values.rows == 41);

    // argmin cell contains the Haar point
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < 41; ++i)
        for (std::size_t j = 0; j < 41; ++j)
            if (map.values(i, j) < best) {
                best = map.values(i, j);
                bi = i;
                bj = j;
            }
    const double half = 0.5 * (grid.max - grid.min) / grid.steps;
    CHECK(std::fabs(map.axis[bi] - kS) <= half);
    CHECK(std::fabs(map.axis[bj] - kS) <= half);

    // the center cell holds an all-zero filter: undefined sparsity
    const std::size_t mid = 20;
    CHECK(std::fabs(map.axis[mid]) < 1e-12);
    CHECK(std::isnan(map.values(mid, mid)));
}

TEST_CASE("cost map of a reflection-closed dataset is symmetric") {
    GenParams p;
    p.components = 2;
    const Dataset base = generate(GeneratorKind::point_like, {2, 8}, 6, 9, p);
    Dataset closed = base;
    for (const Signal& s : base.signals) {
        Signal rev = s;
        for (std::size_t r = 0; r < s.extent; ++r)
            for (std::size_t c = 0; c < s.extent; ++c)
                rev.at(r, c) = s.at(s.extent - 1 - r, s.extent - 1 - c);
        closed.signals.push_back(std::move(rev));
    }
    GridSpec grid;
    grid.min = -1.2;
    grid.max = 1.2;
    grid.steps = 9;
    const CostMap map = cost_map(closed, grid, 5.0);
    for (std::size_t i = 0; i < map.values.rows; ++i)
        for (std::size_t j = 0; j < map.values.cols; ++j) {
            const double lhs = map.values(i, j), rhs = map.values(j, i);
            if (std::isnan(lhs) || std::isnan(rhs)) {
                CHECK(std::isnan(lhs));
                CHECK(std::isnan(rhs));
            } else {
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
            }
        }
}

TEST_CASE("cost map input validation") {
    const Dataset data = generate(GeneratorKind::constant, {1, 8}, 2, 1);
    GridSpec bad;
    bad.steps = 0;
    CHECK_THROWS_AS(cost_map(data, bad, 1.0), std::invalid_argument);
    Dataset empty;
    CHECK_THROWS_AS(cost_map(empty, GridSpec{}, 1.0), std::invalid_argument);
}

TEST_CASE("history and cost map CSV exports") {
    namespace fs = std::filesystem;
    const fs::path dir =
        fs::temp_directory_path() / ("wavelearn-trainer-" + std::to_string(::getpid()));
    fs::create_directories(dir);

    const Dataset data = pointlike_1d(8, 6, 3);
    TrainConfig cfg;
    cfg.n_filt = 2;
    cfg.max_steps = 20;
    cfg.batch_size = 6;
    cfg.learning_rate = 1e-4;
    auto [fb, history] = train(data, cfg);
    const std::string hist_path = (dir / "h.csv").string();
    write_history(history, hist_path);
    std::ifstream in(hist_path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "step,sparsity,r1,r2,r3,r4,r5,lambda,total,a_0,a_1");
    int rows = 0;
    for (std::string line; std::getline(in, line);) rows += !line.empty();
    CHECK(rows == 20);

    GridSpec grid;
    grid.steps = 5;
    const CostMap map = cost_map(data, grid, 1.0);
    const std::string map_path = (dir / "m.csv").string();
    write_cost_map(map, map_path);
    std::ifstream min(map_path);
    std::string first;
    std::getline(min, first);
    CHECK(first.rfind(",", 0) == 0); // leading corner cell is empty
    fs::remove_all(dir);
}
