// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wavelearn/dataio.hpp"
#include "wavelearn/matrix.hpp"
#include "wavelearn/objective.hpp"

namespace wavelearn {

struct TrainConfig {
    int n_filt = 2;
    double learning_rate = 1e-3;
    double momentum = 0.9;
    double lambda_final = 10.0;
    int anneal_steps = 0;  // 0 = constant lambda_final from the first step
    int batch_size = 32;   // clamped to the dataset size; full batch when >= it
    int max_steps = 1000;  // 0 = return the initialisation untouched
    std::uint64_t seed = 0;
    double convergence_tol = 1e-8;
    ConditionMask condition_toggle = all_conditions;
    int history_stride = 1; // record every k-th step
};

enum class StopReason { max_steps, converged, diverged };

std::string to_string(StopReason reason);

struct TrainHistory {
    std::vector<int> step;                    // recorded step indices
    std::vector<CostBreakdown> cost;          // batch cost at those steps
    std::vector<std::vector<double>> filters; // filter taps at those steps
    int steps = 0;                            // executed update steps
    StopReason reason = StopReason::max_steps;
    int failed_step = -1;                     // step of a numerical failure
};

/// Isotropic draw on the unit hypersphere; satisfies the unit-norm part of
/// the orthonormality conditions exactly. Deterministic per seed.
FilterBank init_hypersphere(int n_filt, std::uint64_t seed);

/// Gradient descent with momentum over the dataset. Each step draws a batch
/// (a seeded permutation, cycled), averages the per-example sparsity
/// gradients from back-propagation, adds lambda(t) times the condition
/// gradient, and applies v <- mu v - eta g; a <- a + v. lambda ramps
/// linearly from 0 to lambda_final over anneal_steps. Returns the iterate
/// with the lowest batch cost evaluated at lambda_final, not the last one.
std::pair<FilterBank, TrainHistory> train(const Dataset& data, const TrainConfig& config);

/// Same, but starting from an explicit filter instead of the hypersphere.
std::pair<FilterBank, TrainHistory> train(const Dataset& data, const TrainConfig& config,
                                          const FilterBank& init);

struct GridSpec {
    double min = -1.5;
    double max = 1.5;
    int steps = 101; // cells per axis
};

/// Average-total-cost map over a two-tap filter grid. The range is tiled
/// with steps x steps equal cells evaluated at their centers (axis holds the
/// center coordinates); rows index the first tap. Cells where the sparsity
/// is undefined (an all-zero transform) hold NaN.
struct CostMap {
    std::vector<double> axis;
    Matrix values;
};

CostMap cost_map(const Dataset& data, const GridSpec& grid, double lambda);

/// CSV exporters. The cost map carries the grid coordinates in its first
/// row and column; the history has one row per recorded step.
void write_cost_map(const CostMap& map, const std::string& path);
void write_history(const TrainHistory& history, const std::string& path);

} // namespace wavelearn
