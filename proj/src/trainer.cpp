// SPDX-License-Identifier: Apache-2.0
#include "wavelearn/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>

#include "wavelearn/backprop.hpp"
#include "wavelearn/dwt.hpp"
#include "wavelearn/errors.hpp"
#include "wavelearn/parallel.hpp"
#include "wavelearn/rng.hpp"

namespace wavelearn {

std::string to_string(StopReason reason) {
    switch (reason) {
        case StopReason::max_steps: return "max-steps";
        case StopReason::converged: return "converged";
        case StopReason::diverged: return "diverged";
    }
    return "?";
}

FilterBank init_hypersphere(int n_filt, std::uint64_t seed) {
    if (n_filt < 2 || n_filt % 2 != 0)
        throw InvalidFilterError("n_filt must be even and >= 2, got " + std::to_string(n_filt));
    Rng rng(seed);
    std::vector<double> a(static_cast<std::size_t>(n_filt));
    double norm = 0.0;
    do {
        norm = 0.0;
        for (double& v : a) {
            v = rng.normal();
            norm += v * v;
        }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    for (double& v : a) v /= norm;
    return FilterBank(std::move(a));
}

namespace {

void validate_config(const TrainConfig& cfg) {
    if (cfg.n_filt < 2 || cfg.n_filt % 2 != 0)
        throw InvalidFilterError("n_filt must be even and >= 2, got " +
                                 std::to_string(cfg.n_filt));
    if (!(cfg.learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
    if (!(cfg.momentum >= 0.0 && cfg.momentum < 1.0))
        throw std::invalid_argument("momentum must lie in [0, 1)");
    if (!(cfg.lambda_final >= 0.0)) throw std::invalid_argument("lambda_final must be >= 0");
    if (cfg.anneal_steps < 0) throw std::invalid_argument("anneal_steps must be >= 0");
    if (cfg.batch_size < 1) throw std::invalid_argument("batch_size must be positive");
    if (cfg.max_steps < 0) throw std::invalid_argument("max_steps must be >= 0");
    if (!(cfg.convergence_tol > 0.0))
        throw std::invalid_argument("convergence_tol must be positive");
    if (cfg.history_stride < 1) throw std::invalid_argument("history_stride must be positive");
}

void validate_dataset(const Dataset& data) {
    if (data.empty()) throw std::invalid_argument("training dataset is empty");
    for (const Signal& s : data.signals)
        if (!s.same_shape(data.signals.front()))
            throw ShapeError("training signals must share one shape");
}

double lambda_at(const TrainConfig& cfg, int step) {
    if (cfg.anneal_steps == 0) return cfg.lambda_final;
    const double frac = static_cast<double>(step) / static_cast<double>(cfg.anneal_steps);
    return cfg.lambda_final * std::min(1.0, frac);
}

double masked_sum(const std::array<double, 5>& reg, const ConditionMask& mask) {
    double sum = 0.0;
    for (std::size_t k = 0; k < 5; ++k)
        if (mask[k]) sum += reg[k];
    return sum;
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

} // namespace

std::pair<FilterBank, TrainHistory> train(const Dataset& data, const TrainConfig& cfg) {
    validate_config(cfg);
    return train(data, cfg, init_hypersphere(cfg.n_filt, cfg.seed));
}

std::pair<FilterBank, TrainHistory> train(const Dataset& data, const TrainConfig& cfg,
                                          const FilterBank& init) {
    validate_config(cfg);
    validate_dataset(data);
    if (static_cast<int>(init.size()) != cfg.n_filt)
        throw InvalidFilterError("initial filter length does not match n_filt");

    const std::size_t dataset_size = data.size();
    const std::size_t batch = std::min<std::size_t>(
        static_cast<std::size_t>(cfg.batch_size), dataset_size);

    // Deterministic example order, decoupled from the init draw.
    Rng order_rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<std::size_t> order(dataset_size);
    for (std::size_t i = 0; i < dataset_size; ++i) order[i] = i;
    for (std::size_t i = dataset_size; i > 1; --i)
        std::swap(order[i - 1], order[order_rng.below(i)]);

    std::vector<double> a = init.lowpass();
    std::vector<double> velocity(a.size(), 0.0);
    const std::size_t n_filt = a.size();

    TrainHistory history;
    std::vector<double> best_a = a;
    double best_metric = std::numeric_limits<double>::infinity();
    int quiet_steps = 0;
    std::size_t cursor = 0;

    std::vector<std::vector<double>> example_grads(batch);
    std::vector<double> example_sparsity(batch);

    for (int step = 0; step < cfg.max_steps; ++step) {
        const double lambda = lambda_at(cfg, step);
        const FilterBank fb{std::vector<double>(a)};

        std::atomic<bool> batch_failed{false};
        parallel_for(batch, [&](std::size_t i) {
            const Signal& sig = data.signals[order[(cursor + i) % dataset_size]];
            try {
                const WaveletCoefficients c = forward(sig, fb);
                example_sparsity[i] = sparsity_cost(c.values);
                example_grads[i] = filter_gradient(sig, fb, sparsity_gradient(c.values));
            } catch (const UndefinedSparsityError&) {
                batch_failed.store(true);
                example_grads[i].assign(n_filt, 0.0);
                example_sparsity[i] = 0.0;
            }
        });
        cursor = (cursor + batch) % dataset_size;

        if (batch_failed) {
            history.reason = StopReason::diverged;
            history.failed_step = step;
            history.steps = step;
            return {FilterBank(std::move(best_a)), std::move(history)};
        }

        // Fixed-order reduction keeps the result independent of scheduling.
        std::vector<double> grad(n_filt, 0.0);
        double mean_sparsity = 0.0;
        for (std::size_t i = 0; i < batch; ++i) {
            mean_sparsity += example_sparsity[i];
            for (std::size_t p = 0; p < n_filt; ++p) grad[p] += example_grads[i][p];
        }
        const double inv_batch = 1.0 / static_cast<double>(batch);
        mean_sparsity *= inv_batch;
        for (double& gp : grad) gp *= inv_batch;

        const std::vector<double> reg_grad = reg_gradient(fb, cfg.condition_toggle);
        for (std::size_t p = 0; p < n_filt; ++p) grad[p] += lambda * reg_grad[p];

        const std::array<double, 5> reg = reg_cost(fb);
        if (step % cfg.history_stride == 0) {
            CostBreakdown cb;
            cb.sparsity = mean_sparsity;
            for (std::size_t k = 0; k < 5; ++k) cb.reg[k] = cfg.condition_toggle[k] ? reg[k] : 0.0;
            cb.lambda = lambda;
            cb.total = mean_sparsity + lambda * masked_sum(reg, cfg.condition_toggle);
            history.step.push_back(step);
            history.cost.push_back(cb);
            history.filters.push_back(a);
        }

        if (!all_finite(grad) || !std::isfinite(mean_sparsity)) {
            history.reason = StopReason::diverged;
            history.failed_step = step;
            history.steps = step;
            return {FilterBank(std::move(best_a)), std::move(history)};
        }

        // Best iterate judged at the final multiplier so early low-lambda
        // steps cannot win with unmet conditions.
        const double metric =
            mean_sparsity + cfg.lambda_final * masked_sum(reg, cfg.condition_toggle);
        if (metric < best_metric) {
            best_metric = metric;
            best_a = a;
        }

        double grad_max = 0.0;
        for (double gp : grad) grad_max = std::max(grad_max, std::fabs(gp));
        quiet_steps = grad_max < cfg.convergence_tol ? quiet_steps + 1 : 0;

        for (std::size_t p = 0; p < n_filt; ++p) {
            velocity[p] = cfg.momentum * velocity[p] - cfg.learning_rate * grad[p];
            a[p] += velocity[p];
        }
        history.steps = step + 1;

        if (!all_finite(a)) {
            history.reason = StopReason::diverged;
            history.failed_step = step;
            return {FilterBank(std::move(best_a)), std::move(history)};
        }
        if (quiet_steps >= 10) {
            history.reason = StopReason::converged;
            return {FilterBank(std::move(best_a)), std::move(history)};
        }
    }
    history.reason = StopReason::max_steps;
    return {FilterBank(std::move(best_a)), std::move(history)};
}

CostMap cost_map(const Dataset& data, const GridSpec& grid, double lambda) {
    validate_dataset(data);
    if (grid.steps < 1) throw std::invalid_argument("grid resolution must be positive");
    if (!(grid.max > grid.min)) throw std::invalid_argument("grid max must exceed min");
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");

    const std::size_t n = static_cast<std::size_t>(grid.steps);
    const double width = (grid.max - grid.min) / static_cast<double>(n);

    CostMap map;
    map.axis.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        map.axis[i] = grid.min + (static_cast<double>(i) + 0.5) * width;
    map.values = Matrix(n, n);

    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) {
            const FilterBank fb{std::vector<double>{map.axis[i], map.axis[j]}};
            const double reg_sum = check_conditions(fb).total();
            double mean_sparsity = 0.0;
            bool defined = true;
            for (const Signal& sig : data.signals) {
                try {
                    mean_sparsity += sparsity_cost(forward(sig, fb).values);
                } catch (const UndefinedSparsityError&) {
                    defined = false;
                    break;
                }
            }
            map.values(i, j) = defined
                                   ? mean_sparsity / static_cast<double>(data.size()) +
                                         lambda * reg_sum
                                   : std::numeric_limits<double>::quiet_NaN();
        }
    });
    return map;
}

void write_cost_map(const CostMap& map, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    for (double x : map.axis) out << ',' << format_double(x);
    out << '\n';
    for (std::size_t i = 0; i < map.values.rows; ++i) {
        out << format_double(map.axis[i]);
        for (std::size_t j = 0; j < map.values.cols; ++j)
            out << ',' << format_double(map.values(i, j));
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path);
}

void write_history(const TrainHistory& history, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    const std::size_t n_filt = history.filters.empty() ? 0 : history.filters.front().size();
    out << "step,sparsity,r1,r2,r3,r4,r5,lambda,total";
    for (std::size_t p = 0; p < n_filt; ++p) out << ",a_" << p;
    out << '\n';
    for (std::size_t row = 0; row < history.step.size(); ++row) {
        const CostBreakdown& cb = history.cost[row];
        out << history.step[row] << ',' << format_double(cb.sparsity);
        for (double r : cb.reg) out << ',' << format_double(r);
        out << ',' << format_double(cb.lambda) << ',' << format_double(cb.total);
        for (double ap : history.filters[row]) out << ',' << format_double(ap);
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path);
}

} // namespace wavelearn
