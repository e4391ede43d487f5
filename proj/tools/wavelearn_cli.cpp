// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: training, transforms, basis export, cost maps and
// toy-data generation. Exit codes: 0 success, 1 usage error, 2 data error,
// 3 numerical failure.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wavelearn/backprop.hpp"
#include "wavelearn/dataio.hpp"
#include "wavelearn/dwt.hpp"
#include "wavelearn/errors.hpp"
#include "wavelearn/objective.hpp"
#include "wavelearn/trainer.hpp"

namespace {

using namespace wavelearn;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

struct GenerateFlags {
    std::string kind;
    std::string shape = "64";
    int count = 100;
    std::uint64_t seed = 1;
    int components = 3;
    double noise = 0.1;
    double width = 0.0;
};

void add_generator_params(CLI::App* cmd, GenerateFlags& flags, const std::string& seed_flag) {
    cmd->add_option("--shape", flags.shape, "signal shape: N (1D) or NxN (2D)");
    cmd->add_option("--count", flags.count, "number of signals");
    cmd->add_option(seed_flag, flags.seed, "generator seed");
    cmd->add_option("--components", flags.components, "spikes/blobs/sinusoids per signal");
    cmd->add_option("--noise", flags.noise, "white-noise level (sinusoid-noise)");
    cmd->add_option("--width", flags.width, "blob width in samples (0 = extent/16)");
}

Dataset run_generator(const GenerateFlags& flags) {
    GenParams params;
    params.components = flags.components;
    params.noise_sigma = flags.noise;
    params.width = flags.width;
    return generate(parse_generator_kind(flags.kind), parse_shape(flags.shape), flags.count,
                    flags.seed, params);
}

ConditionMask parse_toggle(const std::string& bits) {
    if (bits.size() != 5)
        throw std::invalid_argument("--toggle-conditions needs 5 bits, e.g. 11111");
    ConditionMask mask{};
    for (std::size_t i = 0; i < 5; ++i) {
        if (bits[i] != '0' && bits[i] != '1')
            throw std::invalid_argument("--toggle-conditions accepts only 0 and 1");
        mask[i] = bits[i] == '1';
    }
    return mask;
}

GridSpec parse_grid(const std::string& text) {
    GridSpec grid;
    const auto first = text.find(':');
    const auto second = text.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos)
        throw std::invalid_argument("--grid format is MIN:MAX:STEPS");
    try {
        grid.min = std::stod(text.substr(0, first));
        grid.max = std::stod(text.substr(first + 1, second - first - 1));
        grid.steps = std::stoi(text.substr(second + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("--grid format is MIN:MAX:STEPS");
    }
    return grid;
}

std::string format_taps(const std::vector<double>& a) {
    std::string out = "[";
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) out += ", ";
        out += format_double(a[i]);
    }
    return out + "]";
}

int cmd_train(const GenerateFlags& gen, const std::string& data_path, const TrainConfig& cfg,
              const std::string& out_path, const std::string& history_path) {
    const Dataset data = data_path.empty() ? run_generator(gen) : read_csv(data_path);
    auto [fb, history] = train(data, cfg);

    save_filter(fb, out_path);
    if (!history_path.empty()) write_history(history, history_path);

    if (history.reason == StopReason::diverged) {
        std::cerr << "numerical failure (non-finite gradient) at step " << history.failed_step
                  << "\n";
        return kExitNumerical;
    }

    // Final breakdown: mean over the full dataset at the final multiplier.
    double mean_sparsity = 0.0;
    for (const Signal& s : data.signals) mean_sparsity += sparsity_cost(forward(s, fb).values);
    mean_sparsity /= static_cast<double>(data.size());
    std::array<double, 5> reg = reg_cost(fb);
    double reg_sum = 0.0;
    for (std::size_t k = 0; k < 5; ++k) {
        if (!cfg.condition_toggle[k]) reg[k] = 0.0;
        reg_sum += reg[k];
    }

    std::cout << "train: reason=" << to_string(history.reason) << " steps=" << history.steps
              << " sparsity=" << format_double(mean_sparsity) << " reg=[" << format_double(reg[0])
              << "," << format_double(reg[1]) << "," << format_double(reg[2]) << ","
              << format_double(reg[3]) << "," << format_double(reg[4])
              << "] lambda=" << format_double(cfg.lambda_final)
              << " total=" << format_double(mean_sparsity + cfg.lambda_final * reg_sum)
              << " a=" << format_taps(fb.lowpass()) << "\n";
    return 0;
}

int cmd_transform(const std::string& filter_path, const std::string& data_path, bool inverse_mode,
                  const std::string& out_path) {
    const FilterBank fb = load_filter(filter_path);
    const Dataset data = read_csv(data_path);
    Dataset out;
    out.provenance = data.provenance;
    out.signals.reserve(data.size());
    for (const Signal& s : data.signals)
        out.signals.push_back(inverse_mode ? inverse(s, fb) : forward(s, fb));
    write_csv(out, out_path);
    std::cout << (inverse_mode ? "inverse" : "forward") << " transform of " << data.size()
              << " signal(s) -> " << out_path << "\n";
    return 0;
}

int cmd_basis(const std::string& filter_path, std::size_t size, const std::string& index_text,
              const std::string& out_path) {
    if (!is_power_of_two(size)) throw std::invalid_argument("--size must be a power of two");
    const FilterBank fb = load_filter(filter_path);
    const int levels = log2_exact(size);

    Signal basis = Signal::zeros(1, 1);
    const auto comma = index_text.find(',');
    if (comma == std::string::npos) {
        basis = basis_function(fb, levels, std::stoul(index_text));
    } else {
        basis = basis_function(fb, levels, std::stoul(index_text.substr(0, comma)),
                               std::stoul(index_text.substr(comma + 1)));
    }
    Dataset out;
    out.signals.push_back(std::move(basis));
    out.provenance = "basis";
    write_csv(out, out_path);
    std::cout << "basis function " << index_text << " at size " << size << " -> " << out_path
              << "\n";
    return 0;
}

int cmd_costmap(const std::string& data_path, const std::string& grid_text, double lambda,
                const std::string& out_path) {
    const Dataset data = read_csv(data_path);
    const CostMap map = cost_map(data, parse_grid(grid_text), lambda);
    write_cost_map(map, out_path);

    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < map.values.rows; ++i)
        for (std::size_t j = 0; j < map.values.cols; ++j)
            if (map.values(i, j) < best) {
                best = map.values(i, j);
                bi = i;
                bj = j;
            }
    std::cout << "cost map -> " << out_path << " argmin=(" << format_double(map.axis[bi]) << ", "
              << format_double(map.axis[bj]) << ") value=" << format_double(best) << "\n";
    return 0;
}

int cmd_generate(const GenerateFlags& flags, const std::string& out_path) {
    const Dataset data = run_generator(flags);
    write_csv(data, out_path);
    std::cout << "generated " << data.size() << " signal(s): " << data.provenance << " -> "
              << out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"learn orthonormal wavelet filter banks from signal ensembles"};
    app.require_subcommand(1);

    // train
    auto* train_cmd = app.add_subcommand("train", "learn a filter bank by gradient descent");
    GenerateFlags train_gen;
    std::string train_data, train_out, train_history;
    std::string toggle_bits = "11111";
    TrainConfig cfg;
    train_cmd->add_option("--data", train_data, "CSV dataset path");
    train_cmd->add_option("--generate", train_gen.kind,
                          "toy generator kind (point-like, gaussian-blobs, sinusoid-noise, "
                          "constant)");
    add_generator_params(train_cmd, train_gen, "--gen-seed");
    train_cmd->add_option("--nfilt", cfg.n_filt, "filter length (even)");
    train_cmd->add_option("--lr", cfg.learning_rate, "learning rate");
    train_cmd->add_option("--momentum", cfg.momentum, "momentum in [0,1)");
    train_cmd->add_option("--lambda", cfg.lambda_final, "final regularisation multiplier");
    train_cmd->add_option("--anneal", cfg.anneal_steps, "steps to ramp lambda from 0");
    train_cmd->add_option("--batch", cfg.batch_size, "batch size (>= dataset = full batch)");
    train_cmd->add_option("--steps", cfg.max_steps, "maximum update steps");
    train_cmd->add_option("--seed", cfg.seed, "training seed (init + batch order)");
    train_cmd->add_option("--toggle-conditions", toggle_bits, "five 0/1 bits, one per condition");
    train_cmd->add_option("--history-stride", cfg.history_stride, "record every k-th step");
    train_cmd->add_option("--tol", cfg.convergence_tol, "convergence tolerance on |grad|_inf");
    train_cmd->add_option("--out", train_out, "output filter path")->required();
    train_cmd->add_option("--history", train_history, "optional history CSV path");

    // transform
    auto* transform_cmd = app.add_subcommand("transform", "apply a filter bank to a dataset");
    std::string tf_filter, tf_data, tf_out;
    bool tf_inverse = false;
    transform_cmd->add_option("--filter", tf_filter, "filter path")->required();
    transform_cmd->add_option("--data", tf_data, "CSV dataset path")->required();
    transform_cmd->add_flag("--inverse", tf_inverse, "apply the inverse transform");
    transform_cmd->add_option("--out", tf_out, "output CSV path")->required();

    // basis
    auto* basis_cmd = app.add_subcommand("basis", "export one position-space basis function");
    std::string bs_filter, bs_index, bs_out;
    std::size_t bs_size = 0;
    basis_cmd->add_option("--filter", bs_filter, "filter path")->required();
    basis_cmd->add_option("--size", bs_size, "signal size 2^M")->required();
    basis_cmd->add_option("--index", bs_index, "coefficient index I (1D) or I,J (2D)")->required();
    basis_cmd->add_option("--out", bs_out, "output CSV path")->required();

    // costmap
    auto* costmap_cmd = app.add_subcommand("costmap", "average-cost map over a two-tap grid");
    std::string cm_data, cm_grid = "-1.5:1.5:101", cm_out;
    double cm_lambda = 10.0;
    costmap_cmd->add_option("--data", cm_data, "CSV dataset path")->required();
    costmap_cmd->add_option("--grid", cm_grid, "MIN:MAX:STEPS cells per axis");
    costmap_cmd->add_option("--lambda", cm_lambda, "regularisation multiplier");
    costmap_cmd->add_option("--out", cm_out, "output CSV path")->required();

    // generate
    auto* generate_cmd = app.add_subcommand("generate", "write a toy dataset as CSV");
    GenerateFlags gen;
    std::string gen_out;
    generate_cmd->add_option("--kind", gen.kind, "generator kind")->required();
    add_generator_params(generate_cmd, gen, "--seed");
    generate_cmd->add_option("--out", gen_out, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(train_cmd)) {
            const bool have_data = !train_data.empty();
            const bool have_gen = !train_gen.kind.empty();
            if (have_data == have_gen)
                throw std::invalid_argument("train needs exactly one of --data or --generate");
            cfg.condition_toggle = parse_toggle(toggle_bits);
            return cmd_train(train_gen, train_data, cfg, train_out, train_history);
        }
        if (app.got_subcommand(transform_cmd))
            return cmd_transform(tf_filter, tf_data, tf_inverse, tf_out);
        if (app.got_subcommand(basis_cmd)) return cmd_basis(bs_filter, bs_size, bs_index, bs_out);
        if (app.got_subcommand(costmap_cmd))
            return cmd_costmap(cm_data, cm_grid, cm_lambda, cm_out);
        if (app.got_subcommand(generate_cmd)) return cmd_generate(gen, gen_out);
    } catch (const UndefinedSparsityError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const ParseError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const IoError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const ShapeError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::out_of_range& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}
