#include "ttsketch/decompose.hpp"
#include "ttsketch/error.hpp"
#include "ttsketch/experiments.hpp"
#include "ttsketch/io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace ttsketch;

struct RunOptions {
    std::string experiment;
    std::optional<std::size_t> d, n, rStar, r, p, samples, nnz, cutoff, decayRank;
    std::optional<double> tau, decayExponent;
    std::uint64_t seed = 1;
    std::size_t repeats = 3;
    std::size_t threads = 0;
    std::string out;
    bool fullScale = false;
};

struct DecomposeOptions {
    std::string input;
    std::string method = "det";
    std::optional<std::size_t> r;
    std::size_t p = 5;
    std::uint64_t seed = 1;
    std::string out;
};

std::string rank_string(const RankTuple& ranks)
{
    std::string s;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        s += (i ? "," : "") + std::to_string(ranks[i]);
    }
    return s;
}

int run(const RunOptions& o)
{
    const auto which = parse_experiment(o.experiment);
    if (!which) {
        std::cerr << "unknown experiment '" << o.experiment << "'\n";
        return 2;
    }
    ExperimentConfig cfg = default_config(*which);
    cfg.fullScale = o.fullScale;
    if (o.fullScale) {
        cfg.samples = 256;
    }
    auto set = [](auto& field, const auto& value) {
        if (value) {
            field = *value;
        }
    };
    set(cfg.d, o.d);
    set(cfg.n, o.n);
    set(cfg.rStar, o.rStar);
    set(cfg.r, o.r);
    set(cfg.p, o.p);
    set(cfg.samples, o.samples);
    set(cfg.nnz, o.nnz);
    set(cfg.cutoff, o.cutoff);
    set(cfg.decayRank, o.decayRank);
    set(cfg.tau, o.tau);
    set(cfg.decayExponent, o.decayExponent);
    cfg.seed = o.seed;
    cfg.repeats = o.repeats;
    cfg.threads = o.threads;
    cfg.outPath = o.out;

    // Fixing the swept parameter on the command line collapses its grid to that value.
    switch (cfg.experiment) {
    case Experiment::noise:
        if (o.tau) {
            cfg.grid = {*o.tau};
        }
        break;
    case Experiment::oversampling:
    case Experiment::oversampling_decay:
    case Experiment::als:
        if (o.p) {
            cfg.grid = {static_cast<double>(*o.p)};
        }
        break;
    case Experiment::order:
    case Experiment::order_decay:
    case Experiment::runtime:
        if (o.d) {
            cfg.grid = {static_cast<double>(*o.d)};
        }
        break;
    }

    const std::vector<SampleRecord> records = run_experiment(cfg);
    if (cfg.outPath.empty()) {
        write_csv(std::cout, records);
    } else {
        std::ofstream out(cfg.outPath, std::ios::binary);
        if (!out) {
            throw FormatError("cannot open " + cfg.outPath.string() + " for writing");
        }
        write_csv(out, records);
    }
    for (const ParameterSummary& s : summarize(records)) {
        std::fprintf(stderr, "%-18s param=%-6g samples=%-4zu eps_det=%.4g eps_rnd=%.4g ratio=%.4f t_rnd=%.3gms\n",
                     s.experiment.c_str(), s.param, s.samples, s.meanEpsDet, s.meanEpsRnd, s.meanRatio,
                     s.medianTRndMs);
    }
    return 0;
}

int decompose(const DecomposeOptions& o)
{
    const TensorFile input = read_tensor_file(o.input);
    if (std::holds_alternative<TTTensor>(input)) {
        std::cerr << "input is already a tensor train\n";
        return 2;
    }
    const Shape shape =
        std::visit([](const auto& x) -> Shape { return x.shape(); }, input);

    TTTensor result;
    const auto start = std::chrono::steady_clock::now();
    if (o.method == "det") {
        const DenseTensor x =
            std::holds_alternative<DenseTensor>(input) ? std::get<DenseTensor>(input)
                                                       : sparse_to_dense(std::get<SparseTensor>(input));
        result = o.r ? tt_svd_truncated(x, clip_ranks(shape, *o.r)).tt : tt_svd_exact(x).tt;
    } else if (o.method == "rand") {
        if (!o.r) {
            std::cerr << "--r is required for --method rand\n";
            return 2;
        }
        const RngStream rng(o.seed);
        const RankTuple sketch = clip_ranks(shape, *o.r + o.p);
        const TTTensor wide = std::holds_alternative<DenseTensor>(input)
                                  ? randomized_tt_svd(std::get<DenseTensor>(input), sketch, rng).tt
                                  : randomized_tt_svd(std::get<SparseTensor>(input), sketch, rng).tt;
        const RankTuple target = clip_ranks(shape, *o.r);
        std::vector<std::size_t> v(target.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = std::min(target[i], wide.ranks()[i]);
        }
        result = tt_round(wide, RankTuple(std::move(v)));
    } else {
        std::cerr << "unknown method '" << o.method << "'\n";
        return 2;
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    if (o.out.empty()) {
        write_tt(std::cout, result);
    } else {
        write_tensor_file(o.out, result);
    }
    std::fprintf(stderr, "ranks %s, %.3f ms\n", rank_string(result.ranks()).c_str(), ms);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Deterministic and randomized tensor-train decompositions"};
    app.require_subcommand(1);

    RunOptions runOpts;
    CLI::App* runCmd = app.add_subcommand("run", "Run an experiment and write CSV records");
    runCmd->add_option("experiment", runOpts.experiment,
                       "noise | oversampling | oversampling-decay | order | order-decay | runtime | als")
        ->required();
    runCmd->add_option("--d", runOpts.d, "Tensor order");
    runCmd->add_option("--n", runOpts.n, "Mode extent");
    runCmd->add_option("--rstar", runOpts.rStar, "Rank of the noiseless target");
    runCmd->add_option("--r", runOpts.r, "Target rank");
    runCmd->add_option("--p", runOpts.p, "Oversampling");
    runCmd->add_option("--tau", runOpts.tau, "Noise level");
    runCmd->add_option("--samples", runOpts.samples, "Samples per grid point");
    runCmd->add_option("--seed", runOpts.seed, "Base seed");
    runCmd->add_option("--nnz", runOpts.nnz, "Nonzeros of sparse inputs");
    runCmd->add_option("--decay-exp", runOpts.decayExponent, "Singular value decay exponent");
    runCmd->add_option("--cutoff", runOpts.cutoff, "Decay profile cutoff");
    runCmd->add_option("--decay-rank", runOpts.decayRank, "Rank of the train the decay profile is imposed on");
    runCmd->add_option("--repeats", runOpts.repeats, "Timed runs per record");
    runCmd->add_option("--threads", runOpts.threads, "Worker threads (0: all cores)");
    runCmd->add_option("--out", runOpts.out, "CSV output path (default: stdout)");
    runCmd->add_flag("--full-scale", runOpts.fullScale, "256 samples and the full order grid");

    DecomposeOptions decOpts;
    CLI::App* decCmd = app.add_subcommand("decompose", "Decompose a tensor file into a tensor train");
    decCmd->add_option("--input", decOpts.input, "Dense or sparse tensor file")->required();
    decCmd->add_option("--method", decOpts.method, "det | rand")->check(CLI::IsMember({"det", "rand"}));
    decCmd->add_option("--r", decOpts.r, "Target rank (det: omit for exact ranks)");
    decCmd->add_option("--p", decOpts.p, "Oversampling (rand)");
    decCmd->add_option("--seed", decOpts.seed, "Seed (rand)");
    decCmd->add_option("--out", decOpts.out, "Output TT file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*runCmd) {
            return run(runOpts);
        }
        return decompose(decOpts);
    } catch (const ttsketch::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
