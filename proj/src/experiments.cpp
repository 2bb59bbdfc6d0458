#include "ttsketch/experiments.hpp"

#include "ttsketch/als.hpp"
#include "ttsketch/error.hpp"
#include "ttsketch/generators.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

namespace ttsketch {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Largest dense tensor the runtime experiment densifies for the deterministic path.
constexpr std::size_t kRuntimeDenseLimit = std::size_t{1} << 20;

struct NamedExperiment {
    Experiment id;
    std::string_view name;
};

constexpr NamedExperiment kExperiments[] = {
    {Experiment::noise, "noise"},
    {Experiment::oversampling, "oversampling"},
    {Experiment::oversampling_decay, "oversampling-decay"},
    {Experiment::order, "order"},
    {Experiment::order_decay, "order-decay"},
    {Experiment::runtime, "runtime"},
    {Experiment::als, "als"},
};

std::uint64_t stream_index(std::size_t paramIndex, std::size_t sample)
{
    return (static_cast<std::uint64_t>(paramIndex) << 32) | static_cast<std::uint64_t>(sample);
}

Shape uniform_shape(std::size_t d, std::size_t n)
{
    return Shape(std::vector<std::size_t>(d, n));
}

/// Runs fn(i) for i in [0, count) on a pool of worker threads.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn)
{
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failureMutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    const std::lock_guard lock(failureMutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                    next = count;
                }
            }
        });
    }
    for (std::thread& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

template <typename T>
struct Timed {
    T value;
    double ms;
};

/// Median wall time of `repeats` calls, after one discarded warm-up call when repeats > 1.
template <typename Fn>
auto timed(std::size_t repeats, Fn&& fn) -> Timed<decltype(fn())>
{
    using Clock = std::chrono::steady_clock;
    repeats = std::max<std::size_t>(repeats, 1);
    if (repeats > 1) {
        static_cast<void>(fn());
    }
    std::vector<double> times;
    std::optional<decltype(fn())> last;
    for (std::size_t k = 0; k < repeats; ++k) {
        const auto start = Clock::now();
        last.emplace(fn());
        times.push_back(std::chrono::duration<double, std::milli>(Clock::now() - start).count());
    }
    std::sort(times.begin(), times.end());
    return {std::move(*last), times[times.size() / 2]};
}

double ratio_of(double rnd, double det)
{
    return det > 0.0 ? rnd / det : kNaN;
}

SampleRecord make_record(const ExperimentConfig& cfg, std::string_view id, std::size_t sample, double param,
                         double epsDet, double epsRnd, double tRnd, double tDet)
{
    return {std::string(id), sample, cfg.seed, param, epsDet, epsRnd, ratio_of(epsRnd, epsDet), tRnd, tDet};
}

struct DetResult {
    double eps;
    double ms;
};

DetResult deterministic_error(const DenseTensor& x, std::size_t r, std::size_t repeats)
{
    const RankTuple target = clip_ranks(x.shape(), r);
    auto det = timed(repeats, [&] { return tt_svd_truncated(x, target).tt; });
    return {relative_error(x, det.value), det.ms};
}

DenseTensor noisy_input(const Shape& shape, const ExperimentConfig& cfg, double tau, const RngStream& rng)
{
    return noisy_low_rank(shape, clip_ranks(shape, cfg.rStar), tau, rng).tensor;
}

/// Orders records produced per (sample, param) as param-major, sample-minor.
std::vector<SampleRecord> flatten(std::vector<std::vector<SampleRecord>>& perSample)
{
    std::vector<SampleRecord> out;
    const std::size_t perRow = perSample.empty() ? 0 : perSample.front().size();
    out.reserve(perSample.size() * perRow);
    for (std::size_t k = 0; k < perRow; ++k) {
        for (auto& row : perSample) {
            out.push_back(std::move(row[k]));
        }
    }
    return out;
}

std::vector<std::size_t> integer_grid(const std::vector<double>& grid, const char* what)
{
    std::vector<std::size_t> out;
    out.reserve(grid.size());
    for (double v : grid) {
        if (!(v >= 0.0) || v != std::floor(v)) {
            throw DomainError(std::string(what) + " grid values must be nonnegative integers");
        }
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

void require_samples(const ExperimentConfig& cfg)
{
    if (cfg.samples == 0) {
        throw DomainError("sample count must be >= 1");
    }
    if (cfg.r == 0) {
        throw DomainError("target rank must be >= 1");
    }
}

/// Entrywise min; a zero input leaves the randomized train at rank one.
RankTuple capped_ranks(const RankTuple& target, const RankTuple& available)
{
    std::vector<std::size_t> v(target.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = std::min(target[i], available[i]);
    }
    return RankTuple(std::move(v));
}

}  // namespace

std::optional<Experiment> parse_experiment(std::string_view name)
{
    for (const auto& e : kExperiments) {
        if (e.name == name) {
            return e.id;
        }
    }
    return std::nullopt;
}

std::string_view experiment_name(Experiment e)
{
    for (const auto& x : kExperiments) {
        if (x.id == e) {
            return x.name;
        }
    }
    return "unknown";
}

ExperimentConfig default_config(Experiment e)
{
    ExperimentConfig cfg;
    cfg.experiment = e;
    if (e == Experiment::runtime) {
        cfg.n = 2;
        cfg.r = 10;
        cfg.p = 10;
    }
    return cfg;
}

std::vector<double> parameter_grid(const ExperimentConfig& cfg)
{
    if (!cfg.grid.empty()) {
        return cfg.grid;
    }
    switch (cfg.experiment) {
    case Experiment::noise: {
        std::vector<double> g;
        for (int k = 0; k <= 10; ++k) {
            g.push_back(k / 100.0);
        }
        return g;
    }
    case Experiment::oversampling:
    case Experiment::oversampling_decay:
    case Experiment::als:
        return {0, 1, 2, 3, 5, 8, 12, 17, 25};
    case Experiment::order:
    case Experiment::order_decay: {
        std::vector<double> g;
        for (int d = 4; d <= (cfg.fullScale ? 13 : 11); ++d) {
            g.push_back(d);
        }
        return g;
    }
    case Experiment::runtime:
        return {10, 20, 40, 60};
    }
    return {};
}

TTTensor randomized_truncated(const DenseTensor& x, std::size_t r, std::size_t p, const RngStream& rng)
{
    const TTTensor t = randomized_tt_svd(x, clip_ranks(x.shape(), r + p), rng).tt;
    return tt_round(t, capped_ranks(clip_ranks(x.shape(), r), t.ranks()));
}

DenseTensor decay_input(const Shape& shape, const ExperimentConfig& cfg, const RngStream& rng)
{
    const TTTensor t = random_tt_decay(shape, clip_ranks(shape, cfg.decayRank), cfg.decayExponent, cfg.cutoff, rng);
    return tt_evaluate(t);
}

std::vector<SampleRecord> run_noise(const ExperimentConfig& cfg)
{
    require_samples(cfg);
    const std::vector<double> taus = parameter_grid(cfg);
    const Shape shape = uniform_shape(cfg.d, cfg.n);
    std::vector<std::vector<SampleRecord>> perSample(cfg.samples, std::vector<SampleRecord>(taus.size()));
    parallel_for(cfg.samples * taus.size(), cfg.threads, [&](std::size_t task) {
        const std::size_t k = task / cfg.samples;
        const std::size_t sample = task % cfg.samples;
        const RngStream base(cfg.seed, stream_index(k, sample));
        const DenseTensor x = noisy_input(shape, cfg, taus[k], base.substream(0));
        const DetResult det = deterministic_error(x, cfg.r, cfg.repeats);
        auto rnd = timed(cfg.repeats, [&] { return randomized_truncated(x, cfg.r, cfg.p, base.substream(1)); });
        perSample[sample][k] = make_record(cfg, "noise", sample, taus[k], det.eps, relative_error(x, rnd.value),
                                           rnd.ms, det.ms);
    });
    return flatten(perSample);
}

std::vector<SampleRecord> run_oversampling(const ExperimentConfig& cfg)
{
    require_samples(cfg);
    const bool decay = cfg.experiment == Experiment::oversampling_decay;
    const std::string_view id = decay ? "oversampling-decay" : "oversampling";
    const std::vector<std::size_t> ps = integer_grid(parameter_grid(cfg), "oversampling");
    const Shape shape = uniform_shape(cfg.d, cfg.n);
    std::vector<std::vector<SampleRecord>> perSample(cfg.samples);
    parallel_for(cfg.samples, cfg.threads, [&](std::size_t sample) {
        const RngStream inputRng = RngStream(cfg.seed, stream_index(0, sample)).substream(0);
        const DenseTensor x = decay ? decay_input(shape, cfg, inputRng) : noisy_input(shape, cfg, cfg.tau, inputRng);
        const DetResult det = deterministic_error(x, cfg.r, cfg.repeats);
        std::vector<SampleRecord>& row = perSample[sample];
        for (std::size_t k = 0; k < ps.size(); ++k) {
            const RngStream sketchRng = RngStream(cfg.seed, stream_index(k + 1, sample)).substream(1);
            auto rnd = timed(cfg.repeats, [&] { return randomized_truncated(x, cfg.r, ps[k], sketchRng); });
            row.push_back(make_record(cfg, id, sample, static_cast<double>(ps[k]), det.eps,
                                      relative_error(x, rnd.value), rnd.ms, det.ms));
        }
    });
    return flatten(perSample);
}

std::vector<SampleRecord> run_order(const ExperimentConfig& cfg)
{
    require_samples(cfg);
    const bool decay = cfg.experiment == Experiment::order_decay;
    const std::string_view id = decay ? "order-decay" : "order";
    const std::vector<std::size_t> orders = integer_grid(parameter_grid(cfg), "order");
    for (std::size_t d : orders) {
        if (d < 2) {
            throw DomainError("order grid values must be >= 2");
        }
    }
    std::vector<std::vector<SampleRecord>> perSample(cfg.samples, std::vector<SampleRecord>(orders.size()));
    parallel_for(cfg.samples * orders.size(), cfg.threads, [&](std::size_t task) {
        const std::size_t k = task / cfg.samples;
        const std::size_t sample = task % cfg.samples;
        const Shape shape = uniform_shape(orders[k], cfg.n);
        const RngStream base(cfg.seed, stream_index(k, sample));
        const DenseTensor x =
            decay ? decay_input(shape, cfg, base.substream(0)) : noisy_input(shape, cfg, cfg.tau, base.substream(0));
        const DetResult det = deterministic_error(x, cfg.r, cfg.repeats);
        auto rnd = timed(cfg.repeats, [&] { return randomized_truncated(x, cfg.r, cfg.p, base.substream(1)); });
        perSample[sample][k] = make_record(cfg, id, sample, static_cast<double>(orders[k]), det.eps,
                                           relative_error(x, rnd.value), rnd.ms, det.ms);
    });
    return flatten(perSample);
}

std::vector<SampleRecord> run_runtime(const ExperimentConfig& cfg)
{
    require_samples(cfg);
    const std::vector<std::size_t> orders = integer_grid(parameter_grid(cfg), "order");
    std::vector<SampleRecord> out;
    // Sequential on purpose: concurrent samples would distort the timings.
    for (std::size_t k = 0; k < orders.size(); ++k) {
        const std::size_t d = orders[k];
        if (d < 2) {
            throw DomainError("order grid values must be >= 2");
        }
        const Shape shape = uniform_shape(d, cfg.n);
        for (std::size_t sample = 0; sample < cfg.samples; ++sample) {
            const RngStream base(cfg.seed, stream_index(k, sample));
            const SparseTensor x = gaussian_sparse(shape, cfg.nnz, base.substream(0));
            const RankTuple sketch = RankTuple::uniform(d - 1, cfg.r + cfg.p);
            auto rnd = timed(cfg.repeats, [&] { return randomized_tt_svd(x, sketch, base.substream(1)).tt; });

            double epsDet = kNaN;
            double epsRnd = kNaN;
            double tDet = kNaN;
            const auto count = shape.element_count();
            if (count && *count <= kRuntimeDenseLimit && x.nnz() > 0) {
                const DenseTensor dense = sparse_to_dense(x);
                const DetResult det = deterministic_error(dense, cfg.r, cfg.repeats);
                const RankTuple target = capped_ranks(clip_ranks(shape, cfg.r), rnd.value.ranks());
                epsRnd = relative_error(dense, tt_round(rnd.value, target));
                epsDet = det.eps;
                tDet = det.ms;
            }
            out.push_back(make_record(cfg, "runtime", sample, static_cast<double>(d), epsDet, epsRnd, rnd.ms, tDet));
        }
    }
    return out;
}

std::vector<SampleRecord> run_als(const ExperimentConfig& cfg)
{
    require_samples(cfg);
    const std::vector<std::size_t> ps = integer_grid(parameter_grid(cfg), "oversampling");
    const Shape shape = uniform_shape(cfg.d, cfg.n);
    std::vector<std::vector<SampleRecord>> perSample(cfg.samples);
    parallel_for(cfg.samples, cfg.threads, [&](std::size_t sample) {
        const RngStream inputRng = RngStream(cfg.seed, stream_index(0, sample)).substream(0);
        const DenseTensor x = decay_input(shape, cfg, inputRng);
        const DetResult det = deterministic_error(x, cfg.r, cfg.repeats);
        const RankTuple target = clip_ranks(shape, cfg.r);
        std::vector<SampleRecord>& row = perSample[sample];
        for (std::size_t k = 0; k < ps.size(); ++k) {
            const RngStream base(cfg.seed, stream_index(k + 1, sample));
            const RankTuple wide = clip_ranks(shape, cfg.r + ps[k]);
            auto als = timed(cfg.repeats, [&] {
                return tt_round(als_half_sweep(x, wide, base.substream(2)).tt, target);
            });
            row.push_back(make_record(cfg, "als", sample, static_cast<double>(ps[k]), det.eps,
                                      relative_error(x, als.value), als.ms, det.ms));
            auto rnd = timed(cfg.repeats, [&] { return randomized_truncated(x, cfg.r, ps[k], base.substream(1)); });
            row.push_back(make_record(cfg, "als-rnd", sample, static_cast<double>(ps[k]), det.eps,
                                      relative_error(x, rnd.value), rnd.ms, det.ms));
        }
    });
    return flatten(perSample);
}

std::vector<SampleRecord> run_experiment(const ExperimentConfig& cfg)
{
    switch (cfg.experiment) {
    case Experiment::noise:
        return run_noise(cfg);
    case Experiment::oversampling:
    case Experiment::oversampling_decay:
        return run_oversampling(cfg);
    case Experiment::order:
    case Experiment::order_decay:
        return run_order(cfg);
    case Experiment::runtime:
        return run_runtime(cfg);
    case Experiment::als:
        return run_als(cfg);
    }
    throw DomainError("unknown experiment");
}

void write_csv(std::ostream& out, const std::vector<SampleRecord>& records)
{
    out << "# ttsketch-csv v1\n" << kCsvHeader << '\n';
    char buf[512];
    for (const SampleRecord& r : records) {
        std::snprintf(buf, sizeof buf, "%s,%zu,%llu,%.17g,%.17g,%.17g,%.17g,%.6f,%.6f\n", r.experiment.c_str(),
                      r.sample, static_cast<unsigned long long>(r.seed), r.param, r.epsDet, r.epsRnd, r.ratio,
                      r.tRndMs, r.tDetMs);
        out << buf;
    }
    if (!out) {
        throw FormatError("CSV write failed");
    }
}

std::vector<ParameterSummary> summarize(const std::vector<SampleRecord>& records)
{
    std::vector<ParameterSummary> out;
    std::vector<std::vector<double>> times;
    std::map<std::pair<std::string, double>, std::size_t> slot;
    for (const SampleRecord& r : records) {
        auto [it, inserted] = slot.try_emplace({r.experiment, r.param}, out.size());
        if (inserted) {
            out.push_back({r.experiment, r.param});
            times.emplace_back();
        }
        ParameterSummary& s = out[it->second];
        ++s.samples;
        s.meanEpsDet += r.epsDet;
        s.meanEpsRnd += r.epsRnd;
        s.meanRatio += r.ratio;
        times[it->second].push_back(r.tRndMs);
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        ParameterSummary& s = out[i];
        const double n = static_cast<double>(s.samples);
        s.meanEpsDet /= n;
        s.meanEpsRnd /= n;
        s.meanRatio /= n;
        std::vector<double>& t = times[i];
        std::sort(t.begin(), t.end());
        s.medianTRndMs = t[t.size() / 2];
    }
    return out;
}

}  // namespace ttsketch
