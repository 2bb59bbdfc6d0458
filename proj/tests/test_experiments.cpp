#include "ttsketch/experiments.hpp"
#include "ttsketch/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

namespace {

using namespace ttsketch;

ExperimentConfig small(Experiment e)
{
    ExperimentConfig cfg = default_config(e);
    cfg.d = 6;
    cfg.n = 3;
    cfg.rStar = 4;
    cfg.r = 4;
    cfg.p = 3;
    cfg.samples = 4;
    cfg.repeats = 1;
    cfg.decayRank = 20;
    return cfg;
}

/// CSV with the two timing columns blanked.
std::string csv_without_times(const std::vector<SampleRecord>& records)
{
    std::vector<SampleRecord> copy = records;
    for (SampleRecord& r : copy) {
        r.tRndMs = 0.0;
        r.tDetMs = 0.0;
    }
    std::ostringstream out;
    write_csv(out, copy);
    return out.str();
}

TEST(Experiments, NamesRoundTrip)
{
    for (Experiment e : {Experiment::noise, Experiment::oversampling, Experiment::oversampling_decay,
                         Experiment::order, Experiment::order_decay, Experiment::runtime, Experiment::als}) {
        EXPECT_EQ(parse_experiment(experiment_name(e)), e);
    }
    EXPECT_FALSE(parse_experiment("bogus").has_value());
}

TEST(Experiments, DefaultsAndGrids)
{
    const ExperimentConfig noise = default_config(Experiment::noise);
    EXPECT_EQ(noise.d, 10u);
    EXPECT_EQ(noise.n, 4u);
    EXPECT_EQ(noise.rStar, 10u);
    EXPECT_EQ(noise.r, 10u);
    EXPECT_EQ(noise.p, 5u);
    EXPECT_EQ(noise.samples, 32u);
    EXPECT_EQ(parameter_grid(noise).size(), 11u);
    const ExperimentConfig rt = default_config(Experiment::runtime);
    EXPECT_EQ(rt.n, 2u);
    EXPECT_EQ(rt.p, 10u);
    EXPECT_EQ(rt.nnz, 500u);
    EXPECT_EQ(parameter_grid(rt), (std::vector<double>{10, 20, 40, 60}));
    EXPECT_EQ(parameter_grid(default_config(Experiment::als)),
              (std::vector<double>{0, 1, 2, 3, 5, 8, 12, 17, 25}));
    ExperimentConfig order = default_config(Experiment::order);
    EXPECT_EQ(parameter_grid(order).back(), 11.0);
    order.fullScale = true;
    EXPECT_EQ(parameter_grid(order).front(), 4.0);
    EXPECT_EQ(parameter_grid(order).back(), 13.0);
}

TEST(Experiments, ZeroNoiseIsExactForBothMethods)
{
    ExperimentConfig cfg = small(Experiment::noise);
    cfg.grid = {0.0};
    for (const SampleRecord& r : run_noise(cfg)) {
        EXPECT_LE(r.epsDet, 1e-10);
        EXPECT_LE(r.epsRnd, 1e-10);
    }
}

TEST(Experiments, CsvIsReproducibleAndRatiosRecomputable)
{
    for (Experiment e : {Experiment::noise, Experiment::oversampling, Experiment::oversampling_decay,
                         Experiment::order, Experiment::order_decay, Experiment::als}) {
        ExperimentConfig cfg = small(e);
        cfg.grid = e == Experiment::noise ? std::vector<double>{0.02, 0.05}
                   : (e == Experiment::order || e == Experiment::order_decay) ? std::vector<double>{4, 5}
                                                                                 : std::vector<double>{2, 5};
        const std::vector<SampleRecord> a = run_experiment(cfg);
        cfg.threads = 1;
        const std::vector<SampleRecord> b = run_experiment(cfg);
        EXPECT_EQ(csv_without_times(a), csv_without_times(b)) << experiment_name(e);
        ASSERT_EQ(a.size(), (e == Experiment::als ? 2 : 1) * cfg.samples * cfg.grid.size());
        for (const SampleRecord& r : a) {
            EXPECT_DOUBLE_EQ(r.ratio, r.epsRnd / r.epsDet);
            EXPECT_GE(r.tRndMs, 0.0);
        }
    }
}

TEST(Experiments, RecordsAreParamMajor)
{
    ExperimentConfig cfg = small(Experiment::noise);
    cfg.grid = {0.01, 0.03};
    const std::vector<SampleRecord> recs = run_noise(cfg);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        EXPECT_EQ(recs[i].sample, i % cfg.samples);
        EXPECT_EQ(recs[i].param, cfg.grid[i / cfg.samples]);
    }
}

TEST(Experiments, SamplesAreIndependentOfEachOther)
{
    // Sample k's record must not depend on how many other samples run.
    ExperimentConfig cfg = small(Experiment::oversampling);
    cfg.grid = {3};
    const std::vector<SampleRecord> many = run_experiment(cfg);
    cfg.samples = 2;
    const std::vector<SampleRecord> few = run_experiment(cfg);
    for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_EQ(few[k].epsDet, many[k].epsDet);
        EXPECT_EQ(few[k].epsRnd, many[k].epsRnd);
    }
}

TEST(Experiments, RuntimeRecordsDeterministicPathOnlyWhenSmall)
{
    ExperimentConfig cfg = default_config(Experiment::runtime);
    cfg.samples = 1;
    cfg.repeats = 1;
    cfg.grid = {10, 24};
    const std::vector<SampleRecord> recs = run_runtime(cfg);
    ASSERT_EQ(recs.size(), 2u);
    EXPECT_FALSE(std::isnan(recs[0].epsDet));
    EXPECT_FALSE(std::isnan(recs[0].tDetMs));
    EXPECT_TRUE(std::isnan(recs[1].tDetMs));
    EXPECT_GT(recs[1].tRndMs, 0.0);
}

TEST(Experiments, DeterministicPathIsMuchSlowerAtOrderTwenty)
{
    ExperimentConfig cfg = default_config(Experiment::runtime);
    cfg.samples = 1;
    cfg.repeats = 3;
    cfg.grid = {20};
    const SampleRecord r = run_runtime(cfg).front();
    EXPECT_GE(r.tDetMs, 10.0 * r.tRndMs) << "det " << r.tDetMs << " ms, rnd " << r.tRndMs << " ms";
}

TEST(Experiments, CsvLayout)
{
    SampleRecord r{"noise", 3, 1, 0.05, 0.1, 0.2, 2.0, 1.5, 2.5};
    std::ostringstream out;
    write_csv(out, {r});
    EXPECT_EQ(out.str(), "# ttsketch-csv v1\n"
                         "experiment,sample,seed,param,eps_det,eps_rnd,ratio,t_rnd_ms,t_det_ms\n"
                         "noise,3,1,0.050000000000000003,0.10000000000000001,0.20000000000000001,2,1.500000,2.500000\n");
}

TEST(Experiments, SummaryAveragesPerParameter)
{
    const std::vector<SampleRecord> recs = {{"noise", 0, 1, 0.1, 1, 2, 2, 5, 0},
                                            {"noise", 1, 1, 0.1, 1, 4, 4, 1, 0},
                                            {"noise", 2, 1, 0.1, 1, 3, 3, 3, 0},
                                            {"noise", 0, 1, 0.2, 1, 1, 1, 1, 0}};
    const std::vector<ParameterSummary> s = summarize(recs);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].samples, 3u);
    EXPECT_DOUBLE_EQ(s[0].meanRatio, 3.0);
    EXPECT_DOUBLE_EQ(s[0].medianTRndMs, 3.0);
    EXPECT_EQ(s[1].param, 0.2);
}

TEST(Experiments, InvalidConfigurations)
{
    ExperimentConfig cfg = small(Experiment::oversampling);
    cfg.grid = {2.5};
    EXPECT_THROW(static_cast<void>(run_experiment(cfg)), DomainError);
    cfg = small(Experiment::noise);
    cfg.samples = 0;
    EXPECT_THROW(static_cast<void>(run_experiment(cfg)), DomainError);
    cfg = small(Experiment::order);
    cfg.grid = {1};
    EXPECT_THROW(static_cast<void>(run_experiment(cfg)), DomainError);
}

}  // namespace
