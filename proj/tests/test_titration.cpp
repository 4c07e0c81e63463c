/**
 * @file test_titration.cpp
 * @brief Adjusting-amount staircase with deterministic and noisy agents.
 */

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qdiscount/titration.hpp"

using namespace qdiscount;

namespace {

const std::vector<double> kDelays = {1.0, 2.0, 5.0, 10.0, 30.0, 90.0, 365.0};

}  // namespace

TEST(AgentChoose, DeterministicExamples) {
    const ChoiceAgent agent{ModelSpec::hyperbolic(10.0, 0.1), 0.0, 0};
    const ScheduledReward delayed{10.0, 10.0};
    std::mt19937_64 rng(0);
    EXPECT_DOUBLE_EQ(subjective_delayed_value(agent, delayed), 5.0);
    EXPECT_TRUE(agent_choose(agent, 6.0, delayed, rng));
    EXPECT_TRUE(agent_choose(agent, 5.0, delayed, rng));
    EXPECT_FALSE(agent_choose(agent, 4.0, delayed, rng));
}

TEST(AgentChoose, NoisyAgentFollowsLogistic) {
    const ChoiceAgent agent{ModelSpec::hyperbolic(10.0, 0.1), 0.5, 0};
    const ScheduledReward delayed{10.0, 10.0};
    std::mt19937_64 rng(12);
    const int n = 20000;
    int at_half = 0, above = 0;
    for (int i = 0; i < n; ++i) {
        at_half += agent_choose(agent, 5.0, delayed, rng);
        above += agent_choose(agent, 5.5, delayed, rng);
    }
    EXPECT_NEAR(at_half / double(n), 0.5, 0.02);
    EXPECT_NEAR(above / double(n), 1.0 / (1.0 + std::exp(-1.0)), 0.02);
}

TEST(Titration, WorkedHyperbolicCase) {
    TitrationConfig cfg{{10.0}, 10.0, 0.5, 0.5, 10000};
    const ChoiceAgent agent{ModelSpec::hyperbolic(10.0, 0.1), 0.0, 0};
    const std::vector<TitrationTrace> tr = run_titration(cfg, agent);
    ASSERT_EQ(tr.size(), 1u);
    EXPECT_EQ(tr[0].v_d, 5.0);
    EXPECT_EQ(tr[0].v_s, 5.0);
    EXPECT_EQ(tr[0].indifference, 5.0);
    // descending 10, 9.5, ..., 5.0, then 4.5 is refused
    EXPECT_EQ(tr[0].choices.front().immediate_amount, 10.0);
    EXPECT_TRUE(tr[0].choices.front().chose_immediate);
}

TEST(Titration, StaircaseShape) {
    TitrationConfig cfg{{10.0}, 10.0, 0.5, 0.5, 10000};
    const ChoiceAgent agent{ModelSpec::hyperbolic(10.0, 0.1), 0.0, 0};
    const TitrationTrace tr = run_titration(cfg, agent)[0];
    std::size_t i = 0;
    for (double amount = 10.0; amount >= 5.0; amount -= 0.5, ++i) {
        EXPECT_EQ(tr.choices[i].immediate_amount, amount);
        EXPECT_TRUE(tr.choices[i].chose_immediate);
    }
    EXPECT_EQ(tr.choices[i].immediate_amount, 4.5);
    EXPECT_FALSE(tr.choices[i].chose_immediate);
    ++i;
    // ascending pass starts one step above zero
    EXPECT_EQ(tr.choices[i].immediate_amount, 0.5);
    EXPECT_EQ(tr.choices.back().immediate_amount, 5.0);
    EXPECT_TRUE(tr.choices.back().chose_immediate);
}

TEST(Titration, EveryCellWithinMinStep) {
    for (const Cell cell : kAllCells) {
        std::mt19937_64 rng(700 + static_cast<unsigned>(cell.time) * 3 + static_cast<unsigned>(cell.value));
        for (int n = 0; n < 5; ++n) {
            const oracle::Params p = oracle::random_params(cell, rng, 365.0);
            const ModelSpec spec = oracle::to_spec(cell, p);
            const TitrationConfig cfg = TitrationConfig::with_defaults(kDelays, p.v0);
            const std::vector<TitrationTrace> tr = run_titration(cfg, {spec, 0.0, 1});
            for (std::size_t i = 0; i < kDelays.size(); ++i) {
                const double truth = oracle::closed_form(cell, p, kDelays[i]).v;
                ASSERT_LE(std::abs(tr[i].indifference - truth), cfg.min_step * (1.0 + 1e-12))
                    << cell_name(cell) << " delay=" << kDelays[i];
            }
        }
    }
}

TEST(Titration, ConvergesAsMinStepShrinks) {
    const ModelSpec spec = ModelSpec::perceived(100.0, 0.2, 0.4, TimePerception::unified(0.3, 1.0, 0.1));
    for (double min_step : {1.0, 0.1, 0.01, 0.001}) {
        const TitrationConfig cfg{kDelays, 100.0, 5.0, min_step, 100000};
        const std::vector<TitrationTrace> tr = run_titration(cfg, {spec, 0.0, 0});
        for (std::size_t i = 0; i < kDelays.size(); ++i)
            EXPECT_LE(std::abs(tr[i].indifference - value(spec, kDelays[i])), min_step) << min_step;
    }
}

TEST(Titration, DeterministicEndpointsBracketTruth) {
    // ties go to the immediate reward, so both endpoints sit at or above the truth
    std::mt19937_64 rng(31);
    for (int n = 0; n < 100; ++n) {
        const Cell cell = kAllCells[static_cast<std::size_t>(n) % kAllCells.size()];
        const oracle::Params p = oracle::random_params(cell, rng, 365.0);
        const ModelSpec spec = oracle::to_spec(cell, p);
        const TitrationConfig cfg = TitrationConfig::with_defaults(kDelays, p.v0);
        for (const TitrationTrace& tr : run_titration(cfg, {spec, 0.0, 0})) {
            const double truth = value(spec, tr.delay);
            ASSERT_GE(tr.v_d, truth);
            ASSERT_GE(tr.v_s, truth);
            ASSERT_LE(tr.v_d, truth + cfg.min_step);
            ASSERT_LE(tr.v_s, truth + cfg.min_step);
            ASSERT_GE(tr.indifference, 0.0);
            ASSERT_LE(tr.indifference, p.v0);
        }
    }
}

TEST(Titration, NearRandomAgentRunsOutOfTrials) {
    TitrationConfig cfg = TitrationConfig::with_defaults({10.0}, 10.0);
    cfg.max_trials = 5;
    const ChoiceAgent agent{ModelSpec::hyperbolic(10.0, 0.1), 1e6, 3};
    EXPECT_THROW(run_titration(cfg, agent), NonConvergence);
}

TEST(Titration, NoisyTracesAreSeededAndThreadIndependent) {
    const TitrationConfig cfg = TitrationConfig::with_defaults(kDelays, 100.0);
    const ChoiceAgent agent{ModelSpec::hyperbolic(100.0, 0.05), 2.0, 42};
    const std::vector<TitrationTrace> a = run_titration(cfg, agent, 1);
    const std::vector<TitrationTrace> b = run_titration(cfg, agent, 1);
    const std::vector<TitrationTrace> c = run_titration(cfg, agent, 4);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
    ChoiceAgent other = agent;
    other.seed = 43;
    EXPECT_NE(a, run_titration(cfg, other, 1));
}

TEST(Titration, Validation) {
    const ChoiceAgent agent{ModelSpec::hyperbolic(10.0, 0.1), 0.0, 0};
    EXPECT_THROW(run_titration(TitrationConfig::with_defaults({}, 10.0), agent), DomainError);
    EXPECT_THROW(run_titration(TitrationConfig::with_defaults({0.0}, 10.0), agent), DomainError);
    EXPECT_THROW(run_titration(TitrationConfig{{1.0}, 10.0, 0.1, 0.5, 100}, agent), DomainError);
    EXPECT_THROW(run_titration(TitrationConfig::with_defaults({1.0}, -1.0), agent), DomainError);
    EXPECT_THROW(run_titration(TitrationConfig::with_defaults({1.0}, 10.0), {agent.spec, -1.0, 0}), DomainError);
}

TEST(Titration, DatasetFromTracesSortsByDelay) {
    const TitrationConfig cfg = TitrationConfig::with_defaults({30.0, 1.0, 5.0}, 10.0);
    const std::vector<TitrationTrace> tr = run_titration(cfg, {ModelSpec::hyperbolic(10.0, 0.1), 0.0, 0});
    const IndifferenceDataset d = dataset_from_traces(tr, 10.0);
    ASSERT_EQ(d.points.size(), 3u);
    EXPECT_EQ(d.points[0].delay, 1.0);
    EXPECT_EQ(d.points[2].delay, 30.0);
    EXPECT_EQ(d.points[2].value, tr[0].indifference);
}
