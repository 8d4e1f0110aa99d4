#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bornlab/episodes.hpp"

using namespace bornlab;
using Catch::Approx;

namespace {

ExperimentalEpisodeSpec make_spec(DensityOperator state, PauliAxis axis, long steps = 30000,
                                  int quantization = 50) {
    AgentConfig agent;
    agent.quantization = quantization;
    agent.epsilon = 0.5;
    agent.steps = steps;
    return ExperimentalEpisodeSpec{std::move(state), pauli_measurement(axis), sic_tetrahedron(),
                                   agent};
}

} // namespace

TEST_CASE("dataset generation", "[episodes]") {
    Rng rng = make_rng(10);
    auto zeros = generate_dataset(0.0, 1000, rng);
    CHECK(std::count(zeros.begin(), zeros.end(), 1) == 0);

    auto ones = generate_dataset(1.0, 1000, rng);
    CHECK(std::count(ones.begin(), ones.end(), 0) == 0);

    Rng freq_rng = make_rng(77);
    auto sample = generate_dataset(0.22, 300000, freq_rng);
    double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / sample.size();
    CHECK(std::abs(mean - 0.22) < 0.004);

    Rng r1 = make_rng(5), r2 = make_rng(5);
    CHECK(generate_dataset(0.5, 1000, r1) == generate_dataset(0.5, 1000, r2));

    CHECK_THROWS_AS(generate_dataset(1.5, 10, rng), std::invalid_argument);
}

TEST_CASE("learning episode plan covers the three experiments", "[episodes]") {
    ExperimentalEpisodeSpec spec = make_spec(DensityOperator::maximally_mixed(), PauliAxis::Z);
    auto plan = learning_episode_plan(spec);
    REQUIRE(plan.size() == 14); // 2 + 4 + 8 for a two-outcome measurement

    int count1 = 0, count2 = 0, count3 = 0;
    for (const auto& entry : plan) {
        if (entry.experiment == 1) ++count1;
        if (entry.experiment == 2) ++count2;
        if (entry.experiment == 3) ++count3;
    }
    CHECK(count1 == 2);
    CHECK(count2 == 4);
    CHECK(count3 == 8);

    // Maximally mixed input: every reference probability is 1/4.
    for (const auto& entry : plan)
        if (entry.experiment == 2) CHECK(entry.probability == Approx(0.25).margin(1e-12));

    // Conditional probabilities do not depend on the input state.
    ExperimentalEpisodeSpec other = make_spec(DensityOperator::pure({1.0, 0.0}), PauliAxis::Z);
    auto other_plan = learning_episode_plan(other);
    for (std::size_t i = 0; i < plan.size(); ++i)
        if (plan[i].experiment == 3)
            CHECK(plan[i].probability == Approx(other_plan[i].probability).margin(1e-14));
}

TEST_CASE("experimental episode converges near the Born probabilities", "[episodes]") {
    ExperimentalEpisodeSpec spec =
        make_spec(DensityOperator::pure({1.0, 0.0}), PauliAxis::Z, 300000);
    EpisodeObservation obs = run_experimental_episode(spec, 99);

    // Born distribution is (1, 0); allow quantization plus statistical spread.
    CHECK(obs.q[0] == Approx(1.0).margin(0.07));
    CHECK(obs.q[1] == Approx(0.0).margin(0.07));

    // Bets live on the grid.
    for (double bet : {obs.q[0], obs.q[1], obs.p[0], obs.p[1], obs.p[2], obs.p[3]}) {
        CHECK(bet >= 0.0);
        CHECK(bet <= 1.0);
        CHECK(std::round(bet * 50) / 50 == Approx(bet).margin(1e-12));
    }

    // The learned values satisfy the probability-only Born rule loosely.
    Eigen::VectorXd predicted = urgleichung_predict(obs.p, obs.r);
    for (int j = 0; j < 2; ++j) CHECK(std::abs(predicted[j] - obs.q[j]) < 0.12);
}

TEST_CASE("mixed state reference bets concentrate at 1/4", "[episodes]") {
    ExperimentalEpisodeSpec spec =
        make_spec(DensityOperator::maximally_mixed(), PauliAxis::X, 300000);
    EpisodeObservation obs = run_experimental_episode(spec, 123);
    for (int i = 0; i < 4; ++i) CHECK(obs.p[i] == Approx(0.25).margin(0.07));
}

TEST_CASE("episode results do not depend on plan order", "[episodes]") {
    ExperimentalEpisodeSpec spec = make_spec(DensityOperator::pure({0.6, 0.8}), PauliAxis::Y, 2000);
    auto plan = learning_episode_plan(spec);
    EpisodeObservation in_order = run_planned_episode(spec, plan, 31);

    std::vector<PlanEntry> shuffled = plan;
    Rng rng = make_rng(1);
    for (std::size_t i = shuffled.size(); i > 1; --i)
        std::swap(shuffled[i - 1], shuffled[static_cast<std::size_t>(uniform_below(rng, i))]);
    EpisodeObservation permuted = run_planned_episode(spec, shuffled, 31);

    CHECK(in_order.q == permuted.q);
    CHECK(in_order.p == permuted.p);
    CHECK(in_order.r == permuted.r);
}

TEST_CASE("shared categorical stream variant stays on the grid", "[episodes]") {
    ExperimentalEpisodeSpec spec = make_spec(DensityOperator::pure({0.8, 0.6}), PauliAxis::Z, 20000);
    spec.shared_reference_stream = true;
    EpisodeObservation obs = run_experimental_episode(spec, 5);
    for (int i = 0; i < 4; ++i) {
        CHECK(obs.p[i] >= 0.0);
        CHECK(obs.p[i] <= 1.0);
    }
    // True reference probabilities are unchanged by the stream option.
    auto plan = learning_episode_plan(spec);
    for (const auto& entry : plan)
        if (entry.experiment == 2)
            CHECK(obs.p_true[entry.sic_i] == Approx(entry.probability).margin(1e-14));
}

TEST_CASE("exact observation carries the true probabilities", "[episodes]") {
    ExperimentalEpisodeSpec spec = make_spec(DensityOperator::pure({1.0, 0.0}), PauliAxis::Z);
    EpisodeObservation obs = exact_observation(spec);
    CHECK(obs.q[0] == 1.0);
    CHECK(obs.q[1] == 0.0);
    CHECK(obs.q == obs.q_true);
    CHECK(obs.r == obs.r_true);
    Eigen::VectorXd predicted = urgleichung_predict(obs.p, obs.r);
    for (int j = 0; j < 2; ++j) CHECK(predicted[j] == Approx(obs.q[j]).margin(1e-12));
}

TEST_CASE("gaussian oracle observation", "[episodes]") {
    ExperimentalEpisodeSpec spec = make_spec(DensityOperator::pure({0.6, 0.8}), PauliAxis::X);
    EpisodeObservation truth = exact_observation(spec);

    Rng rng = make_rng(17);
    EpisodeObservation exact_grid = gaussian_oracle_observation(truth, 0.0, 50, rng);
    for (int i = 0; i < 4; ++i)
        CHECK(exact_grid.p[i] == Approx(std::round(truth.p_true[i] * 50) / 50).margin(1e-14));

    // Without rounding the draws average to the true value.
    double target = truth.p_true[1];
    double sum = 0.0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        EpisodeObservation noisy = gaussian_oracle_observation(truth, 0.02, std::nullopt, rng);
        sum += noisy.p[1];
    }
    CHECK(sum / draws == Approx(target).margin(0.001));

    // Clamping: probabilities of 1 never exceed 1.
    ExperimentalEpisodeSpec sure = make_spec(DensityOperator::pure({1.0, 0.0}), PauliAxis::Z);
    EpisodeObservation sure_truth = exact_observation(sure);
    for (int i = 0; i < 200; ++i) {
        EpisodeObservation noisy = gaussian_oracle_observation(sure_truth, 0.3, 50, rng);
        CHECK(noisy.q[0] <= 1.0);
        CHECK(noisy.q[0] >= 0.0);
    }

    CHECK_THROWS_AS(gaussian_oracle_observation(truth, -0.1, 50, rng), std::invalid_argument);
}

TEST_CASE("campaign shape, determinism, grid", "[episodes]") {
    CampaignConfig config;
    config.n_states = 4;
    config.agent.steps = 2000;
    config.agent.quantization = 50;
    config.master_seed = 12;

    auto episodes = run_campaign(config);
    REQUIRE(episodes.size() == 12); // 4 states x 3 Pauli axes
    for (const auto& e : episodes) {
        for (int i = 0; i < 4; ++i) {
            CHECK(e.observation.p[i] >= 0.0);
            CHECK(e.observation.p[i] <= 1.0);
            CHECK(std::round(e.observation.p[i] * 50) / 50 ==
                  Approx(e.observation.p[i]).margin(1e-12));
        }
    }

    auto again = run_campaign(config);
    for (std::size_t i = 0; i < episodes.size(); ++i) {
        CHECK(episodes[i].observation.q == again[i].observation.q);
        CHECK(episodes[i].observation.p == again[i].observation.p);
        CHECK(episodes[i].observation.r == again[i].observation.r);
    }

    // Worker count never changes results.
    CampaignConfig threaded = config;
    threaded.workers = 8;
    auto parallel = run_campaign(threaded);
    for (std::size_t i = 0; i < episodes.size(); ++i) {
        CHECK(episodes[i].observation.q == parallel[i].observation.q);
        CHECK(episodes[i].observation.r == parallel[i].observation.r);
    }
}

TEST_CASE("campaign exact mode reproduces Born probabilities", "[episodes]") {
    CampaignConfig config;
    config.n_states = 30;
    config.master_seed = 599;
    config.exact_probabilities = true;
    auto episodes = run_campaign(config);
    REQUIRE(episodes.size() == 90);
    for (const auto& e : episodes) {
        Eigen::VectorXd predicted = urgleichung_predict(e.observation.p, e.observation.r);
        for (int j = 0; j < 2; ++j)
            REQUIRE(predicted[j] == Approx(e.observation.q[j]).margin(1e-12));
    }
}

TEST_CASE("campaign with shared-result reuse keeps provenance", "[episodes]") {
    CampaignConfig config;
    config.n_states = 2;
    config.agent.steps = 1500;
    config.master_seed = 4;
    config.reuse_shared = true;

    auto episodes = run_campaign(config);
    REQUIRE(episodes.size() == 6);

    // Conditional bets are shared across states for the same measurement.
    CHECK(episodes[0].observation.r == episodes[3].observation.r);
    // Reference bets are shared across measurements for the same state.
    CHECK(episodes[0].observation.p == episodes[1].observation.p);
    CHECK(episodes[0].observation.p != episodes[3].observation.p);

    // Provenance stays the true Born probabilities.
    for (const auto& e : episodes) {
        CHECK(e.observation.p_true.minCoeff() >= 0.0);
        CHECK(e.observation.p_true.sum() == Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("squared error to random probabilities shrinks with steps", "[episodes]") {
    // Sum of squared bet errors over a batch of uniform-random probabilities,
    // for increasing episode length.
    auto sigma_r2 = [](long steps) {
        const int n_probs = 200;
        Rng prob_rng = make_rng(31415);
        double total = 0.0;
        for (int i = 0; i < n_probs; ++i) {
            double p = uniform01(prob_rng);
            Rng data_rng = make_rng(derive_seed(8888, static_cast<std::uint64_t>(2 * i)));
            auto dataset = generate_dataset(p, steps, data_rng);
            AgentConfig cfg{50, 0.5, steps, derive_seed(8888, static_cast<std::uint64_t>(2 * i + 1))};
            double bet = run_learning_episode(dataset, cfg).best_bet;
            total += (bet - p) * (bet - p);
        }
        return total;
    };
    double e3k = sigma_r2(3000);
    double e30k = sigma_r2(30000);
    double e300k = sigma_r2(300000);
    CHECK(e30k < e3k);
    CHECK(e300k < e30k);
}
