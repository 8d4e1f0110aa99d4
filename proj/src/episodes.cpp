#include "bornlab/episodes.hpp"

#include <cmath>

#include "bornlab/parallel.hpp"

namespace bornlab {

namespace {

// Stable identifier of a learning episode inside its bundle; seeds are keyed
// on this, never on execution order.
std::uint64_t slot_key(const PlanEntry& e) {
    return static_cast<std::uint64_t>(e.experiment) * 4096 +
           static_cast<std::uint64_t>(e.outcome_j + 1) * 64 +
           static_cast<std::uint64_t>(e.sic_i + 1);
}

double learn_bet(double p_true, AgentConfig cfg, std::uint64_t dataset_seed,
                 std::uint64_t agent_seed) {
    Rng data_rng = make_rng(dataset_seed);
    std::vector<std::uint8_t> dataset = generate_dataset(p_true, cfg.steps, data_rng);
    cfg.seed = agent_seed;
    return run_learning_episode(dataset, cfg).best_bet;
}

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

// Campaign seed streams, all derived from the master seed.
constexpr std::uint64_t kStateStream = 0;
constexpr std::uint64_t kEpisodeBase = 1;
constexpr std::uint64_t kSharedReferenceBase = 0x10000;
constexpr std::uint64_t kSharedConditionalBase = 0x20000;

} // namespace

std::vector<PlanEntry> learning_episode_plan(const ExperimentalEpisodeSpec& spec) {
    std::vector<PlanEntry> plan;
    const int m = spec.measurement.outcomes();
    plan.reserve(static_cast<std::size_t>(m) + 4 + 4 * static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j)
        plan.push_back({1, j, -1, born_probability(spec.state, spec.measurement.effects()[j])});
    for (int i = 0; i < 4; ++i)
        plan.push_back({2, -1, i, born_probability(spec.state, spec.sic.povm.effects()[i])});
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < m; ++j)
            plan.push_back(
                {3, j, i,
                 born_probability(spec.sic.projectors[i], spec.measurement.effects()[j])});
    return plan;
}

std::vector<std::uint8_t> generate_dataset(double p_true, long steps, Rng& rng) {
    if (!(p_true >= 0.0 && p_true <= 1.0))
        throw std::invalid_argument("dataset probability must be in [0, 1]");
    std::vector<std::uint8_t> data(static_cast<std::size_t>(steps));
    for (auto& bit : data) bit = bernoulli(rng, p_true) ? 1 : 0;
    return data;
}

EpisodeObservation run_planned_episode(const ExperimentalEpisodeSpec& spec,
                                       const std::vector<PlanEntry>& plan, std::uint64_t seed) {
    const int m = spec.measurement.outcomes();
    EpisodeObservation obs;
    obs.q.setZero(m);
    obs.p.setZero();
    obs.r.setZero(m, 4);
    obs.q_true.setZero(m);
    obs.p_true.setZero();
    obs.r_true.setZero(m, 4);

    // Optional shared categorical stream for the four reference-measurement
    // episodes; its seed is keyed on the stream, not on plan order.
    std::vector<std::uint8_t> reference_stream;
    if (spec.shared_reference_stream) {
        Rng stream_rng = make_rng(derive_seed(seed, 1));
        Eigen::VectorXd dist = outcome_distribution(spec.state, spec.sic.povm);
        dist /= dist.sum(); // absorb clamp dust so the sampler sees a distribution
        reference_stream.resize(static_cast<std::size_t>(spec.agent.steps));
        for (auto& v : reference_stream)
            v = static_cast<std::uint8_t>(sample_outcome(dist, stream_rng));
    }

    for (const PlanEntry& entry : plan) {
        std::uint64_t key = slot_key(entry);
        std::uint64_t dataset_seed = derive_seed(seed, 2 * key);
        std::uint64_t agent_seed = derive_seed(seed, 2 * key + 1);

        double bet;
        if (entry.experiment == 2 && spec.shared_reference_stream) {
            std::vector<std::uint8_t> indicator(reference_stream.size());
            for (std::size_t s = 0; s < indicator.size(); ++s)
                indicator[s] = reference_stream[s] == static_cast<std::uint8_t>(entry.sic_i);
            AgentConfig cfg = spec.agent;
            cfg.seed = agent_seed;
            bet = run_learning_episode(indicator, cfg).best_bet;
        } else {
            bet = learn_bet(entry.probability, spec.agent, dataset_seed, agent_seed);
        }

        switch (entry.experiment) {
            case 1:
                obs.q[entry.outcome_j] = bet;
                obs.q_true[entry.outcome_j] = entry.probability;
                break;
            case 2:
                obs.p[entry.sic_i] = bet;
                obs.p_true[entry.sic_i] = entry.probability;
                break;
            case 3:
                obs.r(entry.outcome_j, entry.sic_i) = bet;
                obs.r_true(entry.outcome_j, entry.sic_i) = entry.probability;
                break;
            default:
                throw std::invalid_argument("plan entry with unknown experiment id");
        }
    }
    return obs;
}

EpisodeObservation run_experimental_episode(const ExperimentalEpisodeSpec& spec,
                                            std::uint64_t seed) {
    return run_planned_episode(spec, learning_episode_plan(spec), seed);
}

EpisodeObservation exact_observation(const ExperimentalEpisodeSpec& spec) {
    const int m = spec.measurement.outcomes();
    EpisodeObservation obs;
    obs.q.setZero(m);
    obs.r.setZero(m, 4);
    obs.q_true.setZero(m);
    obs.r_true.setZero(m, 4);
    for (const PlanEntry& entry : learning_episode_plan(spec)) {
        switch (entry.experiment) {
            case 1: obs.q[entry.outcome_j] = entry.probability; break;
            case 2: obs.p[entry.sic_i] = entry.probability; break;
            case 3: obs.r(entry.outcome_j, entry.sic_i) = entry.probability; break;
        }
    }
    obs.q_true = obs.q;
    obs.p_true = obs.p;
    obs.r_true = obs.r;
    return obs;
}

EpisodeObservation gaussian_oracle_observation(const EpisodeObservation& truth, double sigma,
                                               std::optional<int> quantization, Rng& rng) {
    if (sigma < 0.0) throw std::invalid_argument("gaussian oracle: negative sigma");
    auto draw = [&](double p_true) {
        double v = sigma == 0.0 ? p_true : p_true + sigma * normal01(rng);
        v = clamp01(v);
        if (quantization) v = std::round(v * *quantization) / *quantization;
        return v;
    };
    EpisodeObservation obs = truth;
    obs.q_true = truth.q_true;
    obs.p_true = truth.p_true;
    obs.r_true = truth.r_true;
    for (Eigen::Index j = 0; j < obs.q.size(); ++j) obs.q[j] = draw(truth.q_true[j]);
    for (Eigen::Index i = 0; i < 4; ++i) obs.p[i] = draw(truth.p_true[i]);
    for (Eigen::Index j = 0; j < obs.r.rows(); ++j)
        for (Eigen::Index i = 0; i < 4; ++i) obs.r(j, i) = draw(truth.r_true(j, i));
    return obs;
}

std::vector<CampaignEpisode> run_campaign(const CampaignConfig& config) {
    config.agent.validate();
    if (config.n_states < 1) throw std::invalid_argument("campaign needs at least one state");
    if (config.axes.empty()) throw std::invalid_argument("campaign needs at least one measurement");

    const SicSet sic = sic_tetrahedron();

    Rng state_rng = make_rng(derive_seed(config.master_seed, kStateStream));
    std::vector<DensityOperator> states;
    states.reserve(static_cast<std::size_t>(config.n_states));
    for (int s = 0; s < config.n_states; ++s) states.push_back(random_pure_state(state_rng));

    const std::size_t n_axes = config.axes.size();
    const std::size_t n_episodes = static_cast<std::size_t>(config.n_states) * n_axes;

    std::vector<CampaignEpisode> episodes;
    episodes.reserve(n_episodes);
    for (std::size_t e = 0; e < n_episodes; ++e) {
        int state_index = static_cast<int>(e / n_axes);
        PauliAxis axis = config.axes[e % n_axes];
        episodes.push_back({state_index, axis, EpisodeObservation{}});
    }

    auto make_spec = [&](std::size_t e) {
        return ExperimentalEpisodeSpec{states[static_cast<std::size_t>(episodes[e].state_index)],
                                       pauli_measurement(episodes[e].axis), sic, config.agent};
    };

    if (config.exact_probabilities) {
        for (std::size_t e = 0; e < n_episodes; ++e)
            episodes[e].observation = exact_observation(make_spec(e));
        return episodes;
    }

    if (!config.reuse_shared) {
        parallel_for(n_episodes, config.workers, [&](std::size_t e) {
            episodes[e].observation =
                run_experimental_episode(make_spec(e), derive_seed(config.master_seed, kEpisodeBase + e));
        });
        return episodes;
    }

    // Shared-result mode: reference bets are learned once per state and
    // conditional bets once per measurement, then stitched into every episode.
    struct SharedTask {
        int experiment;
        std::size_t owner; // state index or axis index
        PlanEntry entry;
        double bet = 0.0;
    };
    std::vector<SharedTask> shared;
    for (int s = 0; s < config.n_states; ++s) {
        ExperimentalEpisodeSpec spec{states[static_cast<std::size_t>(s)],
                                     pauli_measurement(config.axes[0]), sic, config.agent};
        for (const PlanEntry& entry : learning_episode_plan(spec))
            if (entry.experiment == 2)
                shared.push_back({2, static_cast<std::size_t>(s), entry});
    }
    for (std::size_t a = 0; a < n_axes; ++a) {
        ExperimentalEpisodeSpec spec{states[0], pauli_measurement(config.axes[a]), sic,
                                     config.agent};
        for (const PlanEntry& entry : learning_episode_plan(spec))
            if (entry.experiment == 3) shared.push_back({3, a, entry});
    }
    parallel_for(shared.size(), config.workers, [&](std::size_t t) {
        SharedTask& task = shared[t];
        std::uint64_t base =
            task.experiment == 2 ? derive_seed(config.master_seed, kSharedReferenceBase + task.owner)
                                 : derive_seed(config.master_seed, kSharedConditionalBase + task.owner);
        std::uint64_t key = slot_key(task.entry);
        task.bet = learn_bet(task.entry.probability, config.agent, derive_seed(base, 2 * key),
                             derive_seed(base, 2 * key + 1));
    });

    parallel_for(n_episodes, config.workers, [&](std::size_t e) {
        ExperimentalEpisodeSpec spec = make_spec(e);
        std::vector<PlanEntry> factual;
        for (const PlanEntry& entry : learning_episode_plan(spec))
            if (entry.experiment == 1) factual.push_back(entry);
        EpisodeObservation obs = run_planned_episode(
            spec, factual, derive_seed(config.master_seed, kEpisodeBase + e));
        std::size_t axis_index = e % n_axes;
        for (const SharedTask& task : shared) {
            if (task.experiment == 2 && task.owner == static_cast<std::size_t>(episodes[e].state_index)) {
                obs.p[task.entry.sic_i] = task.bet;
                obs.p_true[task.entry.sic_i] = task.entry.probability;
            } else if (task.experiment == 3 && task.owner == axis_index) {
                obs.r(task.entry.outcome_j, task.entry.sic_i) = task.bet;
                obs.r_true(task.entry.outcome_j, task.entry.sic_i) = task.entry.probability;
            }
        }
        episodes[e].observation = std::move(obs);
    });
    return episodes;
}

} // namespace bornlab
