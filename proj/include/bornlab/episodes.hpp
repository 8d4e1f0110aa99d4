#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "bornlab/agent.hpp"
#include "bornlab/qubit.hpp"

namespace bornlab {

/// A fixed preparation and measurement, together with the reference
/// measurement and the agent that will learn all the associated betting
/// values. With a two-outcome measurement this bundles 14 learning episodes:
/// 2 for the factual experiment, 4 for the reference measurement, 8 for the
/// conditional experiment.
struct ExperimentalEpisodeSpec {
    DensityOperator state;
    Povm measurement;
    SicSet sic;
    AgentConfig agent;
    /// When set, the four reference-measurement episodes consume indicator
    /// streams of one shared categorical outcome sequence instead of
    /// independent binary streams. Off by default; statistically equivalent
    /// for binary bets.
    bool shared_reference_stream = false;
};

/// One learning episode of the bundle: which experiment it belongs to, the
/// outcome it bets on, and the probability used to simulate its data.
/// experiment 1: factual outcome j;  2: reference outcome i;
/// 3: outcome j conditioned on reference state i.
struct PlanEntry {
    int experiment;
    int outcome_j; // -1 for experiment 2
    int sic_i;     // -1 for experiment 1
    double probability;
};

std::vector<PlanEntry> learning_episode_plan(const ExperimentalEpisodeSpec& spec);

/// steps i.i.d. Bernoulli(p_true) draws.
std::vector<std::uint8_t> generate_dataset(double p_true, long steps, Rng& rng);

/// Learned betting values of one experimental episode; q(j) for the factual
/// experiment, p(i) for the reference measurement, r(j,i) for the
/// conditionals. Bets are learned independently, so no normalization holds or
/// is enforced. The *_true fields carry the probabilities the data was
/// generated from.
struct EpisodeObservation {
    Eigen::VectorXd q;
    Eigen::Vector4d p;
    Eigen::MatrixXd r;
    Eigen::VectorXd q_true;
    Eigen::Vector4d p_true;
    Eigen::MatrixXd r_true;
};

/// Runs every learning episode of the bundle with a fresh dataset at its true
/// probability. Each episode's rng stream is derived from (seed, slot), where
/// the slot identifies (experiment, j, i) — not the execution order — so
/// episodes are independent and reorderable.
EpisodeObservation run_experimental_episode(const ExperimentalEpisodeSpec& spec,
                                            std::uint64_t seed);

/// Same, but with an explicit plan (must be a permutation of
/// learning_episode_plan(spec); exposed for the reordering property).
EpisodeObservation run_planned_episode(const ExperimentalEpisodeSpec& spec,
                                       const std::vector<PlanEntry>& plan, std::uint64_t seed);

/// Oracle bypass: every learned value replaced by its exact true probability
/// (no agent, no bet grid).
EpisodeObservation exact_observation(const ExperimentalEpisodeSpec& spec);

/// Oracle with tunable spread: every true probability replaced by a draw from
/// Normal(p_true, sigma), clamped to [0,1] and rounded to the bet grid
/// {0, 1/N, ..., 1}. quantization == nullopt skips the rounding.
EpisodeObservation gaussian_oracle_observation(const EpisodeObservation& truth, double sigma,
                                               std::optional<int> quantization, Rng& rng);

struct CampaignConfig {
    int n_states = 30;
    std::vector<PauliAxis> axes = {PauliAxis::X, PauliAxis::Y, PauliAxis::Z};
    AgentConfig agent;
    std::uint64_t master_seed = 0;
    bool exact_probabilities = false;
    /// Reuse learning results shared between episodes (the conditional
    /// experiments do not depend on the input state, and the reference
    /// probabilities do not depend on the measurement). Off by default:
    /// the faithful campaign learns every episode from scratch.
    bool reuse_shared = false;
    int workers = 1;
};

struct CampaignEpisode {
    int state_index;
    PauliAxis axis;
    EpisodeObservation observation;
};

/// Draws n_states Haar-random pure states and runs one experimental episode
/// per (state, measurement) pair. Fully determined by (config, master_seed)
/// and independent of the worker count.
std::vector<CampaignEpisode> run_campaign(const CampaignConfig& config);

} // namespace bornlab
