#include "bornlab/agent.hpp"

namespace bornlab {

namespace {

// Greedy argmax over cached averages. Single pass finds the max and the tie
// count; a second pass is only needed when several arms share the max
// exactly, in which case one bounded draw picks among them.
int greedy_arm(const BanditState& state, Rng& rng) {
    const int n = state.arms();
    double best = state.average(0);
    int best_k = 0;
    int ties = 1;
    for (int k = 1; k < n; ++k) {
        double a = state.average(k);
        if (a > best) {
            best = a;
            best_k = k;
            ties = 1;
        } else if (a == best) {
            ++ties;
        }
    }
    if (ties == 1) return best_k;
    auto pick = static_cast<long>(uniform_below(rng, static_cast<std::uint64_t>(ties)));
    for (int k = 0; k < n; ++k) {
        if (state.average(k) == best && pick-- == 0) return k;
    }
    return best_k; // unreachable
}

} // namespace

long BanditState::pulls() const {
    long total = 0;
    for (long c : counts_) total += c;
    return total;
}

int select_arm(const BanditState& state, double epsilon, Rng& rng) {
    if (epsilon > 0.0 && uniform01(rng) < epsilon)
        return static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(state.arms())));
    return greedy_arm(state, rng);
}

int best_arm(const BanditState& state, Rng& rng) { return greedy_arm(state, rng); }

LearningEpisodeResult run_learning_episode(std::span<const std::uint8_t> dataset,
                                           const AgentConfig& config, bool record_trajectory) {
    config.validate();
    if (dataset.empty()) throw std::invalid_argument("learning episode: empty dataset");
    if (static_cast<long>(dataset.size()) < config.steps)
        throw std::invalid_argument("learning episode: dataset shorter than step count");

    const int n_arms = config.quantization + 1;
    BanditState state(n_arms);
    Rng rng = make_rng(config.seed);

    // Per-arm rewards are two-valued; precompute both outcomes.
    std::vector<double> reward_hit(n_arms), reward_miss(n_arms);
    for (int k = 0; k < n_arms; ++k) {
        reward_hit[k] = reward_value(k, true, config.quantization);
        reward_miss[k] = reward_value(k, false, config.quantization);
    }

    LearningEpisodeResult result;
    if (record_trajectory) result.trajectory.reserve(static_cast<std::size_t>(config.steps));

    for (long s = 0; s < config.steps; ++s) {
        int k = select_arm(state, config.epsilon, rng);
        state.record(k, dataset[static_cast<std::size_t>(s)] ? reward_hit[k] : reward_miss[k]);
        if (record_trajectory) result.trajectory.push_back(k);
    }

    result.best_arm = best_arm(state, rng);
    result.best_bet = static_cast<double>(result.best_arm) / config.quantization;
    result.state = std::move(state);
    return result;
}

} // namespace bornlab
