#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "bornlab/rng.hpp"

namespace bornlab {

/// Knobs of the betting agent: bets live on the grid {0, 1/N, ..., 1}
/// (quantization N, so N+1 arms), epsilon is the exploration probability and
/// steps is the episode length.
struct AgentConfig {
    int quantization = 50;
    double epsilon = 0.5;
    long steps = 300000;
    std::uint64_t seed = 0;

    void validate() const {
        if (quantization < 1) throw std::invalid_argument("quantization must be >= 1");
        if (!(epsilon >= 0.0 && epsilon <= 1.0))
            throw std::invalid_argument("epsilon must be in [0, 1]");
        if (steps < 1) throw std::invalid_argument("steps must be >= 1");
    }
};

/// Per-arm reward totals and pull counts. The average reward of an arm that
/// was never pulled counts as 0, which dominates every pulled arm (all rewards
/// are <= 0) and so forces each arm to be tried at least once before pure
/// exploitation settles.
class BanditState {
  public:
    explicit BanditState(int n_arms)
        : totals_(n_arms, 0.0), averages_(n_arms, 0.0), counts_(n_arms, 0) {}

    int arms() const { return static_cast<int>(totals_.size()); }
    double total(int k) const { return totals_[k]; }
    long count(int k) const { return counts_[k]; }
    double average(int k) const { return averages_[k]; }
    long pulls() const;

    void record(int k, double reward) {
        totals_[k] += reward;
        counts_[k] += 1;
        averages_[k] = totals_[k] / static_cast<double>(counts_[k]);
    }

  private:
    std::vector<double> totals_;
    std::vector<double> averages_;
    std::vector<long> counts_;
};

/// Quadratic-loss reward for betting k/N on a binary event:
/// -(k/N - 1)^2 if the event occurred, -(k/N)^2 otherwise.
inline double reward_value(int k, bool occurred, int quantization) {
    if (k < 0 || k > quantization) throw std::out_of_range("bet arm out of range");
    double bet = static_cast<double>(k) / quantization;
    double miss = occurred ? bet - 1.0 : bet;
    return -miss * miss;
}

/// Epsilon-greedy selection: probability epsilon of a uniform arm, otherwise
/// the arm with the highest average reward; ties (including the exact 0.0 tie
/// between unpulled arms) are broken uniformly at random.
int select_arm(const BanditState& state, double epsilon, Rng& rng);

/// Greedy argmax with the same tie rule; used for the end-of-episode readout.
int best_arm(const BanditState& state, Rng& rng);

struct LearningEpisodeResult {
    double best_bet = 0.0;
    int best_arm = 0;
    BanditState state{1};
    std::vector<int> trajectory; // filled only on request
};

/// One learning episode: `steps` rounds of bet, observe, reward, update on a
/// pre-generated binary outcome stream.
LearningEpisodeResult run_learning_episode(std::span<const std::uint8_t> dataset,
                                           const AgentConfig& config,
                                           bool record_trajectory = false);

/// Expected quadratic loss p(1-B)^2 + (1-p)B^2 of bet B against event
/// probability p; the agent's expected per-step reward is its negative, and
/// it is minimized at B = p.
inline double expected_loss(double p, double bet) {
    if (!(p >= 0.0 && p <= 1.0 && bet >= 0.0 && bet <= 1.0))
        throw std::domain_error("expected_loss arguments must be in [0, 1]");
    return p * (1.0 - bet) * (1.0 - bet) + (1.0 - p) * bet * bet;
}

} // namespace bornlab
