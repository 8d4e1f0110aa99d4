#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "bornlab/cone.hpp"
#include "bornlab/qubit.hpp"

namespace bornlab {

/// Coefficients of a Hermitian 2x2 operator in the orthonormal basis
/// {I, X, Y, Z}/sqrt(2), so that the Euclidean inner product of two
/// coefficient vectors equals the trace pairing tr(a b).
Eigen::Vector4d bloch_vectorize(const Matrix2c& hermitian);
Matrix2c bloch_devectorize(const Eigen::Vector4d& v);

/// A finite collection of states and effects in the trace-pairing
/// vectorization; probabilities are plain inner products.
struct GptFragment {
    std::vector<Eigen::Vector4d> states;
    std::vector<Eigen::Vector4d> effects;
    Eigen::Vector4d unit; // vectorized identity

    double pairing(std::size_t effect, std::size_t state) const {
        return effects[effect].dot(states[state]);
    }
};

GptFragment make_fragment(const std::vector<DensityOperator>& states,
                          const std::vector<Effect>& effects);

/// Pauli eigenstates + tetrahedron projectors as states; Pauli projectors +
/// tetrahedron POVM elements as effects.
GptFragment canonical_fragment();

enum class NoiseKind { Depolarizing, Dephasing };

const char* noise_name(NoiseKind kind);

/// Noise channel acting on the vectorized operator space, affine in the noise
/// weight p: at(0) is the identity. Depolarizing mixes toward I/2; dephasing
/// is rho -> (1 - p/2) rho + (p/2) Z rho Z.
struct NoiseModel {
    NoiseKind kind = NoiseKind::Depolarizing;

    Eigen::Matrix4d base() const { return Eigen::Matrix4d::Identity(); }
    Eigen::Matrix4d slope() const;
    Eigen::Matrix4d at(double p) const { return base() + p * slope(); }

    static NoiseModel depolarizing() { return {NoiseKind::Depolarizing}; }
    static NoiseModel dephasing() { return {NoiseKind::Dephasing}; }
};

struct EmbedOptions {
    /// Close the effect set under complementation (e -> I - e) and adjoin the
    /// unit effect before building the effect cone. Keeps every response
    /// probability in [0, 1]; see min_noise_lp notes.
    bool complement_closure = true;
    double tol = 1e-9;
};

struct RobustnessResult {
    bool feasible = false; // false: no noise weight in [0, 1] admits a model
    double p_min = 1.0;
    Eigen::MatrixXd beta;          // certificate over (effect facet, state facet) pairs
    Eigen::MatrixXd effect_facets; // rows
    Eigen::MatrixXd state_facets;  // rows
    double residual = 0.0;         // max pairing error of the reconstruction
};

/// Minimal noise weight p such that the noisy fragment admits a
/// noncontextual (simplex-embeddable) model, found by one linear program in
/// (beta, p). Throws on LP breakdown; returns feasible = false when even
/// p = 1 admits no model.
RobustnessResult min_noise_lp(const GptFragment& fragment, const NoiseModel& noise,
                              const EmbedOptions& options = {});

/// Feasibility of the embedding at a fixed noise weight.
bool embeddable_at(const GptFragment& fragment, const NoiseModel& noise, double p,
                   const EmbedOptions& options = {});

/// Bisection over embeddable_at; debugging cross-check for min_noise_lp.
double min_noise_bisect(const GptFragment& fragment, const NoiseModel& noise,
                        double tol = 1e-6, const EmbedOptions& options = {});

/// Reduced state of a Haar-random two-qubit pure state; almost surely rank 2.
DensityOperator random_rank2_state(Rng& rng);

struct SweepRecord {
    int n_states;
    int rank;
    NoiseKind kind;
    int ensemble;
    double p_min;
};

/// Robustness statistics over random state ensembles with the effects fixed
/// to the tetrahedron POVM plus the three Pauli measurements.
std::vector<SweepRecord> random_fragment_sweep(const std::vector<int>& n_states_grid,
                                               const std::vector<int>& ranks,
                                               const std::vector<NoiseKind>& kinds,
                                               int n_ensembles, std::uint64_t master_seed,
                                               int workers = 1);

} // namespace bornlab
