#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bornlab/rng.hpp"

namespace bornlab {

using Matrix2c = Eigen::Matrix2cd;
using complexd = std::complex<double>;

/// Hilbert space dimension. Fixed: the whole laboratory is qubit-only, but the
/// reference-measurement arithmetic below is written with d explicit so the
/// coefficients (d+1) and 1/d stay recognizable.
inline constexpr int kDim = 2;

/// Global tolerance for operator invariants (hermiticity, trace, positivity).
inline constexpr double kOpTol = 1e-12;

Eigen::Vector2d hermitian_eigenvalues(const Matrix2c& m);
bool is_hermitian(const Matrix2c& m, double tol = kOpTol);

/// Trace-one positive semidefinite Hermitian 2x2 operator.
class DensityOperator {
  public:
    explicit DensityOperator(const Matrix2c& m);

    const Matrix2c& matrix() const { return mat_; }
    double purity() const;
    Eigen::Vector3d bloch_vector() const;

    static DensityOperator from_bloch(const Eigen::Vector3d& r);
    static DensityOperator pure(const Eigen::Vector2cd& amplitudes);
    static DensityOperator maximally_mixed();

  private:
    Matrix2c mat_;
};

/// Measurement-outcome operator: Hermitian with spectrum in [0, 1].
class Effect {
  public:
    explicit Effect(const Matrix2c& m);

    const Matrix2c& matrix() const { return mat_; }

  private:
    Matrix2c mat_;
};

/// Ordered set of effects summing to the identity; outcome j is effects()[j].
class Povm {
  public:
    explicit Povm(std::vector<Effect> effects);

    const std::vector<Effect>& effects() const { return effects_; }
    int outcomes() const { return static_cast<int>(effects_.size()); }

  private:
    std::vector<Effect> effects_;
};

/// The equiangular reference measurement for a qubit: four rank-1 projectors
/// with pairwise overlap 1/3, scaled by 1/2 to form a POVM.
struct SicSet {
    std::array<DensityOperator, 4> projectors;
    Povm povm;
};

enum class PauliAxis { X, Y, Z };

const char* pauli_name(PauliAxis axis);

/// Waveplate angles of the displaced Sagnac construction. x and y are the
/// beam-splitting amplitudes, x = cos(theta0/2) = sin(theta1/2) and
/// y = sin(theta0/2) = -cos(theta1/2), so x^2 + y^2 = 1 automatically.
class SagnacParams {
  public:
    SagnacParams(double theta0, double theta1);

    /// Consistent angle pair realizing a given x amplitude (x in [-1, 1]).
    static SagnacParams from_x(double x);

    double theta0() const { return theta0_; }
    double theta1() const { return theta1_; }
    double x() const { return x_; }
    double y() const { return y_; }

  private:
    double theta0_, theta1_, x_, y_;
};

/// x^2 value at which the doubled Sagnac effects become equiangular.
inline constexpr double kSagnacSicX2 = 0.5 + 0.5 / 1.7320508075688772935;

/// Pr(outcome) = Re tr(rho * e), clamped to [0, 1] when within kOpTol of the
/// boundary.
double born_probability(const DensityOperator& rho, const Effect& e);

Eigen::VectorXd outcome_distribution(const DensityOperator& rho, const Povm& d);

/// Canonical tetrahedron reference measurement, Bloch vectors
/// (0,0,1), (2√2/3,0,-1/3), (-√2/3,±√(2/3),-1/3).
SicSet sic_tetrahedron();

/// Two-outcome projective measurement onto the ± eigenstates of a Pauli axis
/// (+ eigenstate first).
Povm pauli_measurement(PauliAxis axis);

DensityOperator random_pure_state(Rng& rng);

/// Inverse-CDF draw from a probability vector. Entries must be >= 0 and sum
/// to 1 within 1e-9.
int sample_outcome(const Eigen::VectorXd& dist, Rng& rng);

/// Probability-only form of the Born rule: combines reference-measurement
/// probabilities p(i) and conditionals r(j|i) into outcome probabilities
///   q(j) = sum_i ((d+1) p(i) - 1/d) r(j|i).
/// No clamping; non-quantum inputs may legitimately land outside [0, 1].
Eigen::VectorXd urgleichung_predict(const Eigen::Vector4d& p, const Eigen::MatrixXd& r,
                                    int d = kDim);

/// Four-outcome POVM of the displaced Sagnac interferometer, built directly
/// from the published effect matrices (each has trace 1/2).
Povm sagnac_povm(const SagnacParams& params);

/// Same POVM derived through the full path-degree-of-freedom unitary chain
/// (loop, waveplates, output polarizing beam splitters), tracing out the path
/// qubit. Independent route used to cross-check sagnac_povm.
Povm sagnac_povm_from_path_unitary(const SagnacParams& params);

} // namespace bornlab
