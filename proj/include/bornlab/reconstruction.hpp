#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bornlab/episodes.hpp"

namespace bornlab {

/// Kernel of the generalized Born rule q(j) = r(j)^T Phi p. 4x4 for the qubit
/// reference measurement; the fit is unconstrained.
using PhiMatrix = Eigen::Matrix4d;

/// Stacked linear system for the Frobenius-norm fit of Phi. One row per
/// (episode, outcome): q(j) = <row, vec(Phi)> with vec row-major, row index
/// paired to r and column index to p, i.e. A(row, K*a + b) = r(j)[a] * p[b].
struct DesignSystem {
    Eigen::MatrixXd matrix;  // rows x K^2
    Eigen::VectorXd target;  // q values
    int reference_dim = 4;   // K

    long rows() const { return matrix.rows(); }
};

/// Quantum-optimal kernel for the qubit reference measurement: (d+1) - 1/d on
/// the diagonal and -1/d elsewhere, d = 2.
PhiMatrix phi_sic();

/// Appends the rows of one observation (general K; the campaign uses K = 4).
void append_design_rows(DesignSystem& system, const Eigen::VectorXd& p, const Eigen::MatrixXd& r,
                        const Eigen::VectorXd& q);

DesignSystem build_design_system(std::span<const EpisodeObservation> observations);
DesignSystem build_design_system(std::span<const CampaignEpisode> episodes);

struct PhiFit {
    Eigen::MatrixXd phi;     // K x K
    double residual_norm;    // ||A vec(phi) - q||_2
    double condition_number; // sigma_max / sigma_min of the design matrix
    Eigen::Index rank;
};

/// The fit is unidentifiable: the message names the flat directions.
class RankDeficientError : public std::runtime_error {
  public:
    RankDeficientError(const std::string& what, std::vector<Eigen::VectorXd> directions)
        : std::runtime_error(what), null_directions(std::move(directions)) {}

    /// Orthonormal basis of the unconstrained vec(Phi) directions.
    std::vector<Eigen::VectorXd> null_directions;
};

/// Least-squares Phi via column-pivoted QR, with an SVD pass for rank and
/// conditioning; throws RankDeficientError when the design matrix rank is
/// below K^2 (threshold 1e-8 relative to the largest singular value).
PhiFit solve_phi(const DesignSystem& system);

/// Hilbert-Schmidt (Frobenius) distance.
double hsd(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

} // namespace bornlab
