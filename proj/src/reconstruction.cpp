#include "bornlab/reconstruction.hpp"

namespace bornlab {

PhiMatrix phi_sic() {
    double d = kDim;
    PhiMatrix phi = PhiMatrix::Constant(-1.0 / d);
    phi.diagonal().setConstant((d + 1.0) - 1.0 / d);
    return phi;
}

void append_design_rows(DesignSystem& system, const Eigen::VectorXd& p, const Eigen::MatrixXd& r,
                        const Eigen::VectorXd& q) {
    const int k = system.reference_dim;
    if (p.size() != k || r.cols() != k || r.rows() != q.size())
        throw std::invalid_argument("design rows: dimension mismatch");
    long base = system.matrix.rows();
    system.matrix.conservativeResize(base + q.size(), Eigen::NoChange);
    system.target.conservativeResize(base + q.size());
    for (Eigen::Index j = 0; j < q.size(); ++j) {
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) system.matrix(base + j, k * a + b) = r(j, a) * p[b];
        system.target[base + j] = q[j];
    }
}

namespace {

DesignSystem make_empty(int k) {
    DesignSystem system;
    system.reference_dim = k;
    system.matrix.resize(0, k * k);
    system.target.resize(0);
    return system;
}

} // namespace

DesignSystem build_design_system(std::span<const EpisodeObservation> observations) {
    if (observations.empty()) throw std::invalid_argument("design system: no observations");
    DesignSystem system = make_empty(4);
    long total = 0;
    for (const auto& obs : observations) total += obs.q.size();
    system.matrix.resize(total, 16);
    system.target.resize(total);
    long row = 0;
    for (const auto& obs : observations) {
        for (Eigen::Index j = 0; j < obs.q.size(); ++j) {
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) system.matrix(row, 4 * a + b) = obs.r(j, a) * obs.p[b];
            system.target[row] = obs.q[j];
            ++row;
        }
    }
    return system;
}

DesignSystem build_design_system(std::span<const CampaignEpisode> episodes) {
    std::vector<EpisodeObservation> observations;
    observations.reserve(episodes.size());
    for (const auto& e : episodes) observations.push_back(e.observation);
    return build_design_system(observations);
}

PhiFit solve_phi(const DesignSystem& system) {
    const int k = system.reference_dim;
    const int unknowns = k * k;
    if (system.matrix.rows() == 0) throw RankDeficientError("phi fit: empty design system", {});

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(system.matrix,
                                          Eigen::ComputeThinU | Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double threshold = 1e-8 * sv[0];
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > threshold) ++rank;

    if (rank < unknowns) {
        std::vector<Eigen::VectorXd> null_dirs;
        std::string msg = "phi fit is rank-deficient (rank " + std::to_string(rank) + " of " +
                          std::to_string(unknowns) + "); unconstrained vec(Phi) directions:";
        for (Eigen::Index i = rank; i < unknowns; ++i) {
            null_dirs.push_back(svd.matrixV().col(i));
            msg += "\n  [";
            for (int c = 0; c < unknowns; ++c) {
                msg += std::to_string(svd.matrixV()(c, i));
                msg += c + 1 < unknowns ? ", " : "]";
            }
        }
        throw RankDeficientError(msg, std::move(null_dirs));
    }

    Eigen::VectorXd x = system.matrix.colPivHouseholderQr().solve(system.target);

    PhiFit fit;
    fit.phi.resize(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) fit.phi(a, b) = x[k * a + b];
    fit.residual_norm = (system.matrix * x - system.target).norm();
    fit.condition_number = sv[0] / sv[sv.size() - 1];
    fit.rank = rank;
    return fit;
}

double hsd(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("hsd: shape mismatch");
    return (a - b).norm();
}

} // namespace bornlab
