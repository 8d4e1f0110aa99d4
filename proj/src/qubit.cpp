#include "bornlab/qubit.hpp"

#include <cmath>

namespace bornlab {

namespace {

const complexd kI(0.0, 1.0);

Matrix2c pauli(PauliAxis axis) {
    Matrix2c m;
    switch (axis) {
        case PauliAxis::X: m << 0, 1, 1, 0; break;
        case PauliAxis::Y: m << 0, -kI, kI, 0; break;
        case PauliAxis::Z: m << 1, 0, 0, -1; break;
    }
    return m;
}

std::string matrix_to_string(const Matrix2c& m) {
    std::string s = "[";
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            s += "(" + std::to_string(m(i, j).real()) + "," + std::to_string(m(i, j).imag()) + ")";
            s += (i == 1 && j == 1) ? "]" : " ";
        }
    return s;
}

} // namespace

bool is_hermitian(const Matrix2c& m, double tol) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Eigen::Vector2d hermitian_eigenvalues(const Matrix2c& m) {
    Eigen::SelfAdjointEigenSolver<Matrix2c> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

DensityOperator::DensityOperator(const Matrix2c& m) : mat_(m) {
    if (!mat_.allFinite()) throw std::invalid_argument("density operator: non-finite entries");
    if (!is_hermitian(mat_))
        throw std::invalid_argument("density operator not Hermitian: " + matrix_to_string(mat_));
    if (std::abs(mat_.trace().real() - 1.0) > kOpTol || std::abs(mat_.trace().imag()) > kOpTol)
        throw std::invalid_argument("density operator trace != 1: " + matrix_to_string(mat_));
    if (hermitian_eigenvalues(mat_).minCoeff() < -kOpTol)
        throw std::invalid_argument("density operator not positive semidefinite: " +
                                    matrix_to_string(mat_));
}

double DensityOperator::purity() const { return (mat_ * mat_).trace().real(); }

Eigen::Vector3d DensityOperator::bloch_vector() const {
    Eigen::Vector3d r;
    r << (mat_ * pauli(PauliAxis::X)).trace().real(), (mat_ * pauli(PauliAxis::Y)).trace().real(),
        (mat_ * pauli(PauliAxis::Z)).trace().real();
    return r;
}

DensityOperator DensityOperator::from_bloch(const Eigen::Vector3d& r) {
    Matrix2c m = 0.5 * (Matrix2c::Identity() + r.x() * pauli(PauliAxis::X) +
                        r.y() * pauli(PauliAxis::Y) + r.z() * pauli(PauliAxis::Z));
    return DensityOperator(m);
}

DensityOperator DensityOperator::pure(const Eigen::Vector2cd& amplitudes) {
    Eigen::Vector2cd psi = amplitudes.normalized();
    return DensityOperator(psi * psi.adjoint());
}

DensityOperator DensityOperator::maximally_mixed() {
    return DensityOperator(0.5 * Matrix2c::Identity());
}

Effect::Effect(const Matrix2c& m) : mat_(m) {
    if (!mat_.allFinite()) throw std::invalid_argument("effect: non-finite entries");
    if (!is_hermitian(mat_)) throw std::invalid_argument("effect not Hermitian: " + matrix_to_string(mat_));
    Eigen::Vector2d ev = hermitian_eigenvalues(mat_);
    if (ev.minCoeff() < -kOpTol || ev.maxCoeff() > 1.0 + kOpTol)
        throw std::invalid_argument("effect spectrum outside [0,1]: " + matrix_to_string(mat_));
}

Povm::Povm(std::vector<Effect> effects) : effects_(std::move(effects)) {
    if (effects_.empty()) throw std::invalid_argument("POVM needs at least one effect");
    Matrix2c sum = Matrix2c::Zero();
    for (const Effect& e : effects_) sum += e.matrix();
    if ((sum - Matrix2c::Identity()).cwiseAbs().maxCoeff() > kOpTol)
        throw std::invalid_argument("POVM effects do not sum to the identity");
}

const char* pauli_name(PauliAxis axis) {
    switch (axis) {
        case PauliAxis::X: return "X";
        case PauliAxis::Y: return "Y";
        case PauliAxis::Z: return "Z";
    }
    return "?";
}

double born_probability(const DensityOperator& rho, const Effect& e) {
    double v = (rho.matrix() * e.matrix()).trace().real();
    if (v < 0.0 && v >= -kOpTol) v = 0.0;
    if (v > 1.0 && v <= 1.0 + kOpTol) v = 1.0;
    return v;
}

Eigen::VectorXd outcome_distribution(const DensityOperator& rho, const Povm& d) {
    Eigen::VectorXd out(d.outcomes());
    for (int j = 0; j < d.outcomes(); ++j) out[j] = born_probability(rho, d.effects()[j]);
    return out;
}

SicSet sic_tetrahedron() {
    const double s2 = std::sqrt(2.0);
    const double s23 = std::sqrt(2.0 / 3.0);
    std::array<Eigen::Vector3d, 4> bloch = {
        Eigen::Vector3d(0, 0, 1),
        Eigen::Vector3d(2 * s2 / 3, 0, -1.0 / 3),
        Eigen::Vector3d(-s2 / 3, s23, -1.0 / 3),
        Eigen::Vector3d(-s2 / 3, -s23, -1.0 / 3),
    };
    std::vector<Effect> effects;
    effects.reserve(4);
    for (const auto& b : bloch) effects.emplace_back(0.5 * DensityOperator::from_bloch(b).matrix());
    return SicSet{{DensityOperator::from_bloch(bloch[0]), DensityOperator::from_bloch(bloch[1]),
                   DensityOperator::from_bloch(bloch[2]), DensityOperator::from_bloch(bloch[3])},
                  Povm(std::move(effects))};
}

Povm pauli_measurement(PauliAxis axis) {
    Matrix2c sigma = pauli(axis);
    std::vector<Effect> effects;
    effects.emplace_back(0.5 * (Matrix2c::Identity() + sigma));
    effects.emplace_back(0.5 * (Matrix2c::Identity() - sigma));
    return Povm(std::move(effects));
}

DensityOperator random_pure_state(Rng& rng) {
    // Two complex Gaussians, normalized: Haar-uniform on the qubit sphere.
    Eigen::Vector2cd psi;
    psi << complexd(normal01(rng), normal01(rng)), complexd(normal01(rng), normal01(rng));
    return DensityOperator::pure(psi);
}

int sample_outcome(const Eigen::VectorXd& dist, Rng& rng) {
    if (dist.size() == 0) throw std::invalid_argument("sample_outcome: empty distribution");
    if (dist.minCoeff() < 0.0)
        throw std::invalid_argument("sample_outcome: negative probability entry");
    if (std::abs(dist.sum() - 1.0) > 1e-9)
        throw std::invalid_argument("sample_outcome: probabilities sum to " +
                                    std::to_string(dist.sum()));
    double u = uniform01(rng);
    double cumulative = 0.0;
    for (int j = 0; j < dist.size(); ++j) {
        cumulative += dist[j];
        if (u < cumulative) return j;
    }
    return static_cast<int>(dist.size()) - 1;
}

Eigen::VectorXd urgleichung_predict(const Eigen::Vector4d& p, const Eigen::MatrixXd& r, int d) {
    if (r.cols() != d * d)
        throw std::invalid_argument("urgleichung_predict: conditional matrix needs d^2 columns");
    if (p.size() != d * d)
        throw std::invalid_argument("urgleichung_predict: reference vector needs d^2 entries");
    Eigen::Vector4d coeff = (d + 1.0) * p.array() - 1.0 / d;
    return r * coeff;
}

SagnacParams::SagnacParams(double theta0, double theta1) : theta0_(theta0), theta1_(theta1) {
    x_ = std::cos(theta0 / 2);
    y_ = std::sin(theta0 / 2);
    if (std::abs(std::cos(theta0 / 2) - std::sin(theta1 / 2)) > 1e-9 ||
        std::abs(std::sin(theta0 / 2) + std::cos(theta1 / 2)) > 1e-9)
        throw std::invalid_argument("inconsistent waveplate angles (theta0, theta1)");
}

SagnacParams SagnacParams::from_x(double x) {
    if (std::abs(x) > 1.0) throw std::invalid_argument("beam amplitude |x| > 1");
    double theta0 = 2 * std::acos(x);
    // theta1 solves sin(theta1/2) = x, cos(theta1/2) = -y
    double theta1 = 2 * std::atan2(x, -std::sin(theta0 / 2));
    return SagnacParams(theta0, theta1);
}

Povm sagnac_povm(const SagnacParams& params) {
    const double x = params.x(), y = params.y();
    Matrix2c e1, e2, e3, e4;
    e1 << x * x, -x * y, -x * y, y * y;
    e2 << x * x, x * y, x * y, y * y;
    e3 << y * y, -kI * x * y, kI * x * y, x * x;
    e4 << y * y, kI * x * y, -kI * x * y, x * x;
    std::vector<Effect> effects;
    for (const Matrix2c& m : {e1, e2, e3, e4}) effects.emplace_back(0.5 * m);
    return Povm(std::move(effects));
}

Povm sagnac_povm_from_path_unitary(const SagnacParams& params) {
    const double x = params.x(), y = params.y();

    // Polarization ⊗ path, basis order |H0>, |V0>, |H1>, |V1>.
    // The loop acts as an isometry from the path-0 input modes:
    //   |H0> -> x|H0> - y|V1>,   |V0> -> y|V0> + x|H1>.
    Eigen::Matrix<complexd, 4, 2> loop;
    loop.setZero();
    loop(0, 0) = x;  // H0 <- H0
    loop(3, 0) = -y; // V1 <- H0
    loop(1, 1) = y;  // V0 <- V0
    loop(2, 1) = x;  // H1 <- V0

    auto hwp = [](double phi) {
        Matrix2c m;
        m << std::cos(2 * phi), -std::sin(2 * phi), -std::sin(2 * phi), -std::cos(2 * phi);
        return m;
    };
    auto qwp = [](double phi) -> Matrix2c {
        Matrix2c m;
        m << kI - std::cos(2 * phi), std::sin(2 * phi), std::sin(2 * phi), kI + std::cos(2 * phi);
        return m / std::sqrt(2.0);
    };

    const double pi = 3.14159265358979323846;
    // Waveplates per output arm: HWP(pi/8) in path 0; QWP(pi/4) then HWP(pi/4)
    // in path 1.
    Matrix2c w0 = hwp(pi / 8);
    Matrix2c w1 = hwp(pi / 4) * qwp(pi / 4);
    Eigen::Matrix4cd plates = Eigen::Matrix4cd::Zero();
    plates.block<2, 2>(0, 0) = w0;
    plates.block<2, 2>(2, 2) = w1;

    Eigen::Matrix<complexd, 4, 2> chain = plates * loop;

    // The polarizing beam splitter on each arm routes H and V to separate
    // detectors; combined mode -> detector map: (H0, V0, V1, H1).
    std::array<int, 4> detector_mode = {0, 1, 3, 2};
    std::vector<Effect> effects;
    for (int i = 0; i < 4; ++i) {
        Eigen::RowVector2cd row = chain.row(detector_mode[i]);
        effects.emplace_back(row.adjoint() * row);
    }
    return Povm(std::move(effects));
}

} // namespace bornlab
