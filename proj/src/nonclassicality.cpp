#include "bornlab/nonclassicality.hpp"

#include <cmath>
#include <stdexcept>

#include "bornlab/parallel.hpp"
#include "bornlab/simplex_lp.hpp"

namespace bornlab {

namespace {

using Eigen::Matrix4d;
using Eigen::MatrixXd;
using Eigen::Vector4d;
using Eigen::VectorXd;

const double kInvSqrt2 = 0.7071067811865475244;

Matrix2c basis_op(int mu) {
    Matrix2c m;
    switch (mu) {
        case 0: m << 1, 0, 0, 1; break;
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << 0, complexd(0, -1), complexd(0, 1), 0; break;
        default: m << 1, 0, 0, -1; break;
    }
    return m;
}

// Orthonormal basis (columns) of the span of a list of 4-vectors.
MatrixXd span_basis(const std::vector<Vector4d>& vectors, double tol) {
    MatrixXd stacked(static_cast<Eigen::Index>(vectors.size()), 4);
    for (std::size_t i = 0; i < vectors.size(); ++i)
        stacked.row(static_cast<Eigen::Index>(i)) = vectors[i];
    Eigen::JacobiSVD<MatrixXd> svd(stacked, Eigen::ComputeThinV);
    Eigen::Index dim = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > tol * svd.singularValues()[0]) ++dim;
    return svd.matrixV().leftCols(dim);
}

MatrixXd stack_rows(const std::vector<Vector4d>& vectors) {
    MatrixXd m(static_cast<Eigen::Index>(vectors.size()), 4);
    for (std::size_t i = 0; i < vectors.size(); ++i)
        m.row(static_cast<Eigen::Index>(i)) = vectors[i];
    return m;
}

std::vector<Vector4d> effect_cone_generators(const GptFragment& fragment,
                                             const EmbedOptions& options) {
    std::vector<Vector4d> gens = fragment.effects;
    if (options.complement_closure) {
        gens.push_back(fragment.unit);
        for (const Vector4d& e : fragment.effects) {
            Vector4d complement = fragment.unit - e;
            if (complement.norm() > options.tol) gens.push_back(complement);
        }
    }
    return gens;
}

// Assembles the cone-factorization program. A noncontextual model for the
// fragment is a factorization P(e|s) = sum_l xi(e|l) mu(l|s) with responses
// xi in [0,1] and weights mu >= 0. Writing the response map's columns and the
// weight map's rows in terms of the facet normals of the effect and state
// cones turns existence into: find beta >= 0 with
//
//   sum_{a,b} beta_ab h^E_a (h^S_b)^T  =  noise(p)   restricted to
//   span(effects) x span(states),
//
// since any nonnegative beta factors into per-lambda pieces and conversely.
// The unit effect's response is normalized to 1 afterwards by rescaling each
// lambda; that rescaling exists because the unit is interior to the
// (complement-closed) effect cone, and the complement closure keeps every
// rescaled response inside [0, 1] (the dual hypercube).
//
// Worked two-dimensional example: the fragment {|0><0|, |1><1|} with effects
// {|0><0|, |1><1|, I} lives in the span of I and Z. In the orthonormal
// coordinates (I, Z)/sqrt(2), both cones are generated by (1, 1)/sqrt(2) and
// (1, -1)/sqrt(2), which are also their own facet normals. beta = identity
// reproduces h1 h1^T + h2 h2^T = identity, i.e. the fragment is exactly
// embeddable at p = 0: the model has two hidden states, the responses of
// |0><0| and |1><1| are the indicator functions, and the unit responds 1.
struct LpBuild {
    LpProblem problem;
    MatrixXd effect_facets;
    MatrixXd state_facets;
    Eigen::Index n_beta = 0;
    Eigen::Index p_index = -1; // -1: fixed-p feasibility variant
};

LpBuild build_embedding_lp(const GptFragment& fragment, const NoiseModel& noise,
                           const EmbedOptions& options, double fixed_p, bool minimize_p) {
    if (fragment.states.empty() || fragment.effects.empty())
        throw std::invalid_argument("embedding LP: empty fragment");

    std::vector<Vector4d> effect_gens = effect_cone_generators(fragment, options);
    std::vector<Vector4d> state_gens = fragment.states;

    std::vector<VectorXd> he = facet_enumerate(stack_rows(effect_gens), options.tol);
    std::vector<VectorXd> hs = facet_enumerate(stack_rows(state_gens), options.tol);
    if (he.empty() || hs.empty())
        throw std::runtime_error("embedding LP: a fragment cone has no facets");

    MatrixXd bw = span_basis(effect_gens, options.tol); // 4 x w
    MatrixXd bv = span_basis(state_gens, options.tol);  // 4 x v
    const Eigen::Index w = bw.cols(), v = bv.cols();

    const Eigen::Index fe = static_cast<Eigen::Index>(he.size());
    const Eigen::Index fs = static_cast<Eigen::Index>(hs.size());
    const Eigen::Index n_beta = fe * fs;
    const Eigen::Index n_rows = w * v + (minimize_p ? 1 : 0);
    const Eigen::Index n_vars = n_beta + (minimize_p ? 2 : 0); // beta (+ p, slack)

    LpBuild build;
    build.n_beta = n_beta;
    build.effect_facets.resize(fe, 4);
    for (Eigen::Index a = 0; a < fe; ++a) build.effect_facets.row(a) = he[static_cast<std::size_t>(a)];
    build.state_facets.resize(fs, 4);
    for (Eigen::Index b = 0; b < fs; ++b) build.state_facets.row(b) = hs[static_cast<std::size_t>(b)];

    Matrix4d m0 = noise.base();
    Matrix4d m1 = noise.slope();
    MatrixXd target = bw.transpose() * (minimize_p ? m0 : noise.at(fixed_p)) * bv; // w x v
    MatrixXd slope = bw.transpose() * m1 * bv;

    LpProblem& lp = build.problem;
    lp.a.setZero(n_rows, n_vars);
    lp.b.setZero(n_rows);
    lp.c.setZero(n_vars);

    // Precompute facet coordinates in the two span bases.
    MatrixXd ew = build.effect_facets * bw; // fe x w
    MatrixXd sv = build.state_facets * bv;  // fs x v

    Eigen::Index row = 0;
    for (Eigen::Index i = 0; i < w; ++i) {
        for (Eigen::Index j = 0; j < v; ++j, ++row) {
            for (Eigen::Index a = 0; a < fe; ++a)
                for (Eigen::Index b = 0; b < fs; ++b)
                    lp.a(row, a * fs + b) = ew(a, i) * sv(b, j);
            if (minimize_p) lp.a(row, n_beta) = -slope(i, j);
            lp.b[row] = target(i, j);
        }
    }
    if (minimize_p) {
        build.p_index = n_beta;
        lp.a(row, n_beta) = 1.0; // p + slack = 1
        lp.a(row, n_beta + 1) = 1.0;
        lp.b[row] = 1.0;
        lp.c[n_beta] = 1.0; // minimize p
    }
    return build;
}

} // namespace

Vector4d bloch_vectorize(const Matrix2c& hermitian) {
    if (!is_hermitian(hermitian, 1e-10))
        throw std::invalid_argument("bloch_vectorize: operator is not Hermitian");
    Vector4d v;
    for (int mu = 0; mu < 4; ++mu)
        v[mu] = (hermitian * basis_op(mu)).trace().real() * kInvSqrt2;
    return v;
}

Matrix2c bloch_devectorize(const Vector4d& v) {
    Matrix2c m = Matrix2c::Zero();
    for (int mu = 0; mu < 4; ++mu) m += v[mu] * kInvSqrt2 * basis_op(mu);
    return m;
}

GptFragment make_fragment(const std::vector<DensityOperator>& states,
                          const std::vector<Effect>& effects) {
    GptFragment fragment;
    fragment.states.reserve(states.size());
    for (const auto& s : states) fragment.states.push_back(bloch_vectorize(s.matrix()));
    fragment.effects.reserve(effects.size());
    for (const auto& e : effects) fragment.effects.push_back(bloch_vectorize(e.matrix()));
    fragment.unit = bloch_vectorize(Matrix2c::Identity());
    return fragment;
}

GptFragment canonical_fragment() {
    std::vector<DensityOperator> states;
    std::vector<Effect> effects;
    for (PauliAxis axis : {PauliAxis::X, PauliAxis::Y, PauliAxis::Z}) {
        Povm povm = pauli_measurement(axis);
        for (const Effect& e : povm.effects()) {
            states.emplace_back(e.matrix()); // rank-1 projectors are states too
            effects.push_back(e);
        }
    }
    SicSet sic = sic_tetrahedron();
    for (const auto& projector : sic.projectors) states.push_back(projector);
    for (const auto& e : sic.povm.effects()) effects.push_back(e);
    return make_fragment(states, effects);
}

const char* noise_name(NoiseKind kind) {
    return kind == NoiseKind::Depolarizing ? "depolarizing" : "dephasing";
}

Eigen::Matrix4d NoiseModel::slope() const {
    Matrix4d s = Matrix4d::Zero();
    switch (kind) {
        case NoiseKind::Depolarizing:
            // Bloch vector shrinks by (1 - p); the trace component is fixed.
            s.diagonal() << 0, -1, -1, -1;
            break;
        case NoiseKind::Dephasing:
            // X and Y components shrink by (1 - p); Z survives.
            s.diagonal() << 0, -1, -1, 0;
            break;
    }
    return s;
}

RobustnessResult min_noise_lp(const GptFragment& fragment, const NoiseModel& noise,
                              const EmbedOptions& options) {
    LpBuild build = build_embedding_lp(fragment, noise, options, 0.0, true);
    LpSolution sol = solve_lp(build.problem);

    RobustnessResult result;
    result.effect_facets = build.effect_facets;
    result.state_facets = build.state_facets;
    if (sol.status == LpStatus::Infeasible) {
        result.feasible = false;
        return result;
    }
    if (sol.status != LpStatus::Optimal)
        throw std::runtime_error("embedding LP: solver reported an unbounded problem");

    result.feasible = true;
    result.p_min = sol.x[build.p_index];
    const Eigen::Index fe = build.effect_facets.rows();
    const Eigen::Index fs = build.state_facets.rows();
    result.beta.resize(fe, fs);
    for (Eigen::Index a = 0; a < fe; ++a)
        for (Eigen::Index b = 0; b < fs; ++b) result.beta(a, b) = sol.x[a * fs + b];

    // Certificate check: the factored map must reproduce every noisy pairing.
    Matrix4d reconstructed = Matrix4d::Zero();
    for (Eigen::Index a = 0; a < fe; ++a)
        for (Eigen::Index b = 0; b < fs; ++b)
            reconstructed +=
                result.beta(a, b) * build.effect_facets.row(a).transpose() * build.state_facets.row(b);
    Matrix4d noisy = noise.at(result.p_min);
    double worst = 0.0;
    for (const Vector4d& e : fragment.effects)
        for (const Vector4d& s : fragment.states)
            worst = std::max(worst, std::abs(e.dot(reconstructed * s) - e.dot(noisy * s)));
    result.residual = worst;
    return result;
}

bool embeddable_at(const GptFragment& fragment, const NoiseModel& noise, double p,
                   const EmbedOptions& options) {
    LpBuild build = build_embedding_lp(fragment, noise, options, p, false);
    return solve_lp(build.problem).status == LpStatus::Optimal;
}

double min_noise_bisect(const GptFragment& fragment, const NoiseModel& noise, double tol,
                        const EmbedOptions& options) {
    if (embeddable_at(fragment, noise, 0.0, options)) return 0.0;
    if (!embeddable_at(fragment, noise, 1.0, options))
        throw std::runtime_error("min_noise_bisect: fragment not embeddable even at p = 1");
    double lo = 0.0, hi = 1.0;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (embeddable_at(fragment, noise, mid, options) ? hi : lo) = mid;
    }
    return hi;
}

DensityOperator random_rank2_state(Rng& rng) {
    Matrix2c amplitudes;
    for (int a = 0; a < 2; ++a)
        for (int k = 0; k < 2; ++k) amplitudes(a, k) = complexd(normal01(rng), normal01(rng));
    Matrix2c rho = amplitudes * amplitudes.adjoint();
    rho /= rho.trace().real();
    // Scrub rounding dust so the validating constructor accepts it.
    rho = 0.5 * (rho + rho.adjoint().eval());
    return DensityOperator(rho);
}

std::vector<SweepRecord> random_fragment_sweep(const std::vector<int>& n_states_grid,
                                               const std::vector<int>& ranks,
                                               const std::vector<NoiseKind>& kinds,
                                               int n_ensembles, std::uint64_t master_seed,
                                               int workers) {
    if (n_ensembles < 1) throw std::invalid_argument("sweep: n_ensembles must be >= 1");
    for (int r : ranks)
        if (r != 1 && r != 2) throw std::invalid_argument("sweep: rank must be 1 or 2");

    std::vector<Effect> effects;
    SicSet sic = sic_tetrahedron();
    for (const auto& e : sic.povm.effects()) effects.push_back(e);
    for (PauliAxis axis : {PauliAxis::X, PauliAxis::Y, PauliAxis::Z}) {
        Povm povm = pauli_measurement(axis);
        for (const Effect& e : povm.effects()) effects.push_back(e);
    }

    struct Task {
        int n_states;
        int rank;
        NoiseKind kind;
        int ensemble;
    };
    std::vector<Task> tasks;
    for (int n : n_states_grid)
        for (int rank : ranks)
            for (NoiseKind kind : kinds)
                for (int ensemble = 0; ensemble < n_ensembles; ++ensemble)
                    tasks.push_back({n, rank, kind, ensemble});

    std::vector<SweepRecord> records(tasks.size());
    parallel_for(tasks.size(), workers, [&](std::size_t t) {
        const Task& task = tasks[t];
        Rng rng = make_rng(derive_seed(master_seed, static_cast<std::uint64_t>(t)));
        std::vector<DensityOperator> states;
        states.reserve(static_cast<std::size_t>(task.n_states));
        for (int s = 0; s < task.n_states; ++s)
            states.push_back(task.rank == 1 ? random_pure_state(rng) : random_rank2_state(rng));
        GptFragment fragment = make_fragment(states, effects);
        RobustnessResult result = min_noise_lp(fragment, NoiseModel{task.kind});
        if (!result.feasible)
            throw std::runtime_error("sweep: embedding infeasible even at p = 1");
        records[t] = {task.n_states, task.rank, task.kind, task.ensemble, result.p_min};
    });
    return records;
}

} // namespace bornlab
