#include "bornlab/cone.hpp"

#include <stdexcept>

namespace bornlab {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Active-set bookkeeping for the adjacency test: constraint i is tight on a
// ray when |a_i . r| <= tol. Sets are small (tens of constraints).
struct Ray {
    VectorXd dir;              // unit norm
    std::vector<char> active;  // indexed by constraint
};

bool subset(const std::vector<char>& a, const std::vector<char>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] && !b[i]) return false;
    return true;
}

std::vector<char> intersect(const std::vector<char>& a, const std::vector<char>& b) {
    std::vector<char> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
    return out;
}

// Extremal rays of {x in R^d : C x >= 0} for a pointed target (rows of C span
// R^d). Incremental double description starting from a simplicial subcone.
std::vector<VectorXd> dual_rays(const MatrixXd& c, double tol) {
    const Eigen::Index n = c.rows();
    const Eigen::Index d = c.cols();

    // d linearly independent rows, best-conditioned first.
    Eigen::ColPivHouseholderQR<MatrixXd> qr(c.transpose());
    if (qr.rank() < d)
        throw std::invalid_argument("cone generators do not span the projected space");
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        order[static_cast<std::size_t>(i)] = qr.colsPermutation().indices()[i];

    MatrixXd a0(d, d);
    for (Eigen::Index r = 0; r < d; ++r) a0.row(r) = c.row(order[static_cast<std::size_t>(r)]);
    MatrixXd inv = a0.inverse();

    std::vector<char> processed(static_cast<std::size_t>(n), 0);
    std::vector<Ray> rays;
    for (Eigen::Index j = 0; j < d; ++j) {
        Ray ray;
        ray.dir = inv.col(j).normalized();
        ray.active.assign(static_cast<std::size_t>(n), 0);
        rays.push_back(std::move(ray));
    }
    auto refresh_active = [&](Ray& ray) {
        for (Eigen::Index i = 0; i < n; ++i)
            if (processed[static_cast<std::size_t>(i)])
                ray.active[static_cast<std::size_t>(i)] =
                    std::abs(c.row(i).dot(ray.dir)) <= tol;
    };
    for (Eigen::Index r = 0; r < d; ++r) processed[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = 1;
    for (Ray& ray : rays) refresh_active(ray);

    for (Eigen::Index step = d; step < n; ++step) {
        Eigen::Index ci = order[static_cast<std::size_t>(step)];
        VectorXd a = c.row(ci);

        std::vector<double> s(rays.size());
        bool any_neg = false;
        for (std::size_t j = 0; j < rays.size(); ++j) {
            s[j] = a.dot(rays[j].dir);
            if (s[j] < -tol) any_neg = true;
        }
        if (!any_neg) {
            processed[static_cast<std::size_t>(ci)] = 1;
            for (Ray& ray : rays) refresh_active(ray);
            continue;
        }

        std::vector<Ray> next;
        for (std::size_t j = 0; j < rays.size(); ++j)
            if (s[j] > -tol) next.push_back(rays[j]);

        // New rays live on the hyperplane a.x = 0, one per adjacent (+,-)
        // pair: no third ray's active set may contain the pair's common set.
        for (std::size_t jp = 0; jp < rays.size(); ++jp) {
            if (s[jp] <= tol) continue;
            for (std::size_t jn = 0; jn < rays.size(); ++jn) {
                if (s[jn] >= -tol) continue;
                std::vector<char> common = intersect(rays[jp].active, rays[jn].active);
                bool adjacent = true;
                for (std::size_t jo = 0; jo < rays.size(); ++jo) {
                    if (jo == jp || jo == jn) continue;
                    if (subset(common, rays[jo].active)) {
                        adjacent = false;
                        break;
                    }
                }
                if (!adjacent) continue;
                Ray fresh;
                fresh.dir = (s[jp] * rays[jn].dir - s[jn] * rays[jp].dir).normalized();
                fresh.active.assign(static_cast<std::size_t>(n), 0);
                bool dup = false;
                for (const Ray& other : next)
                    if ((other.dir - fresh.dir).norm() <= 10 * tol) {
                        dup = true;
                        break;
                    }
                if (!dup) next.push_back(std::move(fresh));
            }
        }

        processed[static_cast<std::size_t>(ci)] = 1;
        for (Ray& ray : next) refresh_active(ray);
        rays = std::move(next);
        if (rays.empty()) return {}; // dual cone is trivial
    }

    // Deduplicate directions.
    std::vector<VectorXd> out;
    for (const Ray& ray : rays) {
        bool seen = false;
        for (const VectorXd& v : out)
            if ((v - ray.dir).norm() <= 10 * tol) {
                seen = true;
                break;
            }
        if (!seen) out.push_back(ray.dir);
    }
    return out;
}

} // namespace

std::vector<VectorXd> facet_enumerate(const MatrixXd& generators, double tol) {
    if (generators.rows() == 0) throw std::invalid_argument("facet_enumerate: no generators");

    // Drop zero generators, normalize the rest.
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < generators.rows(); ++i)
        if (generators.row(i).norm() > tol) keep.push_back(i);
    if (keep.empty()) throw std::invalid_argument("facet_enumerate: all generators are zero");

    MatrixXd g(static_cast<Eigen::Index>(keep.size()), generators.cols());
    for (std::size_t i = 0; i < keep.size(); ++i)
        g.row(static_cast<Eigen::Index>(i)) = generators.row(keep[i]).normalized();

    // Work inside the span of the generators.
    Eigen::JacobiSVD<MatrixXd> svd(g, Eigen::ComputeThinV);
    Eigen::Index dim = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > tol * svd.singularValues()[0]) ++dim;
    MatrixXd basis = svd.matrixV().leftCols(dim); // columns orthonormal
    MatrixXd projected = g * basis;

    std::vector<VectorXd> rays = dual_rays(projected, tol);

    std::vector<VectorXd> facets;
    facets.reserve(rays.size());
    for (const VectorXd& r : rays) {
        VectorXd lifted = (basis * r).normalized();
        double worst = 0.0;
        for (Eigen::Index i = 0; i < g.rows(); ++i)
            worst = std::min(worst, g.row(i).dot(lifted));
        if (worst < -10 * tol)
            throw std::runtime_error("facet_enumerate: candidate facet cuts a generator");
        facets.push_back(lifted);
    }
    return facets;
}

PolyhedralCone make_cone(const MatrixXd& generators, double tol) {
    std::vector<VectorXd> facets = facet_enumerate(generators, tol);
    PolyhedralCone cone;
    cone.generators = generators;
    cone.facets.resize(static_cast<Eigen::Index>(facets.size()), generators.cols());
    for (std::size_t i = 0; i < facets.size(); ++i)
        cone.facets.row(static_cast<Eigen::Index>(i)) = facets[i];
    return cone;
}

} // namespace bornlab
