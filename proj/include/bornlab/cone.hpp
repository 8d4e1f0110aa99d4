#pragma once

#include <vector>

#include <Eigen/Dense>

namespace bornlab {

/// Finitely generated cone in R^k (k <= 4 here) with its irredundant facet
/// description. Rows of both matrices are vectors; every generator has
/// nonnegative inner product with every facet normal.
struct PolyhedralCone {
    Eigen::MatrixXd generators;
    Eigen::MatrixXd facets;
};

/// Irredundant facet normals of cone(generators); equivalently the extremal
/// rays of the dual cone. Degenerate spans are handled by working inside the
/// linear span of the generators and lifting the result back; a cone whose
/// dual is trivial (generators positively spanning their whole span) has no
/// facets and yields an empty list.
///
/// Double description method with the combinatorial adjacency test
/// (Fukuda–Prodon). Generators are normalized and rays deduplicated at
/// tolerance `tol`.
std::vector<Eigen::VectorXd> facet_enumerate(const Eigen::MatrixXd& generators,
                                             double tol = 1e-9);

PolyhedralCone make_cone(const Eigen::MatrixXd& generators, double tol = 1e-9);

} // namespace bornlab
