#pragma once

#include <Eigen/Core>

namespace nsch
{
	/// Symmetric quadrature on the reference triangle (0,0),(1,0),(0,1).
	/// Points are barycentric (l0, l1, l2); weights sum to the reference area 1/2.
	struct QuadratureRule
	{
		int degree = 0;
		Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor> points;
		Eigen::VectorXd weights;

		Eigen::Index size() const { return weights.size(); }
		/// Reference coordinates (xi, eta) = (l1, l2) of point q.
		Eigen::Vector2d reference_point(Eigen::Index q) const { return {points(q, 1), points(q, 2)}; }
	};

	/// Rules of degree 1 (centroid), 2 (3 points) and 4 (6 points, Dunavant).
	/// Other degrees are rounded up to the next available rule; degree > 4 throws.
	const QuadratureRule &triangle_rule(int degree);

	/// The rule used for every form in this code.
	inline const QuadratureRule &default_rule() { return triangle_rule(4); }
} // namespace nsch
