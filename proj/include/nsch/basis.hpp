#pragma once

#include "nsch/types.hpp"

#include <Eigen/LU>

#include <cmath>

namespace nsch
{
	enum class SpaceKind
	{
		P1,
		P2
	};

	// Reference triangle (0,0),(1,0),(0,1); barycentrics l0 = 1-x-y, l1 = x, l2 = y.
	// P2 local nodes: vertices 0,1,2 then midpoints of edges 01, 12, 20.

	template <typename Scalar>
	Eigen::Matrix<Scalar, 3, 1> p1_values(const Vector2<Scalar> &xi)
	{
		return {Scalar(1) - xi.x() - xi.y(), xi.x(), xi.y()};
	}

	inline Eigen::Matrix<double, 3, 2> p1_gradients()
	{
		Eigen::Matrix<double, 3, 2> g;
		g << -1, -1,
			1, 0,
			0, 1;
		return g;
	}

	template <typename Scalar>
	Eigen::Matrix<Scalar, 6, 1> p2_values(const Vector2<Scalar> &xi)
	{
		const Scalar l0 = Scalar(1) - xi.x() - xi.y(), l1 = xi.x(), l2 = xi.y();
		Eigen::Matrix<Scalar, 6, 1> n;
		n << l0 * (2 * l0 - 1), l1 * (2 * l1 - 1), l2 * (2 * l2 - 1),
			4 * l0 * l1, 4 * l1 * l2, 4 * l2 * l0;
		return n;
	}

	template <typename Scalar>
	Eigen::Matrix<Scalar, 6, 2> p2_gradients(const Vector2<Scalar> &xi)
	{
		const Scalar l0 = Scalar(1) - xi.x() - xi.y(), l1 = xi.x(), l2 = xi.y();
		Eigen::Matrix<Scalar, 6, 2> g;
		g << -(4 * l0 - 1), -(4 * l0 - 1),
			4 * l1 - 1, Scalar(0),
			Scalar(0), 4 * l2 - 1,
			4 * (l0 - l1), -4 * l1,
			4 * l2, 4 * l1,
			-4 * l2, 4 * (l0 - l2);
		return g;
	}

	/// Values and reference-coordinate gradients of every local basis function.
	/// Rows of `gradients` follow the local node order.
	struct BasisEvaluation
	{
		Eigen::VectorXd values;
		Eigen::Matrix<double, Eigen::Dynamic, 2> gradients;
	};

	inline BasisEvaluation eval_basis(SpaceKind kind, const Vector2d &xi)
	{
		if (kind == SpaceKind::P1)
			return {p1_values<double>(xi), p1_gradients()};
		return {p2_values<double>(xi), p2_gradients<double>(xi)};
	}

	/// Reference coordinates of the P2 local nodes.
	inline Eigen::Matrix<double, 6, 2> p2_reference_nodes()
	{
		Eigen::Matrix<double, 6, 2> x;
		x << 0, 0,
			1, 0,
			0, 1,
			0.5, 0,
			0.5, 0.5,
			0, 0.5;
		return x;
	}

	/// Affine map of one cell: x = origin + jacobian * xi.
	struct CellGeometry
	{
		Vector2d origin;
		Matrix2d jacobian;
		Matrix2d inverse_transpose;
		double area = 0.0; // |det J| / 2

		CellGeometry() = default;
		CellGeometry(const Vector2d &a, const Vector2d &b, const Vector2d &c)
			: origin(a)
		{
			jacobian.col(0) = b - a;
			jacobian.col(1) = c - a;
			const double det = jacobian.determinant();
			area = 0.5 * std::abs(det);
			inverse_transpose = jacobian.inverse().transpose();
		}

		Vector2d map(const Vector2d &xi) const { return origin + jacobian * xi; }
		Vector2d pull_back(const Vector2d &x) const { return inverse_transpose.transpose() * (x - origin); }

		/// Physical gradients from reference gradients (one basis function per row).
		template <typename Derived>
		Eigen::Matrix<double, Derived::RowsAtCompileTime, 2> push_forward(const Eigen::MatrixBase<Derived> &ref) const
		{
			return ref * inverse_transpose.transpose();
		}
	};
} // namespace nsch
