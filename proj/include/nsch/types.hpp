#pragma once

#include <Eigen/Core>
#include <Eigen/Sparse>

#include <cstdint>

namespace nsch
{
	using Index = std::int64_t;

	template <typename Scalar>
	using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
	template <typename Scalar>
	using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

	using Vector2d = Vector2<double>;
	using Matrix2d = Matrix2<double>;

	using Points = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;
	using Triangles = Eigen::Matrix<Index, Eigen::Dynamic, 3, Eigen::RowMajor>;

	using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
	using Triplet = Eigen::Triplet<double, int>;
} // namespace nsch
