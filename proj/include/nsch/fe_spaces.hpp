#pragma once

#include "nsch/basis.hpp"
#include "nsch/mesh.hpp"
#include "nsch/quadrature.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace nsch
{
	/// Continuous P1 on a mesh, one dof per (periodic master) vertex.
	class ScalarSpaceP1
	{
	public:
		explicit ScalarSpaceP1(std::shared_ptr<const Mesh> mesh);

		const Mesh &mesh() const { return *mesh_; }
		const std::shared_ptr<const Mesh> &mesh_ptr() const { return mesh_; }
		Index dof_count() const { return Index(dof_points_.size()); }
		Eigen::Matrix<Index, 1, 3> cell_dofs(Index cell) const { return cell_dofs_.row(cell); }
		Index vertex_dof(Index v) const { return vertex_dof_[v]; }
		const Vector2d &dof_point(Index dof) const { return dof_points_[dof]; }
		const CellGeometry &geometry(Index cell) const { return geometry_[cell]; }

		/// Integrals of the basis functions, <N_i, 1>.
		const Eigen::VectorXd &basis_integrals() const { return basis_integrals_; }

	private:
		std::shared_ptr<const Mesh> mesh_;
		Triangles cell_dofs_;
		std::vector<Index> vertex_dof_;
		std::vector<Vector2d> dof_points_;
		std::vector<CellGeometry> geometry_;
		Eigen::VectorXd basis_integrals_;
	};

	/// Mean-free P1 pressure. The zero-mean condition is imposed through a
	/// single Lagrange multiplier in the assembled system, so the dof layout
	/// is the plain P1 layout.
	using PressureSpaceQ = ScalarSpaceP1;

	/// Continuous P2 vector field. Nodes are vertices and edge midpoints; dof
	/// 2*node + c is component c of that node. Essential conditions are all
	/// homogeneous: NoSlip fixes both components, NoPenetration fixes the
	/// wall-normal Cartesian component.
	class VectorSpaceP2
	{
	public:
		explicit VectorSpaceP2(std::shared_ptr<const Mesh> mesh);

		const Mesh &mesh() const { return *mesh_; }
		Index node_count() const { return Index(node_points_.size()); }
		Index dof_count() const { return 2 * node_count(); }
		Eigen::Matrix<Index, 1, 6> cell_nodes(Index cell) const { return cell_nodes_.row(cell); }
		const Vector2d &node_point(Index node) const { return node_points_[node]; }
		bool is_constrained(Index dof) const { return constrained_[dof]; }
		Index constrained_count() const;
		const CellGeometry &geometry(Index cell) const { return geometry_[cell]; }

	private:
		std::shared_ptr<const Mesh> mesh_;
		Eigen::Matrix<Index, Eigen::Dynamic, 6, Eigen::RowMajor> cell_nodes_;
		std::vector<Vector2d> node_points_;
		std::vector<bool> constrained_;
		std::vector<CellGeometry> geometry_;
	};

	/// Everything the discrete problem lives on.
	struct Spaces
	{
		std::shared_ptr<const Mesh> mesh;
		ScalarSpaceP1 scalar;
		VectorSpaceP2 velocity;

		explicit Spaces(std::shared_ptr<const Mesh> m)
			: mesh(m), scalar(m), velocity(m)
		{
		}
		const PressureSpaceQ &pressure() const { return scalar; }
	};

	Eigen::VectorXd interpolate(const ScalarSpaceP1 &space, const std::function<double(const Vector2d &)> &field);
	Eigen::VectorXd interpolate(const VectorSpaceP2 &space, const std::function<Vector2d(const Vector2d &)> &field);

	/// Zero every constrained velocity dof.
	void enforce_constraints(const VectorSpaceP2 &space, Eigen::VectorXd &coeffs);

	double evaluate(const ScalarSpaceP1 &space, const Eigen::VectorXd &coeffs, Index cell, const Vector2d &xi);
	Vector2d evaluate(const VectorSpaceP2 &space, const Eigen::VectorXd &coeffs, Index cell, const Vector2d &xi);

	struct FieldNorms
	{
		double l2 = 0.0;
		double h1 = 0.0;
	};

	FieldNorms norms(const ScalarSpaceP1 &space, const Eigen::VectorXd &coeffs);
	FieldNorms norms(const VectorSpaceP2 &space, const Eigen::VectorXd &coeffs);

	double integral(const ScalarSpaceP1 &space, const Eigen::VectorXd &coeffs);

	/// Nodal interpolation of a coarse field onto a space built on
	/// refine_uniform(coarse mesh). Exact, since the spaces are nested.
	Eigen::VectorXd prolongate(const ScalarSpaceP1 &coarse, const Eigen::VectorXd &coeffs, const ScalarSpaceP1 &fine);
	Eigen::VectorXd prolongate(const VectorSpaceP2 &coarse, const Eigen::VectorXd &coeffs, const VectorSpaceP2 &fine);

	/// Component-wise values of a P2 field at the P1 dofs (two columns).
	Eigen::Matrix<double, Eigen::Dynamic, 2> sample_at_vertices(const VectorSpaceP2 &p2, const Eigen::VectorXd &coeffs,
																 const ScalarSpaceP1 &p1);
	/// P1 interpolant (per component) re-expressed in the P2 basis.
	Eigen::VectorXd lift_to_p2(const ScalarSpaceP1 &p1, const Eigen::Matrix<double, Eigen::Dynamic, 2> &vertex_values,
							   const VectorSpaceP2 &p2);
} // namespace nsch
