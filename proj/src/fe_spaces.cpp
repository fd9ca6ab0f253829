#include "nsch/fe_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace nsch
{
	namespace
	{
		using CoordKey = std::pair<std::int64_t, std::int64_t>;

		CoordKey point_key(const Mesh &mesh, const Vector2d &p)
		{
			const double scale = 1e9 / std::max(mesh.domain.width(), mesh.domain.height());
			return {std::llround((p.x() - mesh.domain.x0) * scale), std::llround((p.y() - mesh.domain.y0) * scale)};
		}

		std::vector<CellGeometry> cell_geometries(const Mesh &mesh)
		{
			std::vector<CellGeometry> geo;
			geo.reserve(mesh.num_cells());
			for (Index c = 0; c < mesh.num_cells(); ++c)
				geo.emplace_back(mesh.vertex(mesh.cells(c, 0)), mesh.vertex(mesh.cells(c, 1)), mesh.vertex(mesh.cells(c, 2)));
			return geo;
		}

		// local P2 edge slot k joins local vertices (k, k+1 mod 3)
		constexpr int edge_begin[3] = {0, 1, 2};
		constexpr int edge_end[3] = {1, 2, 0};
	} // namespace

	ScalarSpaceP1::ScalarSpaceP1(std::shared_ptr<const Mesh> mesh)
		: mesh_(std::move(mesh))
	{
		const Mesh &m = *mesh_;
		vertex_dof_.assign(m.num_vertices(), -1);
		for (Index v = 0; v < m.num_vertices(); ++v)
			if (m.master(v) == v)
			{
				vertex_dof_[v] = Index(dof_points_.size());
				dof_points_.push_back(m.vertex(v));
			}
		for (Index v = 0; v < m.num_vertices(); ++v)
			vertex_dof_[v] = vertex_dof_[m.master(v)];

		cell_dofs_.resize(m.num_cells(), 3);
		for (Index c = 0; c < m.num_cells(); ++c)
			for (int k = 0; k < 3; ++k)
				cell_dofs_(c, k) = vertex_dof_[m.cells(c, k)];

		geometry_ = cell_geometries(m);
		basis_integrals_ = Eigen::VectorXd::Zero(dof_count());
		for (Index c = 0; c < m.num_cells(); ++c)
			for (int k = 0; k < 3; ++k)
				basis_integrals_[cell_dofs_(c, k)] += geometry_[c].area / 3.0;
	}

	VectorSpaceP2::VectorSpaceP2(std::shared_ptr<const Mesh> mesh)
		: mesh_(std::move(mesh))
	{
		const Mesh &m = *mesh_;
		std::map<CoordKey, Index> node_of_point;
		const auto node_at = [&](const Vector2d &p) {
			const Vector2d image = m.periodic_image(p);
			const auto [it, inserted] = node_of_point.try_emplace(point_key(m, image), Index(node_points_.size()));
			if (inserted)
				node_points_.push_back(image);
			return it->second;
		};

		std::vector<Index> vertex_node(m.num_vertices());
		for (Index v = 0; v < m.num_vertices(); ++v)
			if (m.master(v) == v)
				vertex_node[v] = node_at(m.vertex(v));
		for (Index v = 0; v < m.num_vertices(); ++v)
			vertex_node[v] = vertex_node[m.master(v)];

		std::map<std::pair<Index, Index>, Index> edge_node;
		cell_nodes_.resize(m.num_cells(), 6);
		for (Index c = 0; c < m.num_cells(); ++c)
		{
			for (int k = 0; k < 3; ++k)
				cell_nodes_(c, k) = vertex_node[m.cells(c, k)];
			for (int e = 0; e < 3; ++e)
			{
				const Index a = m.cells(c, edge_begin[e]), b = m.cells(c, edge_end[e]);
				const auto key = std::minmax(a, b);
				auto it = edge_node.find(key);
				if (it == edge_node.end())
					it = edge_node.emplace(key, node_at(0.5 * (m.vertex(a) + m.vertex(b)))).first;
				cell_nodes_(c, 3 + e) = it->second;
			}
		}

		constrained_.assign(dof_count(), false);
		for (const auto &edge : m.boundary_edges)
		{
			if (edge.kind == BoundaryKind::Periodic)
				continue;
			const Index a = edge.vertices[0], b = edge.vertices[1];
			const Index nodes[3] = {vertex_node[a], vertex_node[b], edge_node.at(std::minmax(a, b))};
			const Vector2d tangent = m.vertex(b) - m.vertex(a);
			// axis-aligned walls: a vertical wall has normal along x
			const int normal = std::abs(tangent.x()) < std::abs(tangent.y()) ? 0 : 1;
			for (const Index node : nodes)
			{
				if (edge.kind == BoundaryKind::NoSlip)
				{
					constrained_[2 * node] = true;
					constrained_[2 * node + 1] = true;
				}
				else
					constrained_[2 * node + normal] = true;
			}
		}

		geometry_ = cell_geometries(m);
	}

	Index VectorSpaceP2::constrained_count() const
	{
		return Index(std::count(constrained_.begin(), constrained_.end(), true));
	}

	Eigen::VectorXd interpolate(const ScalarSpaceP1 &space, const std::function<double(const Vector2d &)> &field)
	{
		Eigen::VectorXd coeffs(space.dof_count());
		for (Index i = 0; i < space.dof_count(); ++i)
			coeffs[i] = field(space.dof_point(i));
		return coeffs;
	}

	Eigen::VectorXd interpolate(const VectorSpaceP2 &space, const std::function<Vector2d(const Vector2d &)> &field)
	{
		Eigen::VectorXd coeffs(space.dof_count());
		for (Index n = 0; n < space.node_count(); ++n)
			coeffs.segment<2>(2 * n) = field(space.node_point(n));
		return coeffs;
	}

	void enforce_constraints(const VectorSpaceP2 &space, Eigen::VectorXd &coeffs)
	{
		for (Index d = 0; d < space.dof_count(); ++d)
			if (space.is_constrained(d))
				coeffs[d] = 0.0;
	}

	double evaluate(const ScalarSpaceP1 &space, const Eigen::VectorXd &coeffs, Index cell, const Vector2d &xi)
	{
		const auto dofs = space.cell_dofs(cell);
		const Eigen::Vector3d n = p1_values<double>(xi);
		return n[0] * coeffs[dofs[0]] + n[1] * coeffs[dofs[1]] + n[2] * coeffs[dofs[2]];
	}

	Vector2d evaluate(const VectorSpaceP2 &space, const Eigen::VectorXd &coeffs, Index cell, const Vector2d &xi)
	{
		const auto nodes = space.cell_nodes(cell);
		const Eigen::Matrix<double, 6, 1> n = p2_values<double>(xi);
		Vector2d v = Vector2d::Zero();
		for (int k = 0; k < 6; ++k)
			v += n[k] * coeffs.segment<2>(2 * nodes[k]);
		return v;
	}

	FieldNorms norms(const ScalarSpaceP1 &space, const Eigen::VectorXd &coeffs)
	{
		const QuadratureRule &rule = default_rule();
		double l2 = 0.0, grad = 0.0;
		for (Index c = 0; c < space.mesh().num_cells(); ++c)
		{
			const CellGeometry &geo = space.geometry(c);
			const auto dofs = space.cell_dofs(c);
			const Eigen::Vector3d u(coeffs[dofs[0]], coeffs[dofs[1]], coeffs[dofs[2]]);
			const Vector2d du = geo.push_forward(p1_gradients()).transpose() * u;
			for (Eigen::Index q = 0; q < rule.size(); ++q)
			{
				const double w = 2.0 * geo.area * rule.weights[q];
				const double uq = p1_values<double>(rule.reference_point(q)).dot(u);
				l2 += w * uq * uq;
				grad += w * du.squaredNorm();
			}
		}
		return {std::sqrt(l2), std::sqrt(l2 + grad)};
	}

	FieldNorms norms(const VectorSpaceP2 &space, const Eigen::VectorXd &coeffs)
	{
		const QuadratureRule &rule = default_rule();
		double l2 = 0.0, grad = 0.0;
		for (Index c = 0; c < space.mesh().num_cells(); ++c)
		{
			const CellGeometry &geo = space.geometry(c);
			const auto nodes = space.cell_nodes(c);
			Eigen::Matrix<double, 6, 2> u;
			for (int k = 0; k < 6; ++k)
				u.row(k) = coeffs.segment<2>(2 * nodes[k]).transpose();
			for (Eigen::Index q = 0; q < rule.size(); ++q)
			{
				const Vector2d xi = rule.reference_point(q);
				const double w = 2.0 * geo.area * rule.weights[q];
				const Vector2d uq = u.transpose() * p2_values<double>(xi);
				const Matrix2d du = u.transpose() * geo.push_forward(p2_gradients<double>(xi));
				l2 += w * uq.squaredNorm();
				grad += w * du.squaredNorm();
			}
		}
		return {std::sqrt(l2), std::sqrt(l2 + grad)};
	}

	double integral(const ScalarSpaceP1 &space, const Eigen::VectorXd &coeffs)
	{
		return space.basis_integrals().dot(coeffs);
	}

	namespace
	{
		void check_nested(const Mesh &coarse, const Mesh &fine)
		{
			if (fine.parent_cell.size() != std::size_t(fine.num_cells()) || fine.num_cells() != 4 * coarse.num_cells())
				throw std::invalid_argument("fine mesh is not a uniform refinement of the coarse mesh");
		}
	} // namespace

	Eigen::VectorXd prolongate(const ScalarSpaceP1 &coarse, const Eigen::VectorXd &coeffs, const ScalarSpaceP1 &fine)
	{
		check_nested(coarse.mesh(), fine.mesh());
		Eigen::VectorXd out(fine.dof_count());
		const Mesh &fm = fine.mesh();
		for (Index c = 0; c < fm.num_cells(); ++c)
		{
			const Index parent = fm.parent_cell[c];
			for (int k = 0; k < 3; ++k)
			{
				const Vector2d xi = coarse.geometry(parent).pull_back(fm.vertex(fm.cells(c, k)));
				out[fine.cell_dofs(c)[k]] = evaluate(coarse, coeffs, parent, xi);
			}
		}
		return out;
	}

	Eigen::VectorXd prolongate(const VectorSpaceP2 &coarse, const Eigen::VectorXd &coeffs, const VectorSpaceP2 &fine)
	{
		check_nested(coarse.mesh(), fine.mesh());
		Eigen::VectorXd out(fine.dof_count());
		const Mesh &fm = fine.mesh();
		const Eigen::Matrix<double, 6, 2> ref = p2_reference_nodes();
		for (Index c = 0; c < fm.num_cells(); ++c)
		{
			const Index parent = fm.parent_cell[c];
			const auto nodes = fine.cell_nodes(c);
			for (int k = 0; k < 6; ++k)
			{
				const Vector2d x = fine.geometry(c).map(ref.row(k).transpose());
				const Vector2d xi = coarse.geometry(parent).pull_back(x);
				out.segment<2>(2 * nodes[k]) = evaluate(coarse, coeffs, parent, xi);
			}
		}
		return out;
	}

	Eigen::Matrix<double, Eigen::Dynamic, 2> sample_at_vertices(const VectorSpaceP2 &p2, const Eigen::VectorXd &coeffs,
																 const ScalarSpaceP1 &p1)
	{
		Eigen::Matrix<double, Eigen::Dynamic, 2> values(p1.dof_count(), 2);
		for (Index c = 0; c < p1.mesh().num_cells(); ++c)
		{
			const auto nodes = p2.cell_nodes(c);
			const auto dofs = p1.cell_dofs(c);
			for (int k = 0; k < 3; ++k)
				values.row(dofs[k]) = coeffs.segment<2>(2 * nodes[k]).transpose();
		}
		return values;
	}

	Eigen::VectorXd lift_to_p2(const ScalarSpaceP1 &p1, const Eigen::Matrix<double, Eigen::Dynamic, 2> &vertex_values,
							   const VectorSpaceP2 &p2)
	{
		Eigen::VectorXd out(p2.dof_count());
		const Eigen::Matrix<double, 6, 2> ref = p2_reference_nodes();
		for (Index c = 0; c < p1.mesh().num_cells(); ++c)
		{
			const auto nodes = p2.cell_nodes(c);
			const auto dofs = p1.cell_dofs(c);
			for (int k = 0; k < 6; ++k)
			{
				const Eigen::Vector3d n = p1_values<double>(Vector2d(ref.row(k).transpose()));
				Vector2d v = Vector2d::Zero();
				for (int j = 0; j < 3; ++j)
					v += n[j] * vertex_values.row(dofs[j]).transpose();
				out.segment<2>(2 * nodes[k]) = v;
			}
		}
		return out;
	}
} // namespace nsch
