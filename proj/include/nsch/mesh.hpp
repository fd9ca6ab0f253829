#pragma once

#include "nsch/types.hpp"

#include <array>
#include <optional>
#include <string>
#include <stdexcept>
#include <vector>

namespace nsch
{
	enum class BoundaryKind
	{
		NoSlip,        // v = 0
		NoPenetration, // v.n = 0
		Periodic
	};

	struct Rectangle
	{
		double x0 = 0.0, y0 = 0.0;
		double x1 = 1.0, y1 = 1.0;

		double width() const { return x1 - x0; }
		double height() const { return y1 - y0; }
		double area() const { return width() * height(); }
	};

	/// Either fully periodic or one tag per side.
	struct BoundarySpec
	{
		bool periodic = false;
		BoundaryKind left = BoundaryKind::NoSlip;
		BoundaryKind right = BoundaryKind::NoSlip;
		BoundaryKind bottom = BoundaryKind::NoSlip;
		BoundaryKind top = BoundaryKind::NoSlip;

		static BoundarySpec fully_periodic();
		static BoundarySpec walls(BoundaryKind left, BoundaryKind right, BoundaryKind bottom, BoundaryKind top);
		static BoundarySpec no_slip() { return {}; }
	};

	struct BoundaryEdge
	{
		std::array<Index, 2> vertices;
		BoundaryKind kind;
	};

	class MeshError : public std::invalid_argument
	{
	public:
		using std::invalid_argument::invalid_argument;
	};

	/// Conforming triangulation of an axis-aligned rectangle.
	///
	/// Cells are counterclockwise vertex triples. For periodic meshes every
	/// vertex carries its master vertex in `periodic_map` (masters map to
	/// themselves); slaves sit on the right/top sides. `parent_cell` is filled
	/// by refine_uniform and maps each child cell to the cell it was cut from.
	struct Mesh
	{
		int dimension = 2;
		Rectangle domain;
		Points vertices;
		Triangles cells;
		std::vector<BoundaryEdge> boundary_edges;
		std::optional<std::vector<Index>> periodic_map;
		std::vector<Index> parent_cell;
		double h_max = 0.0;

		Index num_vertices() const { return vertices.rows(); }
		Index num_cells() const { return cells.rows(); }
		bool is_periodic() const { return periodic_map.has_value(); }

		Vector2d vertex(Index i) const { return vertices.row(i).transpose(); }
		double signed_area(Index cell) const;

		/// Image of a point under the periodic identification (identity for
		/// non-periodic meshes): coordinates on the right/top sides wrap to
		/// the left/bottom.
		Vector2d periodic_image(const Vector2d &p) const;

		Index master(Index v) const { return periodic_map ? (*periodic_map)[v] : v; }
	};

	Mesh build_structured_mesh(const Rectangle &domain, Index n_x, Index n_y, const BoundarySpec &bc);

	/// Red refinement: each triangle is split into four congruent children
	/// through its edge midpoints.
	Mesh refine_uniform(const Mesh &mesh);

	void write_mesh_vtk(const Mesh &mesh, const std::string &path);

	namespace detail
	{
		double max_edge_length(const Mesh &mesh);
		std::optional<std::vector<Index>> periodic_vertex_map(const Mesh &mesh);
	} // namespace detail
} // namespace nsch
