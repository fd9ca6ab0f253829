#include "nsch/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <utility>

namespace nsch
{
	namespace
	{
		using CoordKey = std::pair<std::int64_t, std::int64_t>;

		CoordKey coord_key(const Rectangle &domain, const Vector2d &p)
		{
			const double scale = 1e9 / std::max(domain.width(), domain.height());
			return {std::llround((p.x() - domain.x0) * scale), std::llround((p.y() - domain.y0) * scale)};
		}

		double wrap_tolerance(const Rectangle &domain)
		{
			return 1e-10 * std::max(domain.width(), domain.height());
		}
	} // namespace

	BoundarySpec BoundarySpec::fully_periodic()
	{
		BoundarySpec spec;
		spec.periodic = true;
		spec.left = spec.right = spec.bottom = spec.top = BoundaryKind::Periodic;
		return spec;
	}

	BoundarySpec BoundarySpec::walls(BoundaryKind left, BoundaryKind right, BoundaryKind bottom, BoundaryKind top)
	{
		if (left == BoundaryKind::Periodic || right == BoundaryKind::Periodic
			|| bottom == BoundaryKind::Periodic || top == BoundaryKind::Periodic)
			throw MeshError("per-side boundary tags must be NoSlip or NoPenetration");
		return {false, left, right, bottom, top};
	}

	double Mesh::signed_area(Index cell) const
	{
		const Vector2d a = vertex(cells(cell, 0));
		const Vector2d b = vertex(cells(cell, 1));
		const Vector2d c = vertex(cells(cell, 2));
		return 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
	}

	Vector2d Mesh::periodic_image(const Vector2d &p) const
	{
		if (!is_periodic())
			return p;
		const double tol = wrap_tolerance(domain);
		Vector2d q = p;
		if (std::abs(q.x() - domain.x1) < tol)
			q.x() = domain.x0;
		if (std::abs(q.y() - domain.y1) < tol)
			q.y() = domain.y0;
		return q;
	}

	namespace detail
	{
		double max_edge_length(const Mesh &mesh)
		{
			double h = 0.0;
			for (Index c = 0; c < mesh.num_cells(); ++c)
				for (int e = 0; e < 3; ++e)
				{
					const Vector2d d = mesh.vertex(mesh.cells(c, (e + 1) % 3)) - mesh.vertex(mesh.cells(c, e));
					h = std::max(h, d.norm());
				}
			return h;
		}

		std::optional<std::vector<Index>> periodic_vertex_map(const Mesh &mesh)
		{
			std::map<CoordKey, Index> lookup;
			for (Index v = 0; v < mesh.num_vertices(); ++v)
				lookup.emplace(coord_key(mesh.domain, mesh.vertex(v)), v);

			// periodic_image is a no-op until the map exists, so wrap by hand here
			const double tol = wrap_tolerance(mesh.domain);
			std::vector<Index> map(mesh.num_vertices());
			for (Index v = 0; v < mesh.num_vertices(); ++v)
			{
				Vector2d q = mesh.vertex(v);
				if (std::abs(q.x() - mesh.domain.x1) < tol)
					q.x() = mesh.domain.x0;
				if (std::abs(q.y() - mesh.domain.y1) < tol)
					q.y() = mesh.domain.y0;
				const auto it = lookup.find(coord_key(mesh.domain, q));
				if (it == lookup.end())
					throw MeshError("periodic partner vertex not found");
				map[v] = it->second;
			}
			return map;
		}
	} // namespace detail

	Mesh build_structured_mesh(const Rectangle &domain, Index n_x, Index n_y, const BoundarySpec &bc)
	{
		if (!(domain.width() > 0.0) || !(domain.height() > 0.0))
			throw MeshError("domain extents must be positive");
		if (n_x < 1 || n_y < 1)
			throw MeshError("subdivision counts must be at least 1");

		Mesh mesh;
		mesh.domain = domain;
		mesh.vertices.resize((n_x + 1) * (n_y + 1), 2);
		const auto vid = [n_x](Index i, Index j) { return j * (n_x + 1) + i; };
		for (Index j = 0; j <= n_y; ++j)
			for (Index i = 0; i <= n_x; ++i)
			{
				// exact endpoints so periodic partners match bit for bit
				const double x = i == n_x ? domain.x1 : domain.x0 + domain.width() * double(i) / double(n_x);
				const double y = j == n_y ? domain.y1 : domain.y0 + domain.height() * double(j) / double(n_y);
				mesh.vertices.row(vid(i, j)) << x, y;
			}

		// every rectangle is cut along its lower-left to upper-right diagonal
		mesh.cells.resize(2 * n_x * n_y, 3);
		Index c = 0;
		for (Index j = 0; j < n_y; ++j)
			for (Index i = 0; i < n_x; ++i)
			{
				const Index v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
				mesh.cells.row(c++) << v00, v10, v11;
				mesh.cells.row(c++) << v00, v11, v01;
			}

		const auto tag = [&bc](BoundaryKind side) { return bc.periodic ? BoundaryKind::Periodic : side; };
		for (Index i = 0; i < n_x; ++i)
		{
			mesh.boundary_edges.push_back({{vid(i, 0), vid(i + 1, 0)}, tag(bc.bottom)});
			mesh.boundary_edges.push_back({{vid(i + 1, n_y), vid(i, n_y)}, tag(bc.top)});
		}
		for (Index j = 0; j < n_y; ++j)
		{
			mesh.boundary_edges.push_back({{vid(0, j + 1), vid(0, j)}, tag(bc.left)});
			mesh.boundary_edges.push_back({{vid(n_x, j), vid(n_x, j + 1)}, tag(bc.right)});
		}

		if (bc.periodic)
			mesh.periodic_map = detail::periodic_vertex_map(mesh);
		mesh.h_max = detail::max_edge_length(mesh);
		return mesh;
	}

	Mesh refine_uniform(const Mesh &mesh)
	{
		Mesh fine;
		fine.dimension = mesh.dimension;
		fine.domain = mesh.domain;

		std::vector<Vector2d> points;
		points.reserve(4 * mesh.num_vertices());
		for (Index v = 0; v < mesh.num_vertices(); ++v)
			points.push_back(mesh.vertex(v));

		std::map<std::pair<Index, Index>, Index> midpoint;
		const auto midpoint_of = [&](Index a, Index b) {
			const auto key = std::minmax(a, b);
			const auto [it, inserted] = midpoint.try_emplace(key, Index(points.size()));
			if (inserted)
				points.push_back(0.5 * (points[a] + points[b]));
			return it->second;
		};

		fine.cells.resize(4 * mesh.num_cells(), 3);
		fine.parent_cell.resize(4 * mesh.num_cells());
		for (Index c = 0; c < mesh.num_cells(); ++c)
		{
			const Index a = mesh.cells(c, 0), b = mesh.cells(c, 1), d = mesh.cells(c, 2);
			const Index ab = midpoint_of(a, b), bd = midpoint_of(b, d), da = midpoint_of(d, a);
			fine.cells.row(4 * c + 0) << a, ab, da;
			fine.cells.row(4 * c + 1) << ab, b, bd;
			fine.cells.row(4 * c + 2) << da, bd, d;
			fine.cells.row(4 * c + 3) << ab, bd, da;
			for (int k = 0; k < 4; ++k)
				fine.parent_cell[4 * c + k] = c;
		}

		fine.vertices.resize(Index(points.size()), 2);
		for (Index v = 0; v < Index(points.size()); ++v)
			fine.vertices.row(v) = points[v].transpose();

		for (const auto &edge : mesh.boundary_edges)
		{
			const Index m = midpoint.at(std::minmax(edge.vertices[0], edge.vertices[1]));
			fine.boundary_edges.push_back({{edge.vertices[0], m}, edge.kind});
			fine.boundary_edges.push_back({{m, edge.vertices[1]}, edge.kind});
		}

		if (mesh.is_periodic())
			fine.periodic_map = detail::periodic_vertex_map(fine);
		fine.h_max = detail::max_edge_length(fine);
		return fine;
	}

	void write_mesh_vtk(const Mesh &mesh, const std::string &path)
	{
		std::ofstream out(path);
		if (!out)
			throw std::runtime_error("cannot open '" + path + "' for writing");
		out.precision(17);
		out << "# vtk DataFile Version 3.0\nmesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
		out << "POINTS " << mesh.num_vertices() << " double\n";
		for (Index v = 0; v < mesh.num_vertices(); ++v)
			out << mesh.vertices(v, 0) << ' ' << mesh.vertices(v, 1) << " 0\n";
		out << "CELLS " << mesh.num_cells() << ' ' << 4 * mesh.num_cells() << '\n';
		for (Index c = 0; c < mesh.num_cells(); ++c)
			out << "3 " << mesh.cells(c, 0) << ' ' << mesh.cells(c, 1) << ' ' << mesh.cells(c, 2) << '\n';
		out << "CELL_TYPES " << mesh.num_cells() << '\n';
		for (Index c = 0; c < mesh.num_cells(); ++c)
			out << "5\n";
		if (!out)
			throw std::runtime_error("failed writing '" + path + "'");
	}
} // namespace nsch
