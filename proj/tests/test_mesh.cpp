#include "test_support.hpp"

#include <doctest.h>

#include <random>

using namespace nsch;

namespace
{
	double total_area(const Mesh &m)
	{
		double a = 0.0;
		for (Index c = 0; c < m.num_cells(); ++c)
			a += m.signed_area(c);
		return a;
	}
} // namespace

TEST_CASE("single periodic square: two cells, all four corners identified")
{
	const Mesh m = build_structured_mesh({0, 0, 1, 1}, 1, 1, BoundarySpec::fully_periodic());
	CHECK(m.num_cells() == 2);
	CHECK(m.num_vertices() == 4);
	REQUIRE(m.is_periodic());
	int slaves = 0;
	for (Index v = 0; v < 4; ++v)
		slaves += m.master(v) != v;
	CHECK(slaves == 3);
	CHECK(ScalarSpaceP1(std::make_shared<const Mesh>(m)).dof_count() == 1);
}

TEST_CASE("tall box 32x64")
{
	const Mesh m = build_structured_mesh({0, 0, 1, 2}, 32, 64, BoundarySpec::no_slip());
	CHECK(m.num_cells() == 4096);
	CHECK(m.h_max == doctest::Approx(std::sqrt(2.0) / 32).epsilon(1e-14));
	CHECK(oracle::mesh_violation(m) == "");
}

TEST_CASE("2x2 no-slip square has 8 boundary edges, all no-slip")
{
	const Mesh m = build_structured_mesh({0, 0, 1, 1}, 2, 2, BoundarySpec::no_slip());
	CHECK(m.boundary_edges.size() == 8);
	for (const auto &e : m.boundary_edges)
		CHECK(e.kind == BoundaryKind::NoSlip);
	CHECK(oracle::mesh_violation(m) == "");
}

TEST_CASE("boundary tags follow the sides")
{
	const Mesh m = build_structured_mesh(
		{0, 0, 1, 2}, 3, 5,
		BoundarySpec::walls(BoundaryKind::NoPenetration, BoundaryKind::NoPenetration, BoundaryKind::NoSlip,
							BoundaryKind::NoSlip));
	int vertical = 0;
	for (const auto &e : m.boundary_edges)
	{
		const Vector2d a = m.vertex(e.vertices[0]), b = m.vertex(e.vertices[1]);
		const bool is_vertical = std::abs(a.x() - b.x()) < 1e-14;
		vertical += is_vertical;
		CHECK(e.kind == (is_vertical ? BoundaryKind::NoPenetration : BoundaryKind::NoSlip));
	}
	CHECK(vertical == 10);
	CHECK(m.boundary_edges.size() == 16);
}

TEST_CASE("invalid inputs are rejected")
{
	CHECK_THROWS_AS(build_structured_mesh({0, 0, 0, 1}, 2, 2, BoundarySpec::no_slip()), MeshError);
	CHECK_THROWS_AS(build_structured_mesh({0, 0, 1, -1}, 2, 2, BoundarySpec::no_slip()), MeshError);
	CHECK_THROWS_AS(build_structured_mesh({0, 0, 1, 1}, 0, 2, BoundarySpec::no_slip()), MeshError);
	CHECK_THROWS_AS(build_structured_mesh({0, 0, 1, 1}, 2, -1, BoundarySpec::no_slip()), MeshError);
	CHECK_THROWS_AS(BoundarySpec::walls(BoundaryKind::Periodic, BoundaryKind::NoSlip, BoundaryKind::NoSlip,
										BoundaryKind::NoSlip),
					MeshError);
}

TEST_CASE("refining the two-cell square")
{
	const Mesh m = build_structured_mesh({0, 0, 1, 1}, 1, 1, BoundarySpec::no_slip());
	const Mesh f = refine_uniform(m);
	CHECK(f.num_cells() == 8);
	CHECK(f.h_max == doctest::Approx(m.h_max / 2).epsilon(1e-14));
	CHECK(oracle::mesh_violation(f) == "");
	REQUIRE(f.parent_cell.size() == 8);
}

TEST_CASE("k refinements from n = 2 halve h_max k times")
{
	for (const bool periodic : {false, true})
	{
		Mesh m = build_structured_mesh({0, 0, 1, 1}, 2, 2, periodic ? BoundarySpec::fully_periodic() : BoundarySpec::no_slip());
		const double h0 = m.h_max;
		for (int k = 1; k <= 4; ++k)
		{
			m = refine_uniform(m);
			CHECK(m.h_max == doctest::Approx(h0 / std::pow(2.0, k)).epsilon(1e-13));
			CHECK(oracle::mesh_violation(m) == "");
			CHECK(m.is_periodic() == periodic);
		}
	}
}

TEST_CASE("refinement matches the structured mesh of twice the resolution")
{
	const Mesh coarse = build_structured_mesh({0, 0, 1, 2}, 3, 4, BoundarySpec::no_slip());
	const Mesh fine = refine_uniform(coarse);
	const Mesh direct = build_structured_mesh({0, 0, 1, 2}, 6, 8, BoundarySpec::no_slip());
	CHECK(fine.num_vertices() == direct.num_vertices());
	CHECK(fine.boundary_edges.size() == direct.boundary_edges.size());
	CHECK(fine.h_max == doctest::Approx(direct.h_max).epsilon(1e-14));
}

TEST_CASE("property: random rectangles and counts satisfy every invariant")
{
	std::mt19937_64 rng(7);
	std::uniform_real_distribution<double> u(0.1, 3.0);
	std::uniform_int_distribution<int> n(1, 7);
	for (int trial = 0; trial < 40; ++trial)
	{
		const double x0 = u(rng) - 1.5, y0 = u(rng) - 1.5;
		const Rectangle dom{x0, y0, x0 + u(rng), y0 + u(rng)};
		const Index nx = n(rng), ny = n(rng);
		const bool periodic = trial % 2 == 0;
		const BoundarySpec bc = periodic ? BoundarySpec::fully_periodic()
										 : BoundarySpec::walls(BoundaryKind::NoPenetration, BoundaryKind::NoSlip,
															   BoundaryKind::NoSlip, BoundaryKind::NoPenetration);
		const Mesh m = build_structured_mesh(dom, nx, ny, bc);
		CAPTURE(trial);
		CHECK(m.num_cells() == 2 * nx * ny);
		CHECK(total_area(m) == doctest::Approx(dom.area()).epsilon(1e-12));
		CHECK(oracle::mesh_violation(m, !periodic || (nx > 2 && ny > 2)) == "");
		CHECK(m.is_periodic() == periodic);
		if (periodic)
			for (Index v = 0; v < m.num_vertices(); ++v)
				CHECK(m.master(m.master(v)) == m.master(v));

		const Mesh f = refine_uniform(m);
		CHECK(f.num_cells() == 4 * m.num_cells());
		CHECK(total_area(f) == doctest::Approx(total_area(m)).epsilon(1e-12));
		CHECK(oracle::mesh_violation(f, !periodic || (nx > 1 && ny > 1)) == "");
		if (periodic)
			for (Index v = 0; v < f.num_vertices(); ++v)
				CHECK(f.master(f.master(v)) == f.master(v));
	}
}

TEST_CASE("periodic image wraps the right and top sides")
{
	const Mesh m = build_structured_mesh({0, 0, 2, 1}, 4, 2, BoundarySpec::fully_periodic());
	const Vector2d p = m.periodic_image(Vector2d(2.0, 1.0));
	CHECK(p.x() == doctest::Approx(0.0));
	CHECK(p.y() == doctest::Approx(0.0));
	const Vector2d q = m.periodic_image(Vector2d(0.5, 0.25));
	CHECK(q.x() == 0.5);
	CHECK(q.y() == 0.25);
}
