#include "test_support.hpp"

#include <doctest.h>

#include <map>
#include <numbers>
#include <random>

using namespace nsch;
using std::numbers::pi;

namespace
{
	MixtureParams params(double rho1, double rho2)
	{
		MixtureParams p;
		p.rho1 = rho1;
		p.rho2 = rho2;
		return p;
	}

	// coefficient permutation realising u(x) -> u(x - shift) on a periodic mesh
	template <typename PointFn>
	std::vector<Index> shift_map(Index count, PointFn point, const Mesh &mesh, const Vector2d &shift)
	{
		std::map<std::pair<long long, long long>, Index> at;
		const auto key = [&](Vector2d x) {
			x = mesh.periodic_image(x);
			return std::pair{std::llround(x.x() * 1e8), std::llround(x.y() * 1e8)};
		};
		for (Index i = 0; i < count; ++i)
			at[key(point(i))] = i;
		std::vector<Index> from(count);
		for (Index i = 0; i < count; ++i)
		{
			Vector2d x = point(i) - shift;
			if (x.x() < mesh.domain.x0 - 1e-12)
				x.x() += mesh.domain.width();
			from[i] = at.at(key(x));
		}
		return from;
	}
} // namespace

TEST_CASE("derived constants")
{
	const MixtureParams p = params(3.0, 0.5);
	CHECK(p.alpha() == doctest::Approx(-p.rho_jump() / p.rho_mean()).epsilon(1e-14));
	CHECK(p.lambda() == -1.0);
	CHECK(p.rho_mean() == 1.75);
	CHECK(p.rho_jump() == 1.25);
}

TEST_CASE("validation rejects nonpositive constants")
{
	for (int k = 0; k < 7; ++k)
	{
		MixtureParams p;
		double *field[] = {&p.rho1, &p.rho2, &p.eta1, &p.eta2, &p.gamma, &p.beta, &p.g};
		*field[k] = k < 6 ? 0.0 : -1.0;
		CAPTURE(k);
		CHECK_THROWS_AS(p.validate(), std::invalid_argument);
	}
	MixtureParams p;
	p.mobility = MobilityLaw::constant(-1.0);
	CHECK_THROWS_AS(p.validate(), std::invalid_argument);
	CHECK_NOTHROW(MixtureParams{}.validate());
}

TEST_CASE("density and viscosity")
{
	const MixtureParams p = params(1000, 100);
	CHECK(density(p, 1.0) == 1000);
	CHECK(density(p, -1.0) == 100);
	CHECK(density(p, 0.0) == 550);
	MixtureParams q;
	q.eta1 = 10;
	q.eta2 = 1;
	CHECK(viscosity(q, 1.0) == 10);
	CHECK(viscosity(q, -1.0) == 1);
	CHECK(viscosity(q, 0.0) == 5.5);
}

TEST_CASE("clipped density and viscosity")
{
	const MixtureParams p = params(1000, 1);
	CHECK(density_clipped(p, -1.5) == 1);
	CHECK(density_clipped(p, 0.5) == density(p, 0.5));
	CHECK(density_clipped(p, 2.0) == 1000);
	MixtureParams q;
	q.eta1 = 2;
	q.eta2 = 7;
	CHECK(viscosity_clipped(q, -3.0) == 7);
	CHECK(viscosity_clipped(q, 3.0) == 2);
	CHECK(viscosity_clipped(q, 0.25) == viscosity(q, 0.25));
}

TEST_CASE("property: clipped laws stay above the smaller constant on [-10, 10]")
{
	std::mt19937_64 rng(1);
	for (int trial = 0; trial < 20; ++trial)
	{
		const MixtureParams p = oracle::random_params(rng, MobilityLaw::constant(1));
		for (int k = 0; k <= 20000; ++k)
		{
			const double phi = -10.0 + 20.0 * k / 20000;
			if (density_clipped(p, phi) < std::min(p.rho1, p.rho2) * (1 - 1e-15))
				FAIL("density below minimum at phi = " << phi);
			if (viscosity_clipped(p, phi) < std::min(p.eta1, p.eta2) * (1 - 1e-15))
				FAIL("viscosity below minimum at phi = " << phi);
		}
		CHECK(density_clipped(p, 1.0) == doctest::Approx(p.rho1));
		CHECK(density_clipped(p, -1.0) == doctest::Approx(p.rho2));
	}
}

TEST_CASE("quartic potential")
{
	CHECK(potential_value(1.0, 0.0) == 0.25);
	CHECK(potential_deriv(1.0, 0.0) == 0.0);
	CHECK(potential_value(1.0, 1.0) == 0.0);
	CHECK(potential_deriv(1.0, 1.0) == 0.0);
	CHECK(potential_value(1.0, -1.0) == 0.0);
	CHECK(potential_value(0.5, 2.0) == doctest::Approx(4.5));
	CHECK(potential_deriv(0.5, 2.0) == doctest::Approx(12.0));
}

TEST_CASE("time-averaged potential derivative")
{
	CHECK(potential_time_avg(1.0, 1.0, -1.0) == doctest::Approx(0.0));
	CHECK(potential_time_avg(1.0, 1.0, 0.0) == doctest::Approx(-0.25));
	CHECK(potential_time_avg(1.0, 0.3, 0.3) == doctest::Approx(potential_deriv(1.0, 0.3)).epsilon(1e-15));
}

TEST_CASE("property: time average equals the secant and Simpson's rule")
{
	std::mt19937_64 rng(2);
	std::uniform_real_distribution<double> u(-2.0, 2.0), b(0.01, 3.0);
	int checked = 0;
	for (int k = 0; k < 1000; ++k)
	{
		const double beta = b(rng), x = u(rng), y = u(rng);
		const double avg = potential_time_avg(beta, x, y);
		const double simpson = oracle::f_prime_avg_simpson(beta, x, y);
		CHECK(std::abs(avg - simpson) <= 1e-12 * std::max(1.0, std::abs(simpson)));
		if (std::abs(x - y) > 1e-8)
		{
			const double secant = (potential_value(beta, x) - potential_value(beta, y)) / (x - y);
			// the secant itself loses digits as |x - y| shrinks; bound its rounding
			const double scale = std::max(1.0, std::abs(secant)) + 4 * 1e-16 * potential_value(beta, 2.0) / std::abs(x - y);
			CHECK(std::abs(avg - secant) <= 1e-12 * scale);
			++checked;
		}
		// d/dx of the average is (f''(x) + 2 f''((x + y)/2)) / 6
		const double d = potential_time_avg_deriv(beta, x, y);
		const double expected = (potential_second_deriv(beta, x) + 2 * potential_second_deriv(beta, 0.5 * (x + y))) / 6;
		CHECK(d == doctest::Approx(expected).epsilon(1e-12));
	}
	CHECK(checked > 990);
}

TEST_CASE("mobility laws")
{
	const MobilityLaw quartic = MobilityLaw::degenerate_quartic(1e-2);
	CHECK(mobility(quartic, 1.0) == 0.0);
	CHECK(mobility(quartic, -1.0) == 0.0);
	CHECK(mobility(MobilityLaw::abs_degenerate(0.3), 0.0) == 0.3);
	const double eps = 0.02;
	CHECK(mobility(MobilityLaw::abs_degenerate(0.1 * eps * eps), 1.2) == doctest::Approx(1.76e-5).epsilon(1e-12));
	CHECK(mobility(MobilityLaw::constant(0.7), 5.0) == 0.7);
	std::mt19937_64 rng(3);
	std::uniform_real_distribution<double> u(-3.0, 3.0);
	for (int k = 0; k < 200; ++k)
	{
		const double phi = u(rng);
		for (const MobilityLaw law : {quartic, MobilityLaw::abs_degenerate(0.3), MobilityLaw::constant(0.1)})
		{
			CHECK(mobility(law, phi) >= 0.0);
			CHECK(mobility(law, phi) == doctest::Approx(oracle::mobility(law, phi)).epsilon(1e-14));
		}
	}
}

TEST_CASE("discrete energy")
{
	const Spaces s = oracle::make_spaces(4, 4, BoundarySpec::fully_periodic());
	MixtureParams p;
	p.beta = 0.37;
	p.gamma = 0.2;

	SUBCASE("pure phase at rest")
	{
		State st = State::zeros(s);
		st.phi.setOnes();
		CHECK(std::abs(discrete_energy(s, st, p).total) < 1e-15);
	}
	SUBCASE("phi = 0 on the unit square")
	{
		const State st = State::zeros(s);
		CHECK(discrete_energy(s, st, p).total == doctest::Approx(1.0 / (4 * p.beta)).epsilon(1e-14));
	}
}

TEST_CASE("property: discrete energy equals the dense-quadrature oracle")
{
	std::mt19937_64 rng(4);
	for (int trial = 0; trial < 10; ++trial)
	{
		const bool periodic = trial % 2;
		const Spaces s = oracle::make_spaces(3, 4, periodic ? BoundarySpec::fully_periodic() : BoundarySpec::no_slip(),
											 {0, 0, 1, 1.5});
		MixtureParams p = oracle::random_params(rng, MobilityLaw::constant(1));
		State st = oracle::random_state(s, rng, 0.95);
		if (trial < 5)
			p.rho2 = p.rho1; // |v|^2 of degree 4 integrated exactly
		else
			st.vel = lift_to_p2(s.scalar, sample_at_vertices(s.velocity, st.vel, s.scalar), s.velocity);
		const EnergyBreakdown e = discrete_energy(s, st, p);
		CAPTURE(trial);
		CHECK(e.total == doctest::Approx(oracle::dense_energy(s, st, p)).epsilon(1e-10));
		CHECK(e.total == doctest::Approx(e.free_energy + e.kinetic + e.gravity).epsilon(1e-12));
		CHECK(e.kinetic >= 0);
	}
}

TEST_CASE("property: energy is invariant under a periodic horizontal shift")
{
	std::mt19937_64 rng(5);
	const Spaces s = oracle::make_spaces(6, 4, BoundarySpec::fully_periodic());
	const Mesh &mesh = *s.mesh;
	const Vector2d shift(2.0 / 6, 0.0);
	const auto sfrom = shift_map(
		s.scalar.dof_count(), [&](Index i) { return s.scalar.dof_point(i); }, mesh, shift);
	const auto vfrom = shift_map(
		s.velocity.node_count(), [&](Index i) { return s.velocity.node_point(i); }, mesh, shift);
	for (int trial = 0; trial < 5; ++trial)
	{
		const MixtureParams p = oracle::random_params(rng, MobilityLaw::constant(1));
		const State a = oracle::random_state(s, rng, 1.3);
		State b = a;
		for (Index i = 0; i < s.scalar.dof_count(); ++i)
			b.phi[i] = a.phi[sfrom[i]];
		for (Index n = 0; n < s.velocity.node_count(); ++n)
			for (int c = 0; c < 2; ++c)
				b.vel[2 * n + c] = a.vel[2 * vfrom[n] + c];
		CHECK(discrete_energy(s, b, p).total == doctest::Approx(discrete_energy(s, a, p).total).epsilon(1e-12));
	}
}

TEST_CASE("dissipation rate")
{
	SUBCASE("still fluid with constant chemical potential")
	{
		const Spaces s = oracle::make_spaces(4, 4, BoundarySpec::fully_periodic());
		MixtureParams p = params(2, 5);
		p.mobility = MobilityLaw::constant(1.0);
		State st = State::zeros(s);
		st.phi = interpolate(s.scalar, [](const Vector2d &x) { return std::sin(2 * pi * x.x()); });
		st.mu.setConstant(0.3);
		CHECK(std::abs(dissipation_rate(s, st, st.phi, p)) < 1e-15);
	}
	SUBCASE("rigid translation has no viscous part")
	{
		const Spaces s = oracle::make_spaces(4, 4, BoundarySpec::fully_periodic());
		State st = State::zeros(s);
		st.vel = interpolate(s.velocity, [](const Vector2d &) { return Vector2d(0.4, -1.1); });
		CHECK(std::abs(dissipation_parts(s, st, st.phi, MixtureParams{}).viscous) < 1e-14);
	}
	SUBCASE("simple shear v = (y, 0)")
	{
		const Spaces s = oracle::make_spaces(4, 4, BoundarySpec::no_slip());
		State st = State::zeros(s);
		st.vel = interpolate(s.velocity, [](const Vector2d &x) { return Vector2d(x.y(), 0.0); });
		CHECK(dissipation_parts(s, st, st.phi, MixtureParams{}).viscous == doctest::Approx(1.0).epsilon(1e-13));
	}
}

TEST_CASE("property: dissipation is nonnegative")
{
	std::mt19937_64 rng(6);
	const Spaces s = oracle::make_spaces(4, 4, BoundarySpec::fully_periodic());
	for (int trial = 0; trial < 30; ++trial)
	{
		const MobilityLaw laws[] = {MobilityLaw::constant(0.1), MobilityLaw::degenerate_quartic(0.1),
									MobilityLaw::abs_degenerate(0.1)};
		const MixtureParams p = oracle::random_params(rng, laws[trial % 3]);
		const State st = oracle::random_state(s, rng, 1.5, 2.0);
		const DissipationParts d = dissipation_parts(s, st, st.phi, p);
		CHECK(d.diffusive >= 0);
		CHECK(d.viscous >= 0);
		CHECK(dissipation_rate(s, st, st.phi, p) == doctest::Approx(d.diffusive + d.viscous));
	}
}
