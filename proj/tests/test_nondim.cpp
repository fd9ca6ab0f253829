#include <nsch/experiments.hpp>
#include <nsch/nondim.hpp>

#include <doctest.h>

#include <cmath>
#include <random>

using namespace nsch;

namespace
{
	DimensionlessGroups capillary(double rho1, double eta1, double sigma, double g, double eps, double d0)
	{
		const double t0 = std::sqrt(rho1 * d0 * d0 * d0 / sigma);
		return groups_from_physical(rho1, eta1, sigma, g, eps, d0, d0 / t0);
	}

	bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::abs(b); }
} // namespace

TEST_CASE("groups of the first bubble case")
{
	const DimensionlessGroups g = capillary(1000, 10, 24.5, 0.98, 0.005, 0.5);
	CHECK(close(g.We, 1.0, 1e-12));
	CHECK(close(g.Eo, 1000 * 0.98 * 0.25 / 24.5, 1e-12));
	CHECK(close(g.Eo, 10.0, 1e-12));
	CHECK(close(g.Ar, 1000 * std::sqrt(0.98 * 0.125) / 10, 1e-12));
	CHECK(close(g.Ar, 35.0, 1e-12));
	CHECK(close(g.Re, 35.0 / std::sqrt(10.0), 1e-12));
	CHECK(std::abs(g.Re - 11.0680) < 5e-5);
	CHECK(close(g.Cn, 0.01, 1e-12));
	CHECK(close(g.T0, std::sqrt(1000 * 0.125 / 24.5), 1e-12));
	CHECK(close(g.V0 * g.T0, g.X0, 1e-12));
}

TEST_CASE("group definitions")
{
	std::mt19937_64 rng(2);
	std::uniform_real_distribution<double> u(-2.0, 2.0);
	for (int t = 0; t < 50; ++t)
	{
		const double rho1 = std::pow(10.0, u(rng)), eta1 = std::pow(10.0, u(rng)), sigma = std::pow(10.0, u(rng));
		const double g = std::pow(10.0, u(rng)), eps = std::pow(10.0, u(rng)), x0 = std::pow(10.0, u(rng));
		const double v0 = std::pow(10.0, u(rng));
		const DimensionlessGroups d = groups_from_physical(rho1, eta1, sigma, g, eps, x0, v0);
		CHECK(close(d.Re, rho1 * v0 * x0 / eta1, 1e-12));
		CHECK(close(d.We, rho1 * v0 * v0 * x0 / sigma, 1e-12));
		CHECK(close(d.Fr, v0 / std::sqrt(g * x0), 1e-12));
		CHECK(close(d.Cn, eps / x0, 1e-12));
		CHECK(close(d.Eo, rho1 * g * x0 * x0 / sigma, 1e-12));
		CHECK(close(d.Ar, rho1 * std::sqrt(g * x0 * x0 * x0) / eta1, 1e-12));

		const PhysicalParameters back = physical_from_groups(d, rho1);
		CHECK(close(back.rho1, rho1, 1e-12));
		CHECK(close(back.eta1, eta1, 1e-12));
		CHECK(close(back.sigma, sigma, 1e-12));
		CHECK(close(back.g, g, 1e-12));
		CHECK(close(back.eps, eps, 1e-12));
	}
}

TEST_CASE("capillary time scale gives unit Weber number")
{
	std::mt19937_64 rng(9);
	std::uniform_real_distribution<double> u(-2.0, 2.0);
	for (int t = 0; t < 30; ++t)
	{
		const double rho1 = std::pow(10.0, u(rng)), sigma = std::pow(10.0, u(rng)), d0 = std::pow(10.0, u(rng));
		const double t0 = capillary_time_scale(rho1, sigma, d0);
		CHECK(close(t0, std::sqrt(rho1 * d0 * d0 * d0 / sigma), 1e-12));
		const DimensionlessGroups g = groups_from_physical(rho1, 1.0, sigma, 1.0, 0.1, d0, d0 / t0);
		CHECK(std::abs(g.We - 1.0) < 1e-12);
		CHECK(check_relations(g).ok);
	}
}

TEST_CASE("relations for given Eo and Ar")
{
	// Eo = 125: Fr = 1/sqrt(125)
	const DimensionlessGroups g125 = capillary(1.0, 0.1, 1.0 / 125, 1.0, 0.01, 1.0);
	CHECK(close(g125.Eo, 125.0, 1e-12));
	CHECK(std::abs(g125.Fr - 0.08944) < 5e-6);
	CHECK(close(g125.Fr, 1 / std::sqrt(125.0), 1e-12));

	const DimensionlessGroups one = capillary(1.0, 1.0, 1.0, 1.0, 0.01, 1.0);
	CHECK(close(one.Eo, 1.0, 1e-14));
	CHECK(close(one.Ar, 1.0, 1e-14));
	CHECK(close(one.Re, 1.0, 1e-14));
	CHECK(close(one.Fr, 1.0, 1e-14));
	const RelationReport r = check_relations(one);
	CHECK(r.ok);
	CHECK(r.re_residual < 1e-14);
	CHECK(r.fr_residual < 1e-14);
	CHECK(r.we_residual < 1e-14);
}

TEST_CASE("check_relations flags mismatches")
{
	DimensionlessGroups g = capillary(1000, 10, 24.5, 0.98, 0.005, 0.5);
	CHECK(check_relations(g).ok);
	g.Re *= 1 + 1e-8;
	const RelationReport r = check_relations(g);
	CHECK_FALSE(r.ok);
	CHECK(r.re_residual > 1e-9);
	g = capillary(1000, 10, 24.5, 0.98, 0.005, 0.5);
	g.We = 1.5;
	CHECK_FALSE(check_relations(g).ok);
}

TEST_CASE("both bubble cases satisfy the relations")
{
	for (int which : {1, 2})
	{
		const DimensionlessGroups g = bubble_groups(which, 0.005);
		const RelationReport r = check_relations(g);
		CHECK(r.ok);
		CHECK(std::abs(g.We - 1.0) < 1e-12);
	}
	CHECK(close(bubble_groups(1, 0.005).Eo, 10.0, 1e-12));
	CHECK(close(bubble_groups(1, 0.005).Ar, 35.0, 1e-12));
	CHECK(close(bubble_groups(2, 0.005).Eo, 125.0, 1e-12));
}

TEST_CASE("nonpositive inputs are rejected")
{
	const double ok[7] = {1000, 10, 24.5, 0.98, 0.005, 0.5, 1.0};
	for (int k = 0; k < 7; ++k)
		for (double bad : {0.0, -1.0, std::nan("")})
		{
			double a[7];
			std::copy(ok, ok + 7, a);
			a[k] = bad;
			CHECK_THROWS_AS(groups_from_physical(a[0], a[1], a[2], a[3], a[4], a[5], a[6]), std::invalid_argument);
		}
	CHECK_THROWS_AS(capillary_time_scale(0, 1, 1), std::invalid_argument);
	CHECK_THROWS_AS(rising_bubble_coefficients(-1, 0.1), std::invalid_argument);
	CHECK_THROWS_AS(rising_bubble_coefficients(1, 0), std::invalid_argument);
}

TEST_CASE("interface coefficients")
{
	const InterfaceCoefficients c = rising_bubble_coefficients(24.5, 0.64 / 128);
	CHECK(close(c.sigma_tilde, 25.9860, 1e-5));
	CHECK(close(c.sigma_tilde, 3 * 24.5 / (2 * std::sqrt(2.0)), 1e-14));
	CHECK(std::abs(c.gamma - 0.129930) < 1e-6);
	CHECK(close(c.beta, 5197.20, 1e-5));
	CHECK(close(c.beta, c.sigma_tilde / 0.005, 1e-14));
	CHECK(close(c.gamma, c.sigma_tilde * 0.005, 1e-14));

	const InterfaceCoefficients unit = rising_bubble_coefficients(2 * std::sqrt(2.0) / 3, 0.3);
	CHECK(std::abs(unit.sigma_tilde - 1.0) < 1e-15);

	std::mt19937_64 rng(4);
	std::uniform_real_distribution<double> u(0.01, 10.0);
	for (int t = 0; t < 20; ++t)
	{
		const double sigma = u(rng), eps = u(rng) / 100;
		const InterfaceCoefficients a = rising_bubble_coefficients(sigma, eps), b = rising_bubble_coefficients(sigma, 2 * eps);
		CHECK(close(b.gamma, 2 * a.gamma, 1e-14));
		CHECK(close(b.beta, a.beta / 2, 1e-14));
		CHECK(close(b.sigma_tilde, a.sigma_tilde, 1e-15));
	}
}

TEST_CASE("bubble preset in the density-scaled frame")
{
	const double h = 1.0 / 32, eps = 0.64 * h;
	for (int which : {1, 2})
	{
		const BubbleCase bc = bubble_case(which);
		const RunConfig c = rising_bubble_preset(which, h);
		const InterfaceCoefficients k = rising_bubble_coefficients(bc.sigma / bc.rho1, eps);
		CHECK(close(c.params.gamma, k.gamma, 1e-14));
		CHECK(close(c.params.beta, 1.0 / k.beta, 1e-14));
		CHECK(close(c.params.rho1, 1.0, 1e-15));
		CHECK(close(c.params.rho2, bc.rho2 / bc.rho1, 1e-15));
		CHECK(close(c.tau, 0.128 * h, 1e-14));
		CHECK(c.params.mobility.kind == MobilityLaw::Kind::AbsDegenerate);
		CHECK(close(c.params.mobility.coefficient, bc.rho1 * 0.1 * eps * eps, 1e-14));
		CHECK(close(c.params.eta1, bc.eta1 / bc.rho1, 1e-15));
	}
}
