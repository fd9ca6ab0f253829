#pragma once

#include <stdexcept>

namespace nsch
{
	/// Reference scales and dimensionless groups of a two-phase flow.
	/// D0 is taken equal to X0.
	struct DimensionlessGroups
	{
		double Re = 0.0; // rho1 V0 X0 / eta1
		double We = 0.0; // rho1 V0^2 X0 / sigma
		double Fr = 0.0; // V0 / sqrt(g X0)
		double Cn = 0.0; // eps / X0
		double Eo = 0.0; // rho1 g D0^2 / sigma
		double Ar = 0.0; // rho1 sqrt(g D0^3) / eta1
		double X0 = 0.0, T0 = 0.0, V0 = 0.0;
	};

	/// Throws std::invalid_argument unless every input is positive.
	DimensionlessGroups groups_from_physical(double rho1, double eta1, double sigma, double g, double eps, double X0,
											 double V0);

	/// sqrt(rho1 D0^3 / sigma), the time scale that makes We = 1.
	double capillary_time_scale(double rho1, double sigma, double D0);

	struct PhysicalParameters
	{
		double rho1 = 0.0, eta1 = 0.0, sigma = 0.0, g = 0.0, eps = 0.0;
	};

	/// Inverse of groups_from_physical at the scales stored in `groups`.
	PhysicalParameters physical_from_groups(const DimensionlessGroups &groups, double rho1);

	struct RelationReport
	{
		double re_residual = 0.0; // |Re - Eo^{-1/2} Ar| / Re
		double fr_residual = 0.0; // |Fr - Eo^{-1/2}| / Fr
		double we_residual = 0.0; // |We - 1|
		bool ok = false;          // all residuals <= tolerance
	};

	RelationReport check_relations(const DimensionlessGroups &groups, double tolerance = 1e-10);

	struct InterfaceCoefficients
	{
		double gamma = 0.0;
		double beta = 0.0;
		double sigma_tilde = 0.0;
	};

	/// sigma_tilde = 3 sigma / (2 sqrt 2), gamma = sigma_tilde eps, beta = sigma_tilde / eps.
	/// The free energy sigma_tilde/(4 eps) (1 - phi^2)^2 + (sigma_tilde eps / 2)|grad phi|^2
	/// corresponds to MixtureParams::beta = 1 / beta.
	InterfaceCoefficients rising_bubble_coefficients(double sigma, double eps);
} // namespace nsch
