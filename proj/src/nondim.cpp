#include "nsch/nondim.hpp"

#include <cmath>

namespace nsch
{
	DimensionlessGroups groups_from_physical(double rho1, double eta1, double sigma, double g, double eps, double X0,
											 double V0)
	{
		if (!(rho1 > 0 && eta1 > 0 && sigma > 0 && g > 0 && eps > 0 && X0 > 0 && V0 > 0))
			throw std::invalid_argument("dimensionless groups need positive inputs");
		DimensionlessGroups d;
		d.X0 = X0;
		d.V0 = V0;
		d.T0 = X0 / V0;
		d.Re = rho1 * V0 * X0 / eta1;
		d.We = rho1 * V0 * V0 * X0 / sigma;
		d.Fr = V0 / std::sqrt(g * X0);
		d.Cn = eps / X0;
		d.Eo = rho1 * g * X0 * X0 / sigma;
		d.Ar = rho1 * std::sqrt(g * X0 * X0 * X0) / eta1;
		return d;
	}

	double capillary_time_scale(double rho1, double sigma, double D0)
	{
		if (!(rho1 > 0 && sigma > 0 && D0 > 0))
			throw std::invalid_argument("capillary time scale needs positive inputs");
		return std::sqrt(rho1 * D0 * D0 * D0 / sigma);
	}

	PhysicalParameters physical_from_groups(const DimensionlessGroups &d, double rho1)
	{
		PhysicalParameters p;
		p.rho1 = rho1;
		p.eta1 = rho1 * d.V0 * d.X0 / d.Re;
		p.sigma = rho1 * d.V0 * d.V0 * d.X0 / d.We;
		p.g = d.V0 * d.V0 / (d.Fr * d.Fr * d.X0);
		p.eps = d.Cn * d.X0;
		return p;
	}

	RelationReport check_relations(const DimensionlessGroups &d, double tolerance)
	{
		RelationReport r;
		const double s = 1.0 / std::sqrt(d.Eo);
		r.re_residual = std::abs(d.Re - s * d.Ar) / d.Re;
		r.fr_residual = std::abs(d.Fr - s) / d.Fr;
		r.we_residual = std::abs(d.We - 1.0);
		r.ok = r.re_residual <= tolerance && r.fr_residual <= tolerance && r.we_residual <= tolerance;
		return r;
	}

	InterfaceCoefficients rising_bubble_coefficients(double sigma, double eps)
	{
		if (!(sigma > 0 && eps > 0))
			throw std::invalid_argument("sigma and eps must be positive");
		InterfaceCoefficients c;
		c.sigma_tilde = 3.0 * sigma / (2.0 * std::sqrt(2.0));
		c.gamma = c.sigma_tilde * eps;
		c.beta = c.sigma_tilde / eps;
		return c;
	}
} // namespace nsch
