#pragma once

#include "nsch/state.hpp"

#include <stdexcept>

namespace nsch
{
	struct MobilityLaw
	{
		enum class Kind
		{
			Constant,          // m
			DegenerateQuartic, // m0 (1 - phi^2)^2
			AbsDegenerate      // m_bar |1 - phi^2|
		};
		Kind kind = Kind::Constant;
		double coefficient = 0.0;

		static MobilityLaw constant(double m) { return {Kind::Constant, m}; }
		static MobilityLaw degenerate_quartic(double m0) { return {Kind::DegenerateQuartic, m0}; }
		static MobilityLaw abs_degenerate(double m_bar) { return {Kind::AbsDegenerate, m_bar}; }
	};

	/// Constants of the two-phase mixture. phi = 1 is fluid 1, phi = -1 fluid 2.
	/// The free energy is (gamma/2)|grad phi|^2 + (1/(4 beta))(1 - phi^2)^2.
	struct MixtureParams
	{
		double rho1 = 1.0, rho2 = 1.0;
		double eta1 = 1.0, eta2 = 1.0;
		double gamma = 1.0;
		double beta = 1.0;
		double g = 0.0;
		int dimension = 2;
		MobilityLaw mobility;

		double lambda() const { return -2.0 / dimension; }
		double rho_mean() const { return 0.5 * (rho1 + rho2); }
		double rho_jump() const { return 0.5 * (rho1 - rho2); }
		double alpha() const { return (rho2 - rho1) / (rho1 + rho2); }

		/// Throws std::invalid_argument on nonpositive constants.
		void validate() const;
	};

	template <typename Scalar>
	Scalar density(const MixtureParams &p, const Scalar &phi)
	{
		return p.rho1 * (1.0 + phi) / 2.0 + p.rho2 * (1.0 - phi) / 2.0;
	}

	template <typename Scalar>
	Scalar viscosity(const MixtureParams &p, const Scalar &phi)
	{
		return p.eta1 * (1.0 + phi) / 2.0 + p.eta2 * (1.0 - phi) / 2.0;
	}

	/// Affine law evaluated at phi clamped to [-1, 1]; the derivative at the
	/// kinks is the interior one.
	template <typename Scalar>
	Scalar density_clipped(const MixtureParams &p, const Scalar &phi)
	{
		if (phi > 1.0)
			return Scalar(p.rho1);
		if (phi < -1.0)
			return Scalar(p.rho2);
		return density(p, phi);
	}

	template <typename Scalar>
	Scalar viscosity_clipped(const MixtureParams &p, const Scalar &phi)
	{
		if (phi > 1.0)
			return Scalar(p.eta1);
		if (phi < -1.0)
			return Scalar(p.eta2);
		return viscosity(p, phi);
	}

	template <typename Scalar>
	Scalar potential_value(double beta, const Scalar &phi)
	{
		const Scalar s = 1.0 - phi * phi;
		return s * s / (4.0 * beta);
	}

	template <typename Scalar>
	Scalar potential_deriv(double beta, const Scalar &phi)
	{
		return (phi * phi * phi - phi) / beta;
	}

	template <typename Scalar>
	Scalar potential_second_deriv(double beta, const Scalar &phi)
	{
		return (3.0 * phi * phi - 1) / beta;
	}

	/// Mean of f' along the straight path from phi_old to phi_new. For the
	/// quartic this is the factored secant (f(a) - f(b)) / (a - b), which has
	/// no cancellation and reduces to f'(a) when a == b.
	template <typename Scalar>
	Scalar potential_time_avg(double beta, const Scalar &phi_new, const Scalar &phi_old)
	{
		return (phi_new + phi_old) * (phi_new * phi_new + phi_old * phi_old - 2.0) / (4.0 * beta);
	}

	/// d/d(phi_new) of potential_time_avg.
	template <typename Scalar>
	Scalar potential_time_avg_deriv(double beta, const Scalar &phi_new, const Scalar &phi_old)
	{
		return (3.0 * phi_new * phi_new + 2.0 * phi_new * phi_old + phi_old * phi_old - 2.0) / (4.0 * beta);
	}

	template <typename Scalar>
	Scalar mobility(const MobilityLaw &law, const Scalar &phi)
	{
		switch (law.kind)
		{
		case MobilityLaw::Kind::Constant:
			return Scalar(law.coefficient);
		case MobilityLaw::Kind::DegenerateQuartic:
		{
			const Scalar s = 1.0 - phi * phi;
			return law.coefficient * s * s;
		}
		case MobilityLaw::Kind::AbsDegenerate:
		{
			const Scalar s = 1.0 - phi * phi;
			if (s < 0.0)
				return -law.coefficient * s;
			return law.coefficient * s;
		}
		}
		throw std::logic_error("unknown mobility law");
	}

	struct EnergyBreakdown
	{
		double free_energy = 0.0; // int (gamma/2)|grad phi|^2 + f(phi)
		double kinetic = 0.0;     // int (rho_clipped/2)|v|^2
		double gravity = 0.0;     // int g rho(phi) y
		double total = 0.0;
	};

	/// Quadrature evaluation of the discrete energy; y is measured from the
	/// bottom of the domain.
	EnergyBreakdown discrete_energy(const Spaces &spaces, const State &state, const MixtureParams &params);

	/// int grad(mu + alpha p) . M(phi*) grad(mu + alpha p) + S(phi*, grad v) : grad v,
	/// with mu, p, v taken from `state_new`.
	double dissipation_rate(const Spaces &spaces, const State &state_new, const Eigen::VectorXd &phi_star,
							const MixtureParams &params);

	/// The two parts of dissipation_rate.
	struct DissipationParts
	{
		double diffusive = 0.0;
		double viscous = 0.0;
	};
	DissipationParts dissipation_parts(const Spaces &spaces, const State &state_new, const Eigen::VectorXd &phi_star,
									   const MixtureParams &params);

	/// Algebraic dissipation of the time discretisation,
	/// int (rho_clipped(phi_old)/2)|v_new - v_old|^2 + (gamma/2)|grad(phi_new - phi_old)|^2.
	double numerical_dissipation(const Spaces &spaces, const State &state_old, const State &state_new,
								 const MixtureParams &params);
} // namespace nsch
