#include "nsch/physics.hpp"

namespace nsch
{
	void MixtureParams::validate() const
	{
		if (!(rho1 > 0 && rho2 > 0))
			throw std::invalid_argument("densities must be positive");
		if (!(eta1 > 0 && eta2 > 0))
			throw std::invalid_argument("viscosities must be positive");
		if (!(gamma > 0 && beta > 0))
			throw std::invalid_argument("gamma and beta must be positive");
		if (!(g >= 0))
			throw std::invalid_argument("gravity must be nonnegative");
		if (mobility.coefficient < 0)
			throw std::invalid_argument("mobility coefficient must be nonnegative");
		if (dimension != 2)
			throw std::invalid_argument("only d = 2 is implemented");
	}

	namespace
	{
		Eigen::Vector3d local_p1(const ScalarSpaceP1 &space, const Eigen::VectorXd &coeffs, Index c)
		{
			const auto d = space.cell_dofs(c);
			return {coeffs[d[0]], coeffs[d[1]], coeffs[d[2]]};
		}

		Eigen::Matrix<double, 6, 2> local_p2(const VectorSpaceP2 &space, const Eigen::VectorXd &coeffs, Index c)
		{
			const auto nodes = space.cell_nodes(c);
			Eigen::Matrix<double, 6, 2> u;
			for (int k = 0; k < 6; ++k)
				u.row(k) = coeffs.segment<2>(2 * nodes[k]).transpose();
			return u;
		}
	} // namespace

	EnergyBreakdown discrete_energy(const Spaces &spaces, const State &state, const MixtureParams &params)
	{
		const QuadratureRule &rule = default_rule();
		const Mesh &mesh = *spaces.mesh;
		EnergyBreakdown e;
		for (Index c = 0; c < mesh.num_cells(); ++c)
		{
			const CellGeometry &geo = spaces.scalar.geometry(c);
			const Eigen::Vector3d phi = local_p1(spaces.scalar, state.phi, c);
			const Eigen::Matrix<double, 6, 2> v = local_p2(spaces.velocity, state.vel, c);
			const Vector2d dphi = geo.push_forward(p1_gradients()).transpose() * phi;
			for (Eigen::Index q = 0; q < rule.size(); ++q)
			{
				const Vector2d xi = rule.reference_point(q);
				const double w = 2.0 * geo.area * rule.weights[q];
				const double phi_q = p1_values<double>(xi).dot(phi);
				const Vector2d v_q = v.transpose() * p2_values<double>(xi);
				const double y = geo.map(xi).y() - mesh.domain.y0;
				e.free_energy += w * (0.5 * params.gamma * dphi.squaredNorm() + potential_value(params.beta, phi_q));
				e.kinetic += w * 0.5 * density_clipped(params, phi_q) * v_q.squaredNorm();
				e.gravity += w * params.g * density(params, phi_q) * y;
			}
		}
		e.total = e.free_energy + e.kinetic + e.gravity;
		return e;
	}

	DissipationParts dissipation_parts(const Spaces &spaces, const State &state_new, const Eigen::VectorXd &phi_star,
									   const MixtureParams &params)
	{
		const QuadratureRule &rule = default_rule();
		const double alpha = params.alpha(), lambda = params.lambda();
		DissipationParts d;
		for (Index c = 0; c < spaces.mesh->num_cells(); ++c)
		{
			const CellGeometry &geo = spaces.scalar.geometry(c);
			const Eigen::Vector3d phi = local_p1(spaces.scalar, phi_star, c);
			const Eigen::Vector3d chem = local_p1(spaces.scalar, state_new.mu, c)
										 + alpha * local_p1(spaces.scalar, state_new.pressure, c);
			const Eigen::Matrix<double, 6, 2> v = local_p2(spaces.velocity, state_new.vel, c);
			const Vector2d dchem = geo.push_forward(p1_gradients()).transpose() * chem;
			for (Eigen::Index q = 0; q < rule.size(); ++q)
			{
				const Vector2d xi = rule.reference_point(q);
				const double w = 2.0 * geo.area * rule.weights[q];
				const double phi_q = p1_values<double>(xi).dot(phi);
				const Matrix2d dv = v.transpose() * geo.push_forward(p2_gradients<double>(xi));
				const Matrix2d sym = 0.5 * (dv + dv.transpose());
				const double div = dv.trace();
				d.diffusive += w * mobility(params.mobility, phi_q) * dchem.squaredNorm();
				d.viscous += w * viscosity_clipped(params, phi_q) * (2.0 * sym.squaredNorm() + lambda * div * div);
			}
		}
		return d;
	}

	double dissipation_rate(const Spaces &spaces, const State &state_new, const Eigen::VectorXd &phi_star,
							const MixtureParams &params)
	{
		const DissipationParts d = dissipation_parts(spaces, state_new, phi_star, params);
		return d.diffusive + d.viscous;
	}

	double numerical_dissipation(const Spaces &spaces, const State &state_old, const State &state_new,
								 const MixtureParams &params)
	{
		const QuadratureRule &rule = default_rule();
		double total = 0.0;
		for (Index c = 0; c < spaces.mesh->num_cells(); ++c)
		{
			const CellGeometry &geo = spaces.scalar.geometry(c);
			const Eigen::Vector3d phi_old = local_p1(spaces.scalar, state_old.phi, c);
			const Eigen::Vector3d dphi = local_p1(spaces.scalar, state_new.phi, c) - phi_old;
			const Eigen::Matrix<double, 6, 2> dv =
				local_p2(spaces.velocity, state_new.vel, c) - local_p2(spaces.velocity, state_old.vel, c);
			const Vector2d grad = geo.push_forward(p1_gradients()).transpose() * dphi;
			for (Eigen::Index q = 0; q < rule.size(); ++q)
			{
				const Vector2d xi = rule.reference_point(q);
				const double w = 2.0 * geo.area * rule.weights[q];
				const double rho = density_clipped(params, p1_values<double>(xi).dot(phi_old));
				const Vector2d dv_q = dv.transpose() * p2_values<double>(xi);
				total += w * (0.5 * rho * dv_q.squaredNorm() + 0.5 * params.gamma * grad.squaredNorm());
			}
		}
		return total;
	}
} // namespace nsch
