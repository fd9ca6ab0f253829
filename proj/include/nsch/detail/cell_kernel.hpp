#pragma once

#include "nsch/physics.hpp"

#include <array>

namespace nsch::detail
{
	// Local unknowns of one cell: phi 0..2, mu 3..5, velocity 6..17
	// (component-major: 6 + 6*c + node), pressure 18..20.
	constexpr int local_size = 21;
	constexpr int phi_slot = 0;
	constexpr int mu_slot = 3;
	constexpr int vel_slot = 6;
	constexpr int p_slot = 18;

	template <typename Scalar>
	using LocalVector = Eigen::Matrix<Scalar, local_size, 1>;

	constexpr int vel_local(int comp, int node) { return vel_slot + 6 * comp + node; }

	/// Basis values and reference gradients at the points of the default rule.
	struct ReferenceTables
	{
		static constexpr int nq = 6;
		std::array<double, nq> weights;
		std::array<Eigen::Vector3d, nq> p1;
		std::array<Eigen::Matrix<double, 6, 1>, nq> p2;
		std::array<Eigen::Matrix<double, 6, 2>, nq> dp2;
	};

	inline const ReferenceTables &reference_tables()
	{
		static const ReferenceTables tables = [] {
			const QuadratureRule &rule = default_rule();
			ReferenceTables t;
			for (int q = 0; q < ReferenceTables::nq; ++q)
			{
				const Vector2d xi = rule.reference_point(q);
				t.weights[q] = rule.weights[q];
				t.p1[q] = p1_values<double>(xi);
				t.p2[q] = p2_values<double>(xi);
				t.dp2[q] = p2_gradients<double>(xi);
			}
			return t;
		}();
		return tables;
	}

	struct CellInput
	{
		const CellGeometry *geometry = nullptr;
		Eigen::Vector3d phi_old;
		Eigen::Matrix<double, 6, 2> vel_old; // row = node
	};

	/// Element residual of the scheme for one cell, all starred quantities
	/// at the new level. Scalar is double or a forward-mode AD type.
	template <typename Scalar>
	void cell_residual(const MixtureParams &params, double tau, const CellInput &in, const LocalVector<Scalar> &x,
					   LocalVector<Scalar> &r)
	{
		const ReferenceTables &ref = reference_tables();
		const CellGeometry &geo = *in.geometry;
		const Matrix2d jinv = geo.inverse_transpose.transpose();
		const Eigen::Matrix<double, 3, 2> dp1 = p1_gradients() * jinv;
		const double alpha = params.alpha(), lambda = params.lambda(), gamma = params.gamma;

		for (int i = 0; i < local_size; ++i)
			r[i] = Scalar(0.0);

		// P1 gradients are constant on the cell
		Vector2<Scalar> dphi, dmu, dchem;
		for (int d = 0; d < 2; ++d)
		{
			dphi[d] = dp1(0, d) * x[phi_slot] + dp1(1, d) * x[phi_slot + 1] + dp1(2, d) * x[phi_slot + 2];
			dmu[d] = dp1(0, d) * x[mu_slot] + dp1(1, d) * x[mu_slot + 1] + dp1(2, d) * x[mu_slot + 2];
			const Scalar dp = dp1(0, d) * x[p_slot] + dp1(1, d) * x[p_slot + 1] + dp1(2, d) * x[p_slot + 2];
			dchem[d] = dmu[d] + alpha * dp;
		}

		for (int q = 0; q < ReferenceTables::nq; ++q)
		{
			const double w = 2.0 * geo.area * ref.weights[q];
			const Eigen::Vector3d &n1 = ref.p1[q];
			const Eigen::Matrix<double, 6, 1> &n2 = ref.p2[q];
			const Eigen::Matrix<double, 6, 2> dn2 = ref.dp2[q] * jinv;

			const Scalar phi = n1[0] * x[phi_slot] + n1[1] * x[phi_slot + 1] + n1[2] * x[phi_slot + 2];
			const Scalar mu = n1[0] * x[mu_slot] + n1[1] * x[mu_slot + 1] + n1[2] * x[mu_slot + 2];
			const Scalar p = n1[0] * x[p_slot] + n1[1] * x[p_slot + 1] + n1[2] * x[p_slot + 2];
			const double phi_old = n1.dot(in.phi_old);
			const Vector2d v_old = in.vel_old.transpose() * n2;

			Vector2<Scalar> v;
			Matrix2<Scalar> dv; // dv(c, d) = d_d v_c
			for (int c = 0; c < 2; ++c)
			{
				v[c] = Scalar(0.0);
				dv(c, 0) = Scalar(0.0);
				dv(c, 1) = Scalar(0.0);
				for (int k = 0; k < 6; ++k)
				{
					const Scalar &vk = x[vel_local(c, k)];
					v[c] += n2[k] * vk;
					dv(c, 0) += dn2(k, 0) * vk;
					dv(c, 1) += dn2(k, 1) * vk;
				}
			}
			const Scalar div = dv(0, 0) + dv(1, 1);

			const Scalar rho = density(params, phi);
			const Scalar rho_clip = density_clipped(params, phi);
			const double rho_clip_old = density_clipped(params, phi_old);
			const Scalar eta = viscosity_clipped(params, phi);
			const Scalar m = mobility(params.mobility, phi);
			const Scalar fav = potential_time_avg(params.beta, phi, Scalar(phi_old));

			// phi and pressure rows share the diffusive flux
			const Vector2<Scalar> flux(m * dchem[0], m * dchem[1]);
			const Scalar dphi_dt = (phi - phi_old) / tau;
			const Scalar fu = mu - fav;
			for (int i = 0; i < 3; ++i)
			{
				const Scalar adv = phi * (dp1(i, 0) * v[0] + dp1(i, 1) * v[1]);
				const Scalar diff = dp1(i, 0) * flux[0] + dp1(i, 1) * flux[1];
				r[phi_slot + i] += w * (n1[i] * dphi_dt - adv + diff);
				r[mu_slot + i] += w * (n1[i] * fu - gamma * (dp1(i, 0) * dphi[0] + dp1(i, 1) * dphi[1]));
				r[p_slot + i] += w * (n1[i] * div + alpha * diff);
			}

			// momentum: sum_c F_c w_c + G_cd d_d w_c
			const Scalar drho_half = (rho_clip - rho_clip_old) / (2.0 * tau);
			const Vector2<Scalar> u(rho * v[0], rho * v[1]);
			const Scalar lam_div = lambda * div;
			Vector2<Scalar> F;
			Matrix2<Scalar> G;
			for (int c = 0; c < 2; ++c)
			{
				const Scalar conv = u[0] * dv(c, 0) + u[1] * dv(c, 1);
				F[c] = drho_half * v[c] + rho_clip_old * (v[c] - v_old[c]) / tau + 0.5 * conv + phi * dmu[c];
				for (int d = 0; d < 2; ++d)
					G(c, d) = -0.5 * u[d] * v[c] + eta * (dv(c, d) + dv(d, c));
				G(c, c) += eta * lam_div - p;
			}
			F[1] += params.g * rho;

			for (int c = 0; c < 2; ++c)
				for (int k = 0; k < 6; ++k)
					r[vel_local(c, k)] += w * (n2[k] * F[c] + dn2(k, 0) * G(c, 0) + dn2(k, 1) * G(c, 1));
		}
	}
} // namespace nsch::detail
