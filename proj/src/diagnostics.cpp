#include "nsch/diagnostics.hpp"

#include <cmath>

namespace nsch
{
	namespace
	{
		void fill_common(DiagnosticsRecord &r, const Spaces &spaces, const MixtureParams &params, const State &s)
		{
			r.t = s.time;
			r.energy = discrete_energy(spaces, s, params);
			r.mass_phi = integral(spaces.scalar, s.phi);
			// <rho(phi), 1> from <phi, 1>
			r.mass_rho = params.rho_mean() * spaces.mesh->domain.area() + params.rho_jump() * r.mass_phi;
			try
			{
				const BubbleMetrics b = bubble_metrics(spaces, s);
				r.y_b = b.y_b;
				r.v_b = b.v_b;
				r.bubble_area = b.area;
			}
			catch (const EmptyBubble &)
			{
				r.y_b = r.v_b = r.bubble_area = 0.0;
			}
		}
	} // namespace

	DiagnosticsRecord make_record(const Spaces &spaces, const MixtureParams &params, const State &state)
	{
		DiagnosticsRecord r;
		fill_common(r, spaces, params, state);
		return r;
	}

	DiagnosticsRecord make_record(const Spaces &spaces, const MixtureParams &params, const StepEvent &step)
	{
		DiagnosticsRecord r;
		fill_common(r, spaces, params, step.new_state);
		r.tau = step.tau;
		r.dissipation = dissipation_rate(spaces, step.new_state, step.new_state.phi, params);
		r.numerical_dissipation = numerical_dissipation(spaces, step.old_state, step.new_state, params);
		r.newton_iters = step.stats.iterations;
		r.residual_norm = step.stats.residual_norm;
		return r;
	}

	namespace
	{
		struct Accumulator
		{
			double area = 0.0, y = 0.0, v = 0.0;
		};

		// integrates 1, y and v_2 over the physical triangle (a, b, c) lying in `cell`
		void integrate_piece(const Spaces &spaces, const State &state, Index cell, const Vector2d &a, const Vector2d &b,
							 const Vector2d &c, double y0, Accumulator &acc)
		{
			const CellGeometry piece(a, b, c);
			if (piece.area == 0.0)
				return;
			const CellGeometry &geo = spaces.velocity.geometry(cell);
			const QuadratureRule &rule = default_rule();
			for (Eigen::Index q = 0; q < rule.size(); ++q)
			{
				const double w = 2.0 * piece.area * rule.weights[q];
				const Vector2d x = piece.map(rule.reference_point(q));
				const Vector2d v = evaluate(spaces.velocity, state.vel, cell, geo.pull_back(x));
				acc.area += w;
				acc.y += w * (x.y() - y0);
				acc.v += w * v.y();
			}
		}
	} // namespace

	BubbleMetrics bubble_metrics(const Spaces &spaces, const State &state)
	{
		const Mesh &mesh = *spaces.mesh;
		const double y0 = mesh.domain.y0;
		Accumulator acc;
		for (Index c = 0; c < mesh.num_cells(); ++c)
		{
			const auto dofs = spaces.scalar.cell_dofs(c);
			const CellGeometry &geo = spaces.scalar.geometry(c);
			std::array<Vector2d, 3> x;
			std::array<double, 3> phi;
			for (int k = 0; k < 3; ++k)
			{
				// the cell's own vertex coordinates (periodic copies differ from dof points)
				x[k] = geo.map(p2_reference_nodes().row(k).transpose());
				phi[k] = state.phi[dofs[k]];
			}
			// clip the triangle against the half plane phi < 0
			std::array<Vector2d, 4> poly;
			int count = 0;
			for (int k = 0; k < 3; ++k)
			{
				const int next = (k + 1) % 3;
				const bool in_k = phi[k] < 0, in_next = phi[next] < 0;
				if (in_k)
					poly[count++] = x[k];
				if (in_k != in_next)
				{
					const double t = phi[k] / (phi[k] - phi[next]);
					poly[count++] = x[k] + t * (x[next] - x[k]);
				}
			}
			for (int k = 1; k + 1 < count; ++k)
				integrate_piece(spaces, state, c, poly[0], poly[k], poly[k + 1], y0, acc);
		}
		if (acc.area < 1e-12)
			throw EmptyBubble("the region {phi < 0} is empty");
		return {acc.y / acc.area, acc.v / acc.area, acc.area};
	}

	std::vector<double> mass_error_series(const std::vector<DiagnosticsRecord> &records)
	{
		std::vector<double> drift;
		drift.reserve(records.size());
		for (const DiagnosticsRecord &r : records)
			drift.push_back(r.mass_phi - records.front().mass_phi);
		return drift;
	}

	EocTable EocTable::from_errors(std::string variable, std::string norm, const std::vector<double> &resolutions,
								   const std::vector<double> &errors)
	{
		if (resolutions.size() != errors.size())
			throw std::invalid_argument("one resolution per error value is required");
		EocTable table{std::move(variable), std::move(norm), {}};
		for (std::size_t k = 0; k < errors.size(); ++k)
		{
			EocLevel level{resolutions[k], errors[k], std::nullopt};
			if (k > 0 && errors[k - 1] > 0 && errors[k] > 0)
				level.eoc = std::log2(errors[k - 1] / errors[k]);
			table.levels.push_back(level);
		}
		return table;
	}

	namespace
	{
		Eigen::VectorXd chem(const State &s, const MixtureParams &params)
		{
			return s.mu + params.alpha() * s.pressure;
		}

		double h1_squared(const ScalarSpaceP1 &space, const Eigen::VectorXd &u)
		{
			const double h1 = norms(space, u).h1;
			return h1 * h1;
		}
	} // namespace

	PairErrors spatial_pair_errors(const Trajectory &coarse, const Trajectory &fine, const MixtureParams &params)
	{
		if (coarse.states.size() != fine.states.size() || coarse.tau != fine.tau)
			throw std::invalid_argument("spatial study needs identical time grids");
		const Mesh &cm = *coarse.spaces->mesh, &fm = *fine.spaces->mesh;
		if (fm.num_cells() != 4 * cm.num_cells() || fm.parent_cell.size() != std::size_t(fm.num_cells()))
			throw std::invalid_argument("resolutions are not nested");
		const Spaces &cs = *coarse.spaces, &fs = *fine.spaces;

		PairErrors e;
		for (std::size_t n = 1; n < coarse.states.size(); ++n)
		{
			const State &a = coarse.states[n], &b = fine.states[n];
			const double phi = h1_squared(fs.scalar, prolongate(cs.scalar, a.phi, fs.scalar) - b.phi);
			const FieldNorms dv = norms(fs.velocity, prolongate(cs.velocity, a.vel, fs.velocity) - b.vel);
			const double ch = h1_squared(fs.scalar, prolongate(cs.scalar, chem(a, params), fs.scalar) - chem(b, params));
			e.phi = std::max(e.phi, phi);
			e.vel = std::max(e.vel, dv.l2 * dv.l2);
			e.chem += coarse.tau * ch;
			e.grad_vel += coarse.tau * dv.h1 * dv.h1;
		}
		return e;
	}

	PairErrors temporal_pair_errors(const Trajectory &coarse, const Trajectory &fine, const MixtureParams &params)
	{
		if (coarse.spaces->scalar.dof_count() != fine.spaces->scalar.dof_count()
			|| coarse.spaces->velocity.dof_count() != fine.spaces->velocity.dof_count())
			throw std::invalid_argument("temporal study needs identical spaces");
		if (fine.states.size() != 2 * coarse.states.size() - 1 || std::abs(fine.tau - 0.5 * coarse.tau) > 1e-15 * coarse.tau)
			throw std::invalid_argument("time steps are not nested (fine run must use tau/2)");
		const Spaces &s = *coarse.spaces;

		PairErrors e;
		for (std::size_t n = 1; n < coarse.states.size(); ++n)
		{
			const State &a = coarse.states[n];
			const State &b = fine.states[2 * n], &b_half = fine.states[2 * n - 1];
			const double phi = h1_squared(s.scalar, a.phi - b.phi);
			const double vel = norms(s.velocity, a.vel - b.vel).l2;
			const Eigen::VectorXd chem_bar = 0.5 * (chem(b, params) + chem(b_half, params));
			const Eigen::VectorXd vel_bar = 0.5 * (b.vel + b_half.vel);
			const double grad = norms(s.velocity, a.vel - vel_bar).h1;
			e.phi = std::max(e.phi, phi);
			e.vel = std::max(e.vel, vel * vel);
			e.chem += coarse.tau * h1_squared(s.scalar, chem(a, params) - chem_bar);
			e.grad_vel += coarse.tau * grad * grad;
		}
		return e;
	}

	std::vector<EocTable> pairwise_errors(const std::vector<Trajectory> &levels, StudyKind kind,
										  const MixtureParams &params)
	{
		std::vector<double> res, phi, vel, ch, grad;
		for (std::size_t k = 0; k + 1 < levels.size(); ++k)
		{
			const PairErrors e = kind == StudyKind::Space ? spatial_pair_errors(levels[k], levels[k + 1], params)
														  : temporal_pair_errors(levels[k], levels[k + 1], params);
			res.push_back(levels[k].resolution);
			phi.push_back(e.phi);
			vel.push_back(e.vel);
			ch.push_back(e.chem);
			grad.push_back(e.grad_vel);
		}
		return {EocTable::from_errors("phi", "max H1^2", res, phi), EocTable::from_errors("v", "max L2^2", res, vel),
				EocTable::from_errors("mu+alpha*p", "sum H1^2", res, ch),
				EocTable::from_errors("grad v", "sum H1^2", res, grad)};
	}
} // namespace nsch
