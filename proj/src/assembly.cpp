#include "nsch/assembly.hpp"
#include "nsch/detail/cell_kernel.hpp"

#include <unsupported/Eigen/AutoDiff>

#include <algorithm>

namespace nsch
{
	using detail::local_size;

	SystemLayout::SystemLayout(const Spaces &spaces)
		: n_scalar_(spaces.scalar.dof_count())
	{
		const VectorSpaceP2 &vel = spaces.velocity;
		vel_unknown_.assign(vel.dof_count(), -1);
		for (Index d = 0; d < vel.dof_count(); ++d)
			if (!vel.is_constrained(d))
				vel_unknown_[d] = 2 * n_scalar_ + n_vel_free_++;
		size_ = 3 * n_scalar_ + n_vel_free_ + 1;
	}

	Eigen::VectorXd SystemLayout::pack(const State &state) const
	{
		Eigen::VectorXd x(size_);
		x.segment(phi_offset(), n_scalar_) = state.phi;
		x.segment(mu_offset(), n_scalar_) = state.mu;
		for (std::size_t d = 0; d < vel_unknown_.size(); ++d)
			if (vel_unknown_[d] >= 0)
				x[vel_unknown_[d]] = state.vel[Index(d)];
		x.segment(pressure_offset(), n_scalar_) = state.pressure;
		x[multiplier_index()] = state.pressure_multiplier;
		return x;
	}

	void SystemLayout::unpack(const Eigen::VectorXd &x, State &state) const
	{
		state.phi = x.segment(phi_offset(), n_scalar_);
		state.mu = x.segment(mu_offset(), n_scalar_);
		state.vel.setZero(Index(vel_unknown_.size()));
		for (std::size_t d = 0; d < vel_unknown_.size(); ++d)
			if (vel_unknown_[d] >= 0)
				state.vel[Index(d)] = x[vel_unknown_[d]];
		state.pressure = x.segment(pressure_offset(), n_scalar_);
		state.pressure_multiplier = x[multiplier_index()];
	}

	namespace
	{
		using AdScalar = Eigen::AutoDiffScalar<Eigen::Matrix<double, local_size, 1>>;

		detail::CellInput cell_input(const Spaces &spaces, const State &old, Index c)
		{
			detail::CellInput in;
			in.geometry = &spaces.scalar.geometry(c);
			const auto dofs = spaces.scalar.cell_dofs(c);
			for (int k = 0; k < 3; ++k)
				in.phi_old[k] = old.phi[dofs[k]];
			const auto nodes = spaces.velocity.cell_nodes(c);
			for (int k = 0; k < 6; ++k)
				in.vel_old.row(k) = old.vel.segment<2>(2 * nodes[k]).transpose();
			return in;
		}

		detail::LocalVector<double> local_values(const Spaces &spaces, const State &s, Index c)
		{
			detail::LocalVector<double> x;
			const auto dofs = spaces.scalar.cell_dofs(c);
			const auto nodes = spaces.velocity.cell_nodes(c);
			for (int k = 0; k < 3; ++k)
			{
				x[detail::phi_slot + k] = s.phi[dofs[k]];
				x[detail::mu_slot + k] = s.mu[dofs[k]];
				x[detail::p_slot + k] = s.pressure[dofs[k]];
			}
			for (int c2 = 0; c2 < 2; ++c2)
				for (int k = 0; k < 6; ++k)
					x[detail::vel_local(c2, k)] = s.vel[2 * nodes[k] + c2];
			return x;
		}

		int position(const SparseMatrix &m, Index row, Index col)
		{
			const int *begin = m.innerIndexPtr() + m.outerIndexPtr()[col];
			const int *end = m.innerIndexPtr() + m.outerIndexPtr()[col + 1];
			const int *it = std::lower_bound(begin, end, int(row));
			if (it == end || *it != row)
				throw std::logic_error("entry missing from sparsity pattern");
			return int(it - m.innerIndexPtr());
		}
	} // namespace

	Assembler::Assembler(const Spaces &spaces, const MixtureParams &params)
		: spaces_(spaces), params_(params), layout_(spaces)
	{
		params_.validate();
		const Index n = layout_.size();
		const Index ncell = spaces.mesh->num_cells();

		std::vector<Triplet> triplets;
		triplets.reserve(std::size_t(ncell) * local_size * local_size + 2 * std::size_t(layout_.scalar_count()));
		for (Index c = 0; c < ncell; ++c)
		{
			const auto g = local_unknowns(c);
			for (int j = 0; j < local_size; ++j)
				for (int i = 0; i < local_size; ++i)
					if (g[i] >= 0 && g[j] >= 0)
						triplets.emplace_back(int(g[i]), int(g[j]), 0.0);
		}
		const Index mult = layout_.multiplier_index();
		for (Index i = 0; i < layout_.scalar_count(); ++i)
		{
			triplets.emplace_back(int(layout_.pressure_offset() + i), int(mult), 0.0);
			triplets.emplace_back(int(mult), int(layout_.pressure_offset() + i), 0.0);
		}
		pattern_.resize(int(n), int(n));
		pattern_.setFromTriplets(triplets.begin(), triplets.end());
		pattern_.makeCompressed();

		scatter_.assign(std::size_t(ncell) * local_size * local_size, -1);
		for (Index c = 0; c < ncell; ++c)
		{
			const auto g = local_unknowns(c);
			int *block = scatter_.data() + std::size_t(c) * local_size * local_size;
			for (int j = 0; j < local_size; ++j)
				for (int i = 0; i < local_size; ++i)
					if (g[i] >= 0 && g[j] >= 0)
						block[j * local_size + i] = position(pattern_, g[i], g[j]);
		}
		for (Index i = 0; i < layout_.scalar_count(); ++i)
		{
			multiplier_positions_.push_back(position(pattern_, layout_.pressure_offset() + i, mult));
			multiplier_positions_.push_back(position(pattern_, mult, layout_.pressure_offset() + i));
		}
	}

	Eigen::Matrix<Index, 21, 1> Assembler::local_unknowns(Index c) const
	{
		Eigen::Matrix<Index, 21, 1> g;
		const auto dofs = spaces_.scalar.cell_dofs(c);
		const auto nodes = spaces_.velocity.cell_nodes(c);
		for (int k = 0; k < 3; ++k)
		{
			g[detail::phi_slot + k] = layout_.phi_offset() + dofs[k];
			g[detail::mu_slot + k] = layout_.mu_offset() + dofs[k];
			g[detail::p_slot + k] = layout_.pressure_offset() + dofs[k];
		}
		for (int comp = 0; comp < 2; ++comp)
			for (int k = 0; k < 6; ++k)
				g[detail::vel_local(comp, k)] = layout_.velocity_unknown(2 * nodes[k] + comp);
		return g;
	}

	void Assembler::check(const State &state_old, const State &state_new, double tau) const
	{
		if (!state_old.matches(spaces_) || !state_new.matches(spaces_))
			throw AssemblyError("state dimensions do not match the spaces");
		if (!(tau > 0))
			throw AssemblyError("time step must be positive");
	}

	Eigen::VectorXd Assembler::residual(const State &state_old, const State &state_new, double tau) const
	{
		check(state_old, state_new, tau);
		Eigen::VectorXd r = Eigen::VectorXd::Zero(layout_.size());
		for (Index c = 0; c < spaces_.mesh->num_cells(); ++c)
		{
			const detail::CellInput in = cell_input(spaces_, state_old, c);
			const detail::LocalVector<double> x = local_values(spaces_, state_new, c);
			detail::LocalVector<double> rl;
			detail::cell_residual(params_, tau, in, x, rl);
			const auto g = local_unknowns(c);
			for (int i = 0; i < local_size; ++i)
				if (g[i] >= 0)
					r[g[i]] += rl[i];
		}
		const Eigen::VectorXd &b = spaces_.pressure().basis_integrals();
		r.segment(layout_.pressure_offset(), layout_.scalar_count()) += state_new.pressure_multiplier * b;
		r[layout_.multiplier_index()] = b.dot(state_new.pressure);
		return r;
	}

	SparseSystem Assembler::jacobian(const State &state_old, const State &state_new, double tau) const
	{
		check(state_old, state_new, tau);
		SparseSystem sys;
		sys.matrix = pattern_;
		sys.rhs = Eigen::VectorXd::Zero(layout_.size());
		double *values = sys.matrix.valuePtr();

		detail::LocalVector<AdScalar> x, rl;
		for (Index c = 0; c < spaces_.mesh->num_cells(); ++c)
		{
			const detail::CellInput in = cell_input(spaces_, state_old, c);
			const detail::LocalVector<double> xv = local_values(spaces_, state_new, c);
			for (int i = 0; i < local_size; ++i)
				x[i] = AdScalar(xv[i], local_size, i);
			detail::cell_residual(params_, tau, in, x, rl);

			const auto g = local_unknowns(c);
			const int *block = scatter_.data() + std::size_t(c) * local_size * local_size;
			for (int i = 0; i < local_size; ++i)
			{
				if (g[i] < 0)
					continue;
				sys.rhs[g[i]] -= rl[i].value();
				const auto &der = rl[i].derivatives();
				for (int j = 0; j < local_size; ++j)
					if (block[j * local_size + i] >= 0)
						values[block[j * local_size + i]] += der[j];
			}
		}

		const Eigen::VectorXd &b = spaces_.pressure().basis_integrals();
		for (Index i = 0; i < layout_.scalar_count(); ++i)
		{
			values[multiplier_positions_[2 * i]] = b[i];
			values[multiplier_positions_[2 * i + 1]] = b[i];
		}
		sys.rhs.segment(layout_.pressure_offset(), layout_.scalar_count()) -= state_new.pressure_multiplier * b;
		sys.rhs[layout_.multiplier_index()] = -b.dot(state_new.pressure);
		return sys;
	}

	Eigen::VectorXd residual(const Spaces &spaces, const State &state_old, const State &state_new,
							 const MixtureParams &params, double tau)
	{
		return Assembler(spaces, params).residual(state_old, state_new, tau);
	}

	SparseSystem jacobian(const Spaces &spaces, const State &state_old, const State &state_new,
						  const MixtureParams &params, double tau)
	{
		return Assembler(spaces, params).jacobian(state_old, state_new, tau);
	}

	double c_skw_form(const VectorSpaceP2 &space, const Eigen::VectorXd &u, const Eigen::VectorXd &v,
					  const Eigen::VectorXd &w)
	{
		if (u.size() != space.dof_count() || v.size() != space.dof_count() || w.size() != space.dof_count())
			throw AssemblyError("field dimensions do not match the space");
		const detail::ReferenceTables &ref = detail::reference_tables();
		double total = 0.0;
		for (Index c = 0; c < space.mesh().num_cells(); ++c)
		{
			const CellGeometry &geo = space.geometry(c);
			const auto nodes = space.cell_nodes(c);
			Eigen::Matrix<double, 6, 2> lu, lv, lw;
			for (int k = 0; k < 6; ++k)
			{
				lu.row(k) = u.segment<2>(2 * nodes[k]).transpose();
				lv.row(k) = v.segment<2>(2 * nodes[k]).transpose();
				lw.row(k) = w.segment<2>(2 * nodes[k]).transpose();
			}
			for (int q = 0; q < detail::ReferenceTables::nq; ++q)
			{
				const double weight = 2.0 * geo.area * ref.weights[q];
				const Eigen::Matrix<double, 6, 2> dn = geo.push_forward(ref.dp2[q]);
				const Vector2d uq = lu.transpose() * ref.p2[q];
				const Vector2d vq = lv.transpose() * ref.p2[q];
				const Vector2d wq = lw.transpose() * ref.p2[q];
				const Matrix2d dvq = lv.transpose() * dn, dwq = lw.transpose() * dn;
				total += weight * 0.5 * ((dvq * uq).dot(wq) - (dwq * uq).dot(vq));
			}
		}
		return total;
	}
} // namespace nsch
