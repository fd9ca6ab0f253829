#pragma once

#include "nsch/physics.hpp"

#include <vector>

namespace nsch
{
	/// Ordering of the monolithic unknown vector:
	/// [phi | mu | free velocity dofs | pressure | mean multiplier].
	class SystemLayout
	{
	public:
		explicit SystemLayout(const Spaces &spaces);

		Index size() const { return size_; }
		Index scalar_count() const { return n_scalar_; }
		Index free_velocity_count() const { return n_vel_free_; }

		Index phi_offset() const { return 0; }
		Index mu_offset() const { return n_scalar_; }
		Index vel_offset() const { return 2 * n_scalar_; }
		Index pressure_offset() const { return 2 * n_scalar_ + n_vel_free_; }
		Index multiplier_index() const { return size_ - 1; }

		/// Position of a velocity dof in the unknown vector, -1 if constrained.
		Index velocity_unknown(Index dof) const { return vel_unknown_[dof]; }

		Eigen::VectorXd pack(const State &state) const;
		/// Writes the unknowns into `state` (constrained velocity dofs set to 0).
		void unpack(const Eigen::VectorXd &x, State &state) const;

	private:
		Index n_scalar_ = 0, n_vel_free_ = 0, size_ = 0;
		std::vector<Index> vel_unknown_;
	};

	struct SparseSystem
	{
		SparseMatrix matrix;
		Eigen::VectorXd rhs;
	};

	class AssemblyError : public std::invalid_argument
	{
	public:
		using std::invalid_argument::invalid_argument;
	};

	/// Residual and Jacobian of one time step of the fully implicit scheme.
	/// The sparsity pattern and the cell-to-matrix scatter map are built once
	/// per instance, so Newton loops should reuse one Assembler.
	class Assembler
	{
	public:
		Assembler(const Spaces &spaces, const MixtureParams &params);

		const Spaces &spaces() const { return spaces_; }
		const SystemLayout &layout() const { return layout_; }
		const MixtureParams &params() const { return params_; }

		Eigen::VectorXd residual(const State &state_old, const State &state_new, double tau) const;

		/// Jacobian with rhs = -residual.
		SparseSystem jacobian(const State &state_old, const State &state_new, double tau) const;

	private:
		void check(const State &state_old, const State &state_new, double tau) const;
		Eigen::Matrix<Index, 21, 1> local_unknowns(Index cell) const;

		const Spaces &spaces_;
		MixtureParams params_;
		SystemLayout layout_;
		SparseMatrix pattern_;
		// per cell, 21x21 positions into pattern_.valuePtr() (column-major local block), -1 if dropped
		std::vector<int> scatter_;
		std::vector<int> multiplier_positions_;
	};

	Eigen::VectorXd residual(const Spaces &spaces, const State &state_old, const State &state_new,
							 const MixtureParams &params, double tau);
	SparseSystem jacobian(const Spaces &spaces, const State &state_old, const State &state_new,
						  const MixtureParams &params, double tau);

	/// c_skw(u, v, w) = (1/2)<(u.grad)v, w> - (1/2)<(u.grad)w, v> for P2 fields.
	double c_skw_form(const VectorSpaceP2 &space, const Eigen::VectorXd &u, const Eigen::VectorXd &v,
					  const Eigen::VectorXd &w);
} // namespace nsch
