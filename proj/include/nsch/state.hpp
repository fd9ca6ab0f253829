#pragma once

#include "nsch/fe_spaces.hpp"

namespace nsch
{
	/// Coefficient vectors of one time level.
	///
	/// phi, mu and pressure live on the P1 space, vel on the P2 vector space
	/// (constrained dofs hold zero). `pressure_multiplier` is the Lagrange
	/// multiplier of the zero-mean pressure condition.
	struct State
	{
		Eigen::VectorXd phi;
		Eigen::VectorXd mu;
		Eigen::VectorXd vel;
		Eigen::VectorXd pressure;
		double pressure_multiplier = 0.0;
		double time = 0.0;
		Index step_index = 0;

		static State zeros(const Spaces &spaces)
		{
			State s;
			s.phi = Eigen::VectorXd::Zero(spaces.scalar.dof_count());
			s.mu = Eigen::VectorXd::Zero(spaces.scalar.dof_count());
			s.vel = Eigen::VectorXd::Zero(spaces.velocity.dof_count());
			s.pressure = Eigen::VectorXd::Zero(spaces.scalar.dof_count());
			return s;
		}

		bool matches(const Spaces &spaces) const
		{
			return phi.size() == spaces.scalar.dof_count() && mu.size() == spaces.scalar.dof_count()
				   && pressure.size() == spaces.scalar.dof_count() && vel.size() == spaces.velocity.dof_count();
		}
	};
} // namespace nsch
