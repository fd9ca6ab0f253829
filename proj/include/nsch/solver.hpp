#pragma once

#include "nsch/assembly.hpp"

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

namespace nsch
{
	class SingularSystem : public std::runtime_error
	{
	public:
		using std::runtime_error::runtime_error;
	};

	struct NewtonStats
	{
		int iterations = 0;
		double residual_norm = 0.0;     // max norm after the last update
		double condition_estimate = 0.0; // from the first linear solve
		bool converged = false;
	};

	class NonConvergence : public std::runtime_error
	{
	public:
		NonConvergence(const std::string &what, Index step, NewtonStats stats)
			: std::runtime_error(what), step_index(step), stats(stats)
		{
		}
		Index step_index;
		NewtonStats stats;
	};

	/// Sparse direct solver. The symbolic analysis is kept between calls as
	/// long as the sparsity pattern does not change.
	class LinearSolver
	{
	public:
		enum class Backend
		{
			SparseLU,
			Umfpack
		};

		LinearSolver();
		explicit LinearSolver(Backend backend);
		~LinearSolver();
		LinearSolver(LinearSolver &&) noexcept;
		LinearSolver &operator=(LinearSolver &&) noexcept;

		static bool umfpack_available();
		Backend backend() const { return backend_; }

		/// Throws SingularSystem if the factorization breaks down.
		void factorize(const SparseMatrix &matrix);
		Eigen::VectorXd solve(const Eigen::VectorXd &rhs) const;

	private:
		struct Impl;
		Backend backend_;
		std::unique_ptr<Impl> impl_;
	};

	/// Factorize and solve once; applies up to two steps of iterative
	/// refinement when the relative residual exceeds 1e-10.
	Eigen::VectorXd linear_solve(const SparseSystem &system);

	/// ||A||_inf ||A^{-1} b||_inf / ||b||_inf for a random-sign b; a cheap
	/// lower bound on the infinity-norm condition number.
	double condition_estimate(const SparseMatrix &matrix, const LinearSolver &factorized);

	struct NewtonConfig
	{
		double tol_residual = 1e-6;
		int max_iters = 20;
		bool line_search = false;

		void validate() const;
	};

	/// One implicit step. The initial guess takes phi and v from `state_old`
	/// and lags mu, p. Every iteration assembles and solves once, then
	/// re-evaluates the residual; the loop stops when its max norm reaches
	/// `tol_residual`. Throws NonConvergence or SingularSystem.
	std::pair<State, NewtonStats> newton_step_solve(const Assembler &assembler, LinearSolver &solver,
													const State &state_old, double tau, const NewtonConfig &config);

	std::pair<State, NewtonStats> newton_step_solve(const Spaces &spaces, const State &state_old,
													const MixtureParams &params, double tau,
													const NewtonConfig &config = {});

	struct TimeLoopConfig
	{
		double tau = 1e-3;
		double t_end = 0.0;
		int output_every = 1;
		int max_halvings = 3; // per step, on NonConvergence

		/// Number of steps round(t_end / tau).
		Index steps() const;
		void validate() const;
	};

	struct StepEvent
	{
		const State &old_state;
		const State &new_state;
		const NewtonStats &stats;
		double tau; // step actually taken
	};

	using StepSink = std::function<void(const StepEvent &)>;

	/// Advances `initial` by TimeLoopConfig::steps() steps, calling `sink`
	/// once per completed step (a halved step calls it once per sub-step).
	State time_loop(const Spaces &spaces, const State &initial, const MixtureParams &params,
					const TimeLoopConfig &loop, const NewtonConfig &newton, const StepSink &sink = {});
} // namespace nsch
