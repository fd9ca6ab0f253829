#include "nsch/solver.hpp"

#include <Eigen/SparseLU>
#ifdef NSCH_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

#include <cmath>
#include <limits>
#include <random>

namespace nsch
{
	struct LinearSolver::Impl
	{
		Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> sparse_lu;
#ifdef NSCH_HAVE_UMFPACK
		Eigen::UmfPackLU<SparseMatrix> umfpack;
#endif
		SparseMatrix matrix; // UMFPACK keeps referring to the factorized matrix
		std::vector<int> outer, inner;
		bool analyzed = false;

		bool same_pattern(const SparseMatrix &m) const
		{
			if (!analyzed || Index(outer.size()) != m.outerSize() + 1 || Index(inner.size()) != m.nonZeros())
				return false;
			return std::equal(outer.begin(), outer.end(), m.outerIndexPtr())
				   && std::equal(inner.begin(), inner.end(), m.innerIndexPtr());
		}

		void remember_pattern(const SparseMatrix &m)
		{
			outer.assign(m.outerIndexPtr(), m.outerIndexPtr() + m.outerSize() + 1);
			inner.assign(m.innerIndexPtr(), m.innerIndexPtr() + m.nonZeros());
			analyzed = true;
		}
	};

	bool LinearSolver::umfpack_available()
	{
#ifdef NSCH_HAVE_UMFPACK
		return true;
#else
		return false;
#endif
	}

	LinearSolver::LinearSolver()
		: LinearSolver(umfpack_available() ? Backend::Umfpack : Backend::SparseLU)
	{
	}

	LinearSolver::LinearSolver(Backend backend)
		: backend_(backend), impl_(std::make_unique<Impl>())
	{
		if (backend == Backend::Umfpack && !umfpack_available())
			throw std::invalid_argument("this build has no UMFPACK support");
	}

	LinearSolver::~LinearSolver() = default;
	LinearSolver::LinearSolver(LinearSolver &&) noexcept = default;
	LinearSolver &LinearSolver::operator=(LinearSolver &&) noexcept = default;

	void LinearSolver::factorize(const SparseMatrix &matrix)
	{
		if (matrix.rows() != matrix.cols())
			throw std::invalid_argument("linear system is not square");
		if (!matrix.isCompressed())
			throw std::invalid_argument("matrix must be compressed");
		const bool reuse = impl_->same_pattern(matrix);
		impl_->matrix = matrix;
		const SparseMatrix &a = impl_->matrix;
		Eigen::ComputationInfo info = Eigen::Success;
		if (backend_ == Backend::SparseLU)
		{
			if (!reuse)
				impl_->sparse_lu.analyzePattern(a);
			impl_->sparse_lu.factorize(a);
			info = impl_->sparse_lu.info();
		}
#ifdef NSCH_HAVE_UMFPACK
		else
		{
			if (!reuse)
				impl_->umfpack.analyzePattern(a);
			impl_->umfpack.factorize(a);
			info = impl_->umfpack.info();
		}
#endif
		if (!reuse)
			impl_->remember_pattern(matrix);
		if (info != Eigen::Success)
		{
			impl_->analyzed = false;
			throw SingularSystem("sparse LU factorization failed (matrix is singular to working precision)");
		}
	}

	Eigen::VectorXd LinearSolver::solve(const Eigen::VectorXd &rhs) const
	{
		Eigen::VectorXd x;
		if (backend_ == Backend::SparseLU)
			x = impl_->sparse_lu.solve(rhs);
#ifdef NSCH_HAVE_UMFPACK
		else
			x = impl_->umfpack.solve(rhs);
#endif
		if (!x.allFinite())
			throw SingularSystem("linear solve produced non-finite values");
		return x;
	}

	namespace
	{
		double relative_residual(const SparseMatrix &a, const Eigen::VectorXd &x, const Eigen::VectorXd &b)
		{
			const double scale = b.lpNorm<Eigen::Infinity>();
			const double r = (b - a * x).lpNorm<Eigen::Infinity>();
			return scale > 0 ? r / scale : r;
		}

		Eigen::VectorXd solve_refined(const SparseMatrix &a, const LinearSolver &solver, const Eigen::VectorXd &b)
		{
			Eigen::VectorXd x = solver.solve(b);
			for (int k = 0; k < 2 && relative_residual(a, x, b) > 1e-10; ++k)
				x += solver.solve(b - a * x);
			return x;
		}

		double inf_norm(const SparseMatrix &a)
		{
			Eigen::VectorXd rows = Eigen::VectorXd::Zero(a.rows());
			for (int k = 0; k < a.outerSize(); ++k)
				for (SparseMatrix::InnerIterator it(a, k); it; ++it)
					rows[it.row()] += std::abs(it.value());
			return rows.size() ? rows.maxCoeff() : 0.0;
		}
	} // namespace

	Eigen::VectorXd linear_solve(const SparseSystem &system)
	{
		if (system.matrix.rows() != system.rhs.size())
			throw std::invalid_argument("rhs length does not match the matrix");
		SparseMatrix a = system.matrix;
		a.makeCompressed();
		LinearSolver solver;
		solver.factorize(a);
		return solve_refined(a, solver, system.rhs);
	}

	double condition_estimate(const SparseMatrix &matrix, const LinearSolver &factorized)
	{
		std::mt19937_64 rng(12345);
		std::bernoulli_distribution coin(0.5);
		Eigen::VectorXd b(matrix.rows());
		for (Index i = 0; i < b.size(); ++i)
			b[i] = coin(rng) ? 1.0 : -1.0;
		const Eigen::VectorXd x = factorized.solve(b);
		return inf_norm(matrix) * x.lpNorm<Eigen::Infinity>();
	}

	void NewtonConfig::validate() const
	{
		if (!(tol_residual > 0))
			throw std::invalid_argument("Newton tolerance must be positive");
		if (max_iters < 1)
			throw std::invalid_argument("Newton needs at least one iteration");
	}

	std::pair<State, NewtonStats> newton_step_solve(const Assembler &assembler, LinearSolver &solver,
													const State &state_old, double tau, const NewtonConfig &config)
	{
		config.validate();
		if (!(tau > 0))
			throw std::invalid_argument("time step must be positive");
		const SystemLayout &layout = assembler.layout();

		State state = state_old;
		state.time = state_old.time + tau;
		state.step_index = state_old.step_index + 1;
		Eigen::VectorXd x = layout.pack(state);

		NewtonStats stats;
		double rnorm = std::numeric_limits<double>::infinity();
		do
		{
			const SparseSystem sys = assembler.jacobian(state_old, state, tau);
			if (stats.iterations == 0)
				rnorm = sys.rhs.lpNorm<Eigen::Infinity>();
			solver.factorize(sys.matrix);
			if (stats.iterations == 0)
				stats.condition_estimate = condition_estimate(sys.matrix, solver);
			const Eigen::VectorXd dx = solve_refined(sys.matrix, solver, sys.rhs);
			++stats.iterations;

			double step = 1.0;
			for (int halving = 0;; ++halving)
			{
				layout.unpack(x + step * dx, state);
				const double trial = assembler.residual(state_old, state, tau).lpNorm<Eigen::Infinity>();
				if (!config.line_search || trial < rnorm || halving == 10)
				{
					rnorm = trial;
					break;
				}
				step *= 0.5;
			}
			x += step * dx;
			if (!std::isfinite(rnorm))
				break;
		} while (rnorm > config.tol_residual && stats.iterations < config.max_iters);

		stats.residual_norm = rnorm;
		stats.converged = rnorm <= config.tol_residual;
		if (!stats.converged)
			throw NonConvergence("Newton did not converge (residual " + std::to_string(rnorm) + " after "
									 + std::to_string(stats.iterations) + " iterations)",
								 state.step_index, stats);
		return {std::move(state), stats};
	}

	std::pair<State, NewtonStats> newton_step_solve(const Spaces &spaces, const State &state_old,
													const MixtureParams &params, double tau, const NewtonConfig &config)
	{
		const Assembler assembler(spaces, params);
		LinearSolver solver;
		return newton_step_solve(assembler, solver, state_old, tau, config);
	}

	Index TimeLoopConfig::steps() const
	{
		return Index(std::llround(t_end / tau));
	}

	void TimeLoopConfig::validate() const
	{
		if (!(tau > 0))
			throw std::invalid_argument("time step must be positive");
		if (!(t_end >= 0))
			throw std::invalid_argument("end time must be nonnegative");
		if (output_every < 1)
			throw std::invalid_argument("output_every must be at least 1");
		if (max_halvings < 0)
			throw std::invalid_argument("max_halvings must be nonnegative");
	}

	namespace
	{
		// Advances over one interval of length tau, splitting it on failure.
		State advance(const Assembler &assembler, LinearSolver &solver, const State &old, double tau, int halvings_left,
					  const NewtonConfig &newton, const StepSink &sink)
		{
			try
			{
				auto [next, stats] = newton_step_solve(assembler, solver, old, tau, newton);
				if (sink)
					sink(StepEvent{old, next, stats, tau});
				return std::move(next);
			}
			catch (const NonConvergence &)
			{
				if (halvings_left == 0)
					throw;
			}
			const State mid = advance(assembler, solver, old, 0.5 * tau, halvings_left - 1, newton, sink);
			State next = advance(assembler, solver, mid, 0.5 * tau, halvings_left - 1, newton, sink);
			next.step_index = old.step_index + 1;
			return next;
		}
	} // namespace

	State time_loop(const Spaces &spaces, const State &initial, const MixtureParams &params, const TimeLoopConfig &loop,
					const NewtonConfig &newton, const StepSink &sink)
	{
		loop.validate();
		newton.validate();
		if (!initial.matches(spaces))
			throw std::invalid_argument("initial state does not match the spaces");
		const Assembler assembler(spaces, params);
		LinearSolver solver;
		const Index n_steps = loop.steps();
		State state = initial;
		for (Index n = 0; n < n_steps; ++n)
		{
			try
			{
				State next = advance(assembler, solver, state, loop.tau, loop.max_halvings, newton, sink);
				next.time = initial.time + double(n + 1) * loop.tau;
				state = std::move(next);
			}
			catch (const NonConvergence &e)
			{
				throw NonConvergence(std::string(e.what()) + " at step " + std::to_string(n + 1), n + 1, e.stats);
			}
		}
		return state;
	}
} // namespace nsch
