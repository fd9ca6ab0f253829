#include "test_support.hpp"

#include <doctest.h>

#include <random>

using namespace nsch;

namespace
{
	SparseMatrix from_dense(const Eigen::MatrixXd &a)
	{
		SparseMatrix m = a.sparseView();
		m.makeCompressed();
		return m;
	}

	std::vector<LinearSolver::Backend> backends()
	{
		std::vector<LinearSolver::Backend> b{LinearSolver::Backend::SparseLU};
		if (LinearSolver::umfpack_available())
			b.push_back(LinearSolver::Backend::Umfpack);
		return b;
	}

	// Thomas algorithm for the tridiagonal (-1, 2, -1) system
	Eigen::VectorXd thomas(const Eigen::VectorXd &rhs)
	{
		const Index n = rhs.size();
		Eigen::VectorXd c(n), d(n), x(n);
		c[0] = -1.0 / 2.0;
		d[0] = rhs[0] / 2.0;
		for (Index i = 1; i < n; ++i)
		{
			const double m = 2.0 + c[i - 1];
			c[i] = -1.0 / m;
			d[i] = (rhs[i] + d[i - 1]) / m;
		}
		x[n - 1] = d[n - 1];
		for (Index i = n - 2; i >= 0; --i)
			x[i] = d[i] - c[i] * x[i + 1];
		return x;
	}

	RunConfig small_phase_separation(double r1, double r2, Index n)
	{
		RunConfig c = phase_separation_preset(r1, r2);
		c.mesh.n_x = c.mesh.n_y = n;
		c.snapshot_times.clear();
		return c;
	}
} // namespace

TEST_CASE("linear solve: identity")
{
	const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(7, -1, 2);
	const SparseSystem sys{from_dense(Eigen::MatrixXd::Identity(7, 7)), b};
	CHECK((linear_solve(sys) - b).norm() == 0.0);
}

TEST_CASE("linear solve: 1D Laplacian against the Thomas algorithm")
{
	Eigen::MatrixXd a = Eigen::MatrixXd::Zero(5, 5);
	for (int i = 0; i < 5; ++i)
	{
		a(i, i) = 2;
		if (i > 0)
			a(i, i - 1) = -1;
		if (i < 4)
			a(i, i + 1) = -1;
	}
	const Eigen::VectorXd b = (Eigen::VectorXd(5) << 1, -2, 0.5, 3, 1).finished();
	const Eigen::VectorXd expected = thomas(b);
	CHECK((linear_solve({from_dense(a), b}) - expected).lpNorm<Eigen::Infinity>() <= 1e-12);
	for (const auto backend : backends())
	{
		LinearSolver solver(backend);
		solver.factorize(from_dense(a));
		CHECK((solver.solve(b) - expected).lpNorm<Eigen::Infinity>() <= 1e-12);
	}
}

TEST_CASE("linear solve: zero row is singular")
{
	Eigen::MatrixXd a = Eigen::MatrixXd::Identity(4, 4);
	a(2, 2) = 0.0;
	a(1, 2) = 1.0;
	CHECK_THROWS_AS(linear_solve({from_dense(a), Eigen::VectorXd::Ones(4)}), SingularSystem);
	for (const auto backend : backends())
	{
		LinearSolver solver(backend);
		CHECK_THROWS_AS(solver.factorize(from_dense(a)), SingularSystem);
	}
}

TEST_CASE("linear solve: shape errors")
{
	CHECK_THROWS_AS(linear_solve({from_dense(Eigen::MatrixXd::Ones(2, 3)), Eigen::VectorXd::Ones(2)}),
					std::invalid_argument);
	CHECK_THROWS_AS(linear_solve({from_dense(Eigen::MatrixXd::Identity(3, 3)), Eigen::VectorXd::Ones(2)}),
					std::invalid_argument);
}

TEST_CASE("property: random sparse systems meet the 1e-10 relative residual")
{
	std::mt19937_64 rng(1);
	std::uniform_real_distribution<double> u(-1, 1);
	for (int trial = 0; trial < 10; ++trial)
	{
		const int n = 30 + 10 * trial;
		std::vector<Triplet> t;
		for (int i = 0; i < n; ++i)
		{
			t.emplace_back(i, i, 4.0 + u(rng));
			for (int k = 0; k < 3; ++k)
				t.emplace_back(i, int((i + 1 + 7 * k + trial) % n), u(rng));
		}
		SparseMatrix a(n, n);
		a.setFromTriplets(t.begin(), t.end());
		a.makeCompressed();
		const Eigen::VectorXd b = oracle::random_vector(n, rng);
		for (const auto backend : backends())
		{
			LinearSolver solver(backend);
			solver.factorize(a);
			const Eigen::VectorXd x = solver.solve(b);
			CHECK((a * x - b).norm() <= 1e-10 * b.norm());
			CHECK(condition_estimate(a, solver) >= 1.0);
		}
		const Eigen::VectorXd x = linear_solve({a, b});
		CHECK((a * x - b).norm() <= 1e-10 * b.norm());
	}
}

TEST_CASE("backends agree on a Newton matrix")
{
	if (!LinearSolver::umfpack_available())
		return;
	std::mt19937_64 rng(2);
	const Spaces s = oracle::make_spaces(4, 4, BoundarySpec::fully_periodic());
	const MixtureParams p = oracle::random_params(rng, MobilityLaw::degenerate_quartic(0.1));
	const State st = oracle::random_state(s, rng);
	const SparseSystem sys = jacobian(s, st, st, p, 0.01);
	LinearSolver a(LinearSolver::Backend::SparseLU), b(LinearSolver::Backend::Umfpack);
	a.factorize(sys.matrix);
	b.factorize(sys.matrix);
	const Eigen::VectorXd xa = a.solve(sys.rhs), xb = b.solve(sys.rhs);
	CHECK((xa - xb).norm() <= 1e-8 * xa.norm());
}

TEST_CASE("configuration checks")
{
	NewtonConfig n;
	CHECK_NOTHROW(n.validate());
	n.tol_residual = 0;
	CHECK_THROWS_AS(n.validate(), std::invalid_argument);
	n = NewtonConfig{};
	n.max_iters = 0;
	CHECK_THROWS_AS(n.validate(), std::invalid_argument);

	TimeLoopConfig t;
	t.tau = 0;
	CHECK_THROWS_AS(t.validate(), std::invalid_argument);
	t = TimeLoopConfig{};
	t.t_end = -1;
	CHECK_THROWS_AS(t.validate(), std::invalid_argument);
	t = TimeLoopConfig{};
	t.tau = 0.1;
	t.t_end = 0.3;
	CHECK(t.steps() == 3);
}

TEST_CASE("Newton at equilibrium converges in one iteration and leaves the state unchanged")
{
	const Spaces s = oracle::make_spaces(4, 4, BoundarySpec::fully_periodic());
	State st = State::zeros(s);
	st.phi.setOnes();
	MixtureParams p;
	p.rho1 = 10;
	p.mobility = MobilityLaw::degenerate_quartic(0.01);
	const auto [next, stats] = newton_step_solve(s, st, p, 1e-3);
	CHECK(stats.iterations == 1);
	CHECK(stats.converged);
	CHECK((next.phi - st.phi).lpNorm<Eigen::Infinity>() <= 1e-12);
	CHECK(next.vel.lpNorm<Eigen::Infinity>() <= 1e-12);
	CHECK(next.mu.lpNorm<Eigen::Infinity>() <= 1e-12);
	CHECK(next.time == doctest::Approx(1e-3));
	CHECK(next.step_index == 1);
}

TEST_CASE("Newton rejects a zero time step")
{
	const Spaces s = oracle::make_spaces(2, 2, BoundarySpec::fully_periodic());
	CHECK_THROWS_AS(newton_step_solve(s, State::zeros(s), MixtureParams{}, 0.0), std::invalid_argument);
}

TEST_CASE("first phase-separation step at h = 1/16 converges quickly")
{
	const RunConfig c = small_phase_separation(1, 10, 16);
	const auto spaces = build_spaces(c.mesh);
	const State st = initial_state(*spaces, c.initial);
	const auto [next, stats] = newton_step_solve(*spaces, st, c.params, 1e-3, c.newton);
	CHECK(stats.converged);
	CHECK(stats.iterations <= 8);
	CHECK(stats.residual_norm <= 1e-6);
	CHECK(stats.condition_estimate > 1.0);
	// the pressure stays mean-free
	CHECK(std::abs(integral(spaces->scalar, next.pressure))
		  <= 1e-10 * std::max(1.0, next.pressure.lpNorm<Eigen::Infinity>()));
}

TEST_CASE("time loop emits one event per step")
{
	const RunConfig c = small_phase_separation(1, 10, 8);
	const auto spaces = build_spaces(c.mesh);
	TimeLoopConfig loop;
	loop.tau = 1e-3;
	loop.t_end = 3e-3;
	int events = 0;
	const State last = time_loop(*spaces, initial_state(*spaces, c.initial), c.params, loop, c.newton,
								 [&](const StepEvent &) { ++events; });
	CHECK(events == 3);
	CHECK(last.time == doctest::Approx(3e-3));
	CHECK(last.step_index == 3);
}

TEST_CASE("unrecoverable nonconvergence reports the step")
{
	const RunConfig c = small_phase_separation(1, 1000, 6);
	const auto spaces = build_spaces(c.mesh);
	TimeLoopConfig loop;
	loop.tau = 1e-1;
	loop.t_end = 0.2;
	loop.max_halvings = 1;
	NewtonConfig newton;
	newton.max_iters = 1;
	newton.tol_residual = 1e-14;
	try
	{
		time_loop(*spaces, initial_state(*spaces, c.initial), c.params, loop, newton);
		FAIL("expected NonConvergence");
	}
	catch (const NonConvergence &e)
	{
		CHECK(e.step_index == 1);
		CHECK(std::string(e.what()).find("at step 1") != std::string::npos);
		CHECK_FALSE(e.stats.converged);
	}
}

TEST_CASE("ratio 1:10, h = 1/32, 50 steps: energy nonincreasing")
{
	RunConfig c = small_phase_separation(1, 10, 32);
	c.t_end = 50 * c.tau;
	const RunResult r = run_phase_separation(c);
	REQUIRE(r.converged);
	REQUIRE(r.records.size() == 51);
	for (std::size_t n = 1; n < r.records.size(); ++n)
		CHECK(r.records[n].energy.total <= r.records[n - 1].energy.total + 1e-8);
}

TEST_CASE("mass drift over 100 steps")
{
	RunConfig c = small_phase_separation(1, 100, 16);
	c.t_end = 100 * c.tau;
	const RunResult r = run_phase_separation(c);
	REQUIRE(r.converged);
	REQUIRE(r.records.size() == 101);
	for (const double d : mass_error_series(r.records))
		CHECK(std::abs(d) <= 1e-10);
	for (const auto &rec : r.records)
		CHECK(std::abs(rec.mass_rho - r.records.front().mass_rho) <= 1e-10 * std::max(1.0, rec.mass_rho));
}

TEST_CASE("property: discrete energy identity of converged steps")
{
	std::mt19937_64 rng(3);
	const MobilityLaw laws[] = {MobilityLaw::constant(1e-2), MobilityLaw::degenerate_quartic(1e-2),
								MobilityLaw::abs_degenerate(1e-2)};
	for (int trial = 0; trial < 6; ++trial)
	{
		std::uniform_real_distribution<double> e(-2, 2);
		RunConfig c = small_phase_separation(std::pow(10.0, e(rng)), std::pow(10.0, e(rng)), 12);
		c.params.mobility = laws[trial % 3];
		if (trial >= 3)
		{
			// y is not periodic, so gravity needs walls
			c.params.g = 1.0;
			c.mesh.bc = BoundarySpec::no_slip();
		}
		c.initial.velocity = InitialCondition::Velocity::Vortex;
		c.newton.tol_residual = 1e-10;
		c.tau = trial % 2 ? 1e-2 : 1e-3;
		c.t_end = 4 * c.tau;
		const RunResult r = run_simulation(c);
		REQUIRE(r.converged);
		for (std::size_t n = 1; n < r.records.size(); ++n)
		{
			const auto &a = r.records[n - 1], &b = r.records[n];
			const double identity = b.energy.total - a.energy.total + b.tau * b.dissipation + b.numerical_dissipation;
			CAPTURE(trial);
			CHECK(std::abs(identity) <= 1e-6);
			CHECK(b.energy.total + b.tau * b.dissipation <= a.energy.total + 1e-6);
		}
	}
}

TEST_CASE("identical configurations give bitwise identical diagnostics")
{
	RunConfig c = small_phase_separation(1, 10, 8);
	c.t_end = 5 * c.tau;
	const RunResult a = run_phase_separation(c), b = run_phase_separation(c);
	REQUIRE(a.records.size() == b.records.size());
	for (std::size_t n = 0; n < a.records.size(); ++n)
	{
		CHECK(a.records[n].energy.total == b.records[n].energy.total);
		CHECK(a.records[n].mass_phi == b.records[n].mass_phi);
		CHECK(a.records[n].dissipation == b.records[n].dissipation);
	}
	CHECK(a.final_state.phi == b.final_state.phi);
}
