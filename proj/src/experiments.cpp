#include "nsch/experiments.hpp"
#include "nsch/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace nsch
{
	namespace
	{
		constexpr std::pair<Experiment, const char *> experiment_names[] = {
			{Experiment::PhaseSeparation, "phase-separation"},
			{Experiment::SpaceConvergence, "space-convergence"},
			{Experiment::TimeConvergence, "time-convergence"},
			{Experiment::RisingBubbleCase1, "bubble-case1"},
			{Experiment::RisingBubbleCase2, "bubble-case2"},
			{Experiment::Custom, "custom"},
		};
	} // namespace

	std::string to_string(Experiment e)
	{
		for (const auto &[value, name] : experiment_names)
			if (value == e)
				return name;
		throw std::logic_error("unknown experiment");
	}

	Experiment experiment_from_string(const std::string &name)
	{
		for (const auto &[value, n] : experiment_names)
			if (name == n)
				return value;
		throw std::invalid_argument("unknown experiment '" + name + "'");
	}

	RunConfig phase_separation_preset(double rho1, double rho2)
	{
		RunConfig c;
		c.experiment = Experiment::PhaseSeparation;
		c.mesh.domain = {0.0, 0.0, 1.0, 1.0};
		c.mesh.n_x = c.mesh.n_y = 32;
		c.mesh.bc = BoundarySpec::fully_periodic();
		c.tau = 1e-3;
		c.t_end = 2.0;
		c.params.rho1 = rho1;
		c.params.rho2 = rho2;
		c.params.eta1 = c.params.eta2 = 1e-2;
		c.params.gamma = c.params.beta = std::pow(10.0, -1.5);
		c.params.g = 0.0;
		c.params.mobility = MobilityLaw::degenerate_quartic(1e-2);
		c.initial = InitialCondition{};
		c.snapshot_times = {0.0, 0.1, 0.3, 1.0, 2.0};
		return c;
	}

	RunConfig space_convergence_preset()
	{
		RunConfig c = phase_separation_preset(1.0, 100.0);
		c.experiment = Experiment::SpaceConvergence;
		c.initial.velocity = InitialCondition::Velocity::Vortex;
		c.mesh.n_x = c.mesh.n_y = 4;
		c.levels = 5;
		c.tau = 1e-3;
		c.t_end = 0.1;
		c.snapshot_times.clear();
		return c;
	}

	RunConfig time_convergence_preset()
	{
		RunConfig c = space_convergence_preset();
		c.experiment = Experiment::TimeConvergence;
		c.mesh.n_x = c.mesh.n_y = 16;
		c.tau = 5e-5;
		c.t_end = 0.01;
		c.levels = 5;
		return c;
	}

	BubbleCase bubble_case(int which)
	{
		if (which == 1)
			return {1000.0, 100.0, 10.0, 1.0, 24.5, 0.98};
		if (which == 2)
			return {1000.0, 1.0, 1.0, 0.1, 1.96, 0.98};
		throw std::invalid_argument("bubble case must be 1 or 2");
	}

	RunConfig rising_bubble_preset(int which, double h)
	{
		const BubbleCase b = bubble_case(which);
		if (!(h > 0))
			throw std::invalid_argument("mesh size must be positive");
		const Index n = std::llround(1.0 / h);
		if (n < 1 || std::abs(double(n) * h - 1.0) > 1e-9)
			throw std::invalid_argument("1/h must be an integer");

		RunConfig c;
		c.experiment = which == 1 ? Experiment::RisingBubbleCase1 : Experiment::RisingBubbleCase2;
		c.bubble_case = which;
		c.h = h;
		c.mesh.domain = {0.0, 0.0, 1.0, 2.0};
		c.mesh.n_x = n;
		c.mesh.n_y = 2 * n;
		c.mesh.bc = BoundarySpec::walls(BoundaryKind::NoPenetration, BoundaryKind::NoPenetration, BoundaryKind::NoSlip,
										BoundaryKind::NoSlip);
		const double eps = 0.64 * h;
		c.tau = 0.128 * h;
		c.t_end = 3.0;
		c.params.rho1 = 1.0;
		c.params.rho2 = b.rho2 / b.rho1;
		c.params.eta1 = b.eta1 / b.rho1;
		c.params.eta2 = b.eta2 / b.rho1;
		c.params.g = b.g;
		const InterfaceCoefficients ic = rising_bubble_coefficients(b.sigma / b.rho1, eps);
		c.params.gamma = ic.gamma;
		c.params.beta = 1.0 / ic.beta;
		// m_bar = 0.1 eps^2 in physical units; mu carries the 1/rho1 scaling
		c.params.mobility = MobilityLaw::abs_degenerate(b.rho1 * 0.1 * eps * eps);
		c.initial.kind = InitialCondition::Kind::Circle;
		c.initial.velocity = InitialCondition::Velocity::Zero;
		c.initial.center = Vector2d(0.5, 0.5);
		c.initial.radius = 0.25;
		c.initial.width = eps;
		c.snapshot_times = {3.0};
		return c;
	}

	RunConfig preset_for(Experiment e)
	{
		switch (e)
		{
		case Experiment::PhaseSeparation:
			return phase_separation_preset(1.0, 10.0);
		case Experiment::SpaceConvergence:
			return space_convergence_preset();
		case Experiment::TimeConvergence:
			return time_convergence_preset();
		case Experiment::RisingBubbleCase1:
			return rising_bubble_preset(1, 1.0 / 32);
		case Experiment::RisingBubbleCase2:
			return rising_bubble_preset(2, 1.0 / 32);
		case Experiment::Custom:
			break;
		}
		RunConfig c = phase_separation_preset(1.0, 1.0);
		c.experiment = Experiment::Custom;
		return c;
	}

	DimensionlessGroups bubble_groups(int which, double eps)
	{
		const BubbleCase b = bubble_case(which);
		const double d0 = 0.5;
		const double t0 = capillary_time_scale(b.rho1, b.sigma, d0);
		return groups_from_physical(b.rho1, b.eta1, b.sigma, b.g, eps, d0, d0 / t0);
	}

	std::shared_ptr<const Spaces> build_spaces(const MeshSpec &spec)
	{
		auto mesh = std::make_shared<const Mesh>(build_structured_mesh(spec.domain, spec.n_x, spec.n_y, spec.bc));
		return std::make_shared<const Spaces>(mesh);
	}

	State initial_state(const Spaces &spaces, const InitialCondition &ic)
	{
		using std::numbers::pi;
		State s = State::zeros(spaces);
		const double sign = ic.negate ? -1.0 : 1.0;
		switch (ic.kind)
		{
		case InitialCondition::Kind::SineProduct:
			s.phi = interpolate(spaces.scalar, [&](const Vector2d &x) {
				return sign * ic.amplitude * std::sin(ic.frequency * pi * x.x()) * std::sin(ic.frequency * pi * x.y());
			});
			break;
		case InitialCondition::Kind::Circle:
			s.phi = interpolate(spaces.scalar, [&](const Vector2d &x) {
				return sign * std::tanh(((x - ic.center).norm() - ic.radius) / (ic.width * std::sqrt(2.0)));
			});
			break;
		case InitialCondition::Kind::Constant:
			s.phi.setConstant(sign * ic.value);
			break;
		}
		if (ic.velocity == InitialCondition::Velocity::Vortex)
		{
			s.vel = interpolate(spaces.velocity, [](const Vector2d &x) {
				const double sx = std::sin(pi * x.x()), sy = std::sin(pi * x.y());
				return Vector2d(0.1 * sx * sx * std::sin(2 * pi * x.y()), 0.1 * sy * sy * std::sin(2 * pi * x.x()));
			});
			enforce_constraints(spaces.velocity, s.vel);
		}
		return s;
	}

	namespace
	{
		std::string snapshot_name(double t)
		{
			std::ostringstream os;
			os << "snapshot_t" << std::fixed << std::setprecision(4) << t << ".vtk";
			return os.str();
		}

		void write_outputs(const RunConfig &config, const RunResult &result)
		{
			namespace fs = std::filesystem;
			const fs::path dir(config.out_dir);
			std::error_code ec;
			fs::create_directories(dir, ec);
			if (ec)
				throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
			write_diagnostics_csv(result.records, (dir / "diagnostics.csv").string(), config.output_every);
			for (const Snapshot &s : result.snapshots)
				write_vtk(*result.spaces, s.state, (dir / snapshot_name(s.t)).string());
			if (config.bubble_case != 0)
			{
				std::ostringstream name;
				name << "contour_t" << std::fixed << std::setprecision(4) << result.final_state.time << ".csv";
				write_segments(zero_level_set(*result.spaces, result.final_state.phi), (dir / name.str()).string());
			}
			const std::string echo = config_to_ini(config);
			std::ofstream meta(dir / "metadata.ini");
			if (!(meta << echo))
				throw IoError("cannot write " + (dir / "metadata.ini").string());
			write_manifest((dir / "manifest.json").string(), config, summarize(result.records, result.converged));
		}
	} // namespace

	RunResult run_simulation(const RunConfig &config, const ProgressFn &progress)
	{
		RunResult result;
		result.spaces = build_spaces(config.mesh);
		result.params = config.params;
		const Spaces &spaces = *result.spaces;
		const State initial = initial_state(spaces, config.initial);

		const auto take_snapshot = [&](const State &s, double tau) {
			for (double t : config.snapshot_times)
				if (std::abs(s.time - t) < 0.5 * tau)
					result.snapshots.push_back({t, s});
		};

		result.records.push_back(make_record(spaces, config.params, initial));
		take_snapshot(initial, config.tau);
		if (progress)
			progress(result.records.back());

		TimeLoopConfig loop;
		loop.tau = config.tau;
		loop.t_end = config.t_end;
		loop.output_every = config.output_every;
		loop.max_halvings = config.max_halvings;

		result.final_state = initial;
		try
		{
			result.final_state = time_loop(spaces, initial, config.params, loop, config.newton, [&](const StepEvent &e) {
				result.records.push_back(make_record(spaces, config.params, e));
				result.final_state = e.new_state;
				take_snapshot(e.new_state, config.tau);
				if (progress)
					progress(result.records.back());
			});
		}
		catch (const NonConvergence &e)
		{
			result.converged = false;
			result.failure = e.what();
		}
		catch (const SingularSystem &e)
		{
			result.converged = false;
			result.failure = e.what();
		}

		if (!config.out_dir.empty())
			write_outputs(config, result);
		return result;
	}

	RunResult run_phase_separation(const RunConfig &config, const ProgressFn &progress)
	{
		if (!config.mesh.bc.periodic)
			throw std::invalid_argument("phase separation runs on a periodic domain");
		return run_simulation(config, progress);
	}

	RunResult run_rising_bubble(const RunConfig &config, const ProgressFn &progress)
	{
		if (config.bubble_case != 1 && config.bubble_case != 2)
			throw std::invalid_argument("bubble runs need case 1 or 2");
		return run_simulation(config, progress);
	}

	ConvergenceResult run_convergence(const RunConfig &config, StudyKind mode, const ProgressFn &progress)
	{
		if (config.levels < 1)
			throw std::invalid_argument("a convergence study needs at least one level");
		std::vector<Trajectory> levels;
		std::shared_ptr<const Spaces> spaces = build_spaces(config.mesh);
		double tau = config.tau;
		for (int k = 0; k < config.levels; ++k)
		{
			if (k > 0)
			{
				if (mode == StudyKind::Space)
					spaces = std::make_shared<const Spaces>(std::make_shared<const Mesh>(refine_uniform(*spaces->mesh)));
				else
					tau *= 0.5;
			}
			Trajectory traj;
			traj.spaces = spaces;
			traj.tau = tau;
			traj.resolution = mode == StudyKind::Space ? spaces->mesh->domain.width() / double(config.mesh.n_x << k) : tau;
			traj.states.push_back(initial_state(*spaces, config.initial));

			TimeLoopConfig loop;
			loop.tau = tau;
			loop.t_end = config.t_end;
			loop.max_halvings = 0;
			time_loop(*spaces, traj.states.front(), config.params, loop, config.newton, [&](const StepEvent &e) {
				traj.states.push_back(e.new_state);
				if (progress)
					progress(make_record(*spaces, config.params, e));
			});
			levels.push_back(std::move(traj));
		}

		ConvergenceResult result;
		result.tables = pairwise_errors(levels, mode, config.params);
		for (std::size_t k = 0; k + 1 < levels.size(); ++k)
			result.resolutions.push_back(levels[k].resolution);
		if (!config.out_dir.empty())
		{
			std::filesystem::create_directories(config.out_dir);
			write_eoc_csv(result.tables, (std::filesystem::path(config.out_dir) / "eoc.csv").string());
			std::ofstream meta(std::filesystem::path(config.out_dir) / "metadata.ini");
			meta << config_to_ini(config);
			InvariantSummary summary;
			summary.steps = Index(levels.back().states.size()) - 1;
			write_manifest((std::filesystem::path(config.out_dir) / "manifest.json").string(), config, summary);
		}
		return result;
	}
} // namespace nsch
