#pragma once

#include "nsch/diagnostics.hpp"
#include "nsch/nondim.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace nsch
{
	enum class Experiment
	{
		PhaseSeparation,
		SpaceConvergence,
		TimeConvergence,
		RisingBubbleCase1,
		RisingBubbleCase2,
		Custom
	};

	std::string to_string(Experiment e);
	Experiment experiment_from_string(const std::string &name);

	struct InitialCondition
	{
		enum class Kind
		{
			SineProduct, // amplitude sin(k pi x) sin(k pi y)
			Circle,      // tanh((|x - center| - radius) / (width sqrt 2))
			Constant
		};
		enum class Velocity
		{
			Zero,
			Vortex // 0.1 (sin^2(pi x) sin(2 pi y), sin^2(pi y) sin(2 pi x))
		};

		Kind kind = Kind::SineProduct;
		Velocity velocity = Velocity::Zero;
		double amplitude = 0.2;
		double frequency = 4.0;
		Vector2d center = Vector2d(0.5, 0.5);
		double radius = 0.25;
		double width = 0.01;
		double value = 0.0;
		bool negate = false;
	};

	struct MeshSpec
	{
		Rectangle domain;
		Index n_x = 32, n_y = 32;
		BoundarySpec bc = BoundarySpec::fully_periodic();
	};

	/// Everything a run needs. Presets fill every field; the config file
	/// overrides individual keys.
	struct RunConfig
	{
		Experiment experiment = Experiment::PhaseSeparation;
		MeshSpec mesh;
		double tau = 1e-3;
		double t_end = 2.0;
		MixtureParams params;
		NewtonConfig newton;
		int output_every = 1;
		int max_halvings = 0;
		InitialCondition initial;
		std::vector<double> snapshot_times;
		int levels = 1; // convergence ladders: coarsest resolution first
		std::string out_dir;
		std::uint64_t seed = 0; // reserved

		/// Bubble runs: case number and mesh size, used to echo the physical inputs.
		int bubble_case = 0;
		double h = 0.0;
	};

	/// Periodic unit square with snapshots at t = 0, 0.1, 0.3, 1, 2; phi0 = 0.2 sin(4 pi x) sin(4 pi y), m = 1e-2 (1 - phi^2)^2,
	/// beta = gamma = 10^{-3/2}, eta1 = eta2 = 1e-2, g = 0, h = 1/32, tau = 1e-3, T = 2.
	RunConfig phase_separation_preset(double rho1, double rho2);
	/// Ratio 1:100 with the vortex initial velocity; h_k = 2^{-1-k}, k = 1..5, tau = 1e-3, T = 0.1.
	RunConfig space_convergence_preset();
	/// h = 1/16, tau_k = 1e-4 2^{-k-1}, k = 0..4, T = 0.01.
	RunConfig time_convergence_preset();

	struct BubbleCase
	{
		double rho1, rho2, eta1, eta2, sigma, g;
	};
	BubbleCase bubble_case(int which);

	/// [0,1]x[0,2] with no-penetration side walls and no-slip top/bottom,
	/// eps = 0.64 h, tau = 0.128 h, T = 3, AbsDegenerate mobility 0.1 eps^2.
	/// Densities, viscosities and sigma are divided by rho1 (unit length,
	/// time and velocity scales), so the mobility is multiplied by rho1.
	RunConfig rising_bubble_preset(int which, double h);

	RunConfig preset_for(Experiment e);

	/// Groups of a bubble case with D0 = 0.5 and the capillary time scale.
	DimensionlessGroups bubble_groups(int which, double eps);

	struct Snapshot
	{
		double t;
		State state;
	};

	struct RunResult
	{
		std::shared_ptr<const Spaces> spaces;
		MixtureParams params;
		std::vector<DiagnosticsRecord> records; // t = 0 first, then one per step
		std::vector<Snapshot> snapshots;
		State final_state;
		bool converged = true;
		std::string failure;
	};

	using ProgressFn = std::function<void(const DiagnosticsRecord &)>;

	std::shared_ptr<const Spaces> build_spaces(const MeshSpec &spec);
	State initial_state(const Spaces &spaces, const InitialCondition &ic);

	/// Time loop with records and snapshots; writes outputs when out_dir is set.
	/// Newton failure is reported through RunResult::converged and rethrown
	/// only by the CLI.
	RunResult run_simulation(const RunConfig &config, const ProgressFn &progress = {});
	RunResult run_phase_separation(const RunConfig &config, const ProgressFn &progress = {});
	RunResult run_rising_bubble(const RunConfig &config, const ProgressFn &progress = {});

	struct ConvergenceResult
	{
		std::vector<EocTable> tables; // phi, v, mu + alpha p, grad v
		std::vector<double> resolutions;
	};

	/// Runs the resolution ladder (config.levels levels, refining the mesh or
	/// halving tau from the config values) and tabulates the errors.
	ConvergenceResult run_convergence(const RunConfig &config, StudyKind mode, const ProgressFn &progress = {});
} // namespace nsch
