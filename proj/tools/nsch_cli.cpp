#include "nsch/io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <iostream>
#include <optional>

namespace
{
	using namespace nsch;

	struct Options
	{
		std::string config;
		std::string out;
		std::string h;
		std::optional<double> tau, t_end;
		std::optional<int> which;
		std::string ratio;
		bool quiet = false;
	};

	double parse_h(const std::string &text)
	{
		const auto slash = text.find('/');
		try
		{
			std::size_t used = 0;
			if (slash == std::string::npos)
			{
				const double h = std::stod(text, &used);
				if (used == text.size() && h > 0)
					return h;
			}
			else
			{
				const double num = std::stod(text.substr(0, slash), &used);
				const std::string den_text = text.substr(slash + 1);
				std::size_t used_den = 0;
				const double den = std::stod(den_text, &used_den);
				if (used == slash && used_den == den_text.size() && num > 0 && den > 0)
					return num / den;
			}
		}
		catch (const std::exception &)
		{
		}
		throw ConfigError("--h expects a positive number or fraction such as 1/32, got '" + text + "'");
	}

	std::pair<double, double> parse_ratio(const std::string &text)
	{
		const auto colon = text.find(':');
		try
		{
			if (colon != std::string::npos)
			{
				std::size_t a = 0, b = 0;
				const std::string rhs = text.substr(colon + 1);
				const double r1 = std::stod(text.substr(0, colon), &a);
				const double r2 = std::stod(rhs, &b);
				if (a == colon && b == rhs.size() && r1 > 0 && r2 > 0)
					return {r1, r2};
			}
		}
		catch (const std::exception &)
		{
		}
		throw ConfigError("--ratio expects R1:R2 with positive densities, got '" + text + "'");
	}

	Index cells_per_unit(double h)
	{
		const Index n = std::llround(1.0 / h);
		if (n < 1 || std::abs(double(n) * h - 1.0) > 1e-9)
			throw ConfigError("1/h must be an integer");
		return n;
	}

	RunConfig base_config(const Options &o, Experiment expected)
	{
		if (o.config.empty())
		{
			if (expected == Experiment::Custom)
				throw ConfigError("custom runs need --config");
			return preset_for(expected);
		}
		RunConfig c = parse_config_file(o.config);
		const bool bubble_sub = expected == Experiment::RisingBubbleCase1 || expected == Experiment::RisingBubbleCase2;
		const bool bubble_cfg = c.bubble_case != 0;
		if (bubble_sub ? !bubble_cfg : c.experiment != expected)
			throw ConfigError("config experiment '" + to_string(c.experiment) + "' does not match the subcommand");
		return c;
	}

	void apply_common(const Options &o, RunConfig &c)
	{
		if (o.tau)
			c.tau = *o.tau;
		if (o.t_end)
			c.t_end = *o.t_end;
		if (!o.out.empty())
			c.out_dir = o.out;
		if (!(c.tau > 0) || !(c.t_end >= 0))
			throw ConfigError("tau must be positive and t_end nonnegative");
	}

	void print_progress(const DiagnosticsRecord &r)
	{
		std::cerr << std::setprecision(6) << "t=" << r.t << " E=" << r.energy.total << " mass=" << r.mass_phi
				  << " newton=" << r.newton_iters << "\n";
	}

	int finish_run(const RunResult &result, const RunConfig &c)
	{
		const InvariantSummary s = summarize(result.records, result.converged);
		std::cout << std::setprecision(6) << "steps " << s.steps << ", max mass drift " << s.max_mass_drift
				  << ", max energy increase " << s.max_energy_increase << "\n";
		if (!c.out_dir.empty())
			std::cout << "outputs in " << c.out_dir << "\n";
		if (!result.converged)
		{
			std::cerr << "error: " << result.failure << "\n";
			return 2;
		}
		return 0;
	}

	int run_sim(const Options &o, RunConfig c)
	{
		apply_common(o, c);
		const ProgressFn progress = o.quiet ? ProgressFn{} : ProgressFn(print_progress);
		return finish_run(run_simulation(c, progress), c);
	}

	int phase_sep(const Options &o)
	{
		RunConfig c = base_config(o, Experiment::PhaseSeparation);
		if (!o.ratio.empty())
		{
			const auto [r1, r2] = parse_ratio(o.ratio);
			c.params.rho1 = r1;
			c.params.rho2 = r2;
		}
		if (!o.h.empty())
			c.mesh.n_x = c.mesh.n_y = cells_per_unit(parse_h(o.h));
		apply_common(o, c);
		const ProgressFn progress = o.quiet ? ProgressFn{} : ProgressFn(print_progress);
		return finish_run(run_phase_separation(c, progress), c);
	}

	int bubble(const Options &o)
	{
		RunConfig c;
		if (o.config.empty())
			c = rising_bubble_preset(o.which.value_or(1), o.h.empty() ? 1.0 / 32 : parse_h(o.h));
		else
		{
			c = base_config(o, Experiment::RisingBubbleCase1);
			if (o.which || !o.h.empty())
			{
				RunConfig fresh = rising_bubble_preset(o.which.value_or(c.bubble_case), o.h.empty() ? c.h : parse_h(o.h));
				fresh.newton = c.newton;
				fresh.output_every = c.output_every;
				fresh.max_halvings = c.max_halvings;
				fresh.out_dir = c.out_dir;
				c = fresh;
			}
		}
		apply_common(o, c);
		const ProgressFn progress = o.quiet ? ProgressFn{} : ProgressFn(print_progress);
		return finish_run(run_rising_bubble(c, progress), c);
	}

	int converge(const Options &o, StudyKind mode)
	{
		RunConfig c =
			base_config(o, mode == StudyKind::Space ? Experiment::SpaceConvergence : Experiment::TimeConvergence);
		if (!o.ratio.empty())
		{
			const auto [r1, r2] = parse_ratio(o.ratio);
			c.params.rho1 = r1;
			c.params.rho2 = r2;
		}
		if (!o.h.empty())
			c.mesh.n_x = c.mesh.n_y = cells_per_unit(parse_h(o.h));
		apply_common(o, c);
		const ConvergenceResult r = run_convergence(c, mode);
		std::cout << std::setprecision(4) << std::scientific;
		for (const EocTable &t : r.tables)
		{
			std::cout << t.variable << " (" << t.norm << ")\n";
			for (std::size_t k = 0; k < t.levels.size(); ++k)
			{
				std::cout << "  k=" << k << " res=" << t.levels[k].resolution << " err=" << t.levels[k].error;
				if (t.levels[k].eoc)
					std::cout << " eoc=" << std::fixed << std::setprecision(3) << *t.levels[k].eoc << std::scientific
							  << std::setprecision(4);
				std::cout << "\n";
			}
		}
		return 0;
	}

	void add_flags(CLI::App *sub, Options &o, bool with_ratio, bool with_case)
	{
		sub->set_help_flag("--help", "print this help");
		sub->add_option("--config", o.config, "INI configuration file");
		sub->add_option("--out", o.out, "output directory");
		sub->add_option("--h", o.h, "mesh size, e.g. 1/32");
		sub->add_option("--tau", o.tau, "time step");
		sub->add_option("--t-end", o.t_end, "final time");
		if (with_ratio)
			sub->add_option("--ratio", o.ratio, "densities R1:R2");
		if (with_case)
			sub->add_option("--case", o.which, "bubble case")->check(CLI::IsMember({1, 2}));
		sub->add_flag("-q,--quiet", o.quiet, "no per-step progress");
	}
} // namespace

int main(int argc, char **argv)
{
	CLI::App app{"Navier-Stokes Cahn-Hilliard mixture solver"};
	app.set_help_flag("--help", "print this help");
	app.require_subcommand(1);
	Options o;
	auto *ps = app.add_subcommand("phase-sep", "spinodal decomposition on the periodic unit square");
	auto *cs = app.add_subcommand("converge-space", "spatial convergence ladder");
	auto *ct = app.add_subcommand("converge-time", "temporal convergence ladder");
	auto *bb = app.add_subcommand("bubble", "rising bubble benchmark");
	auto *cu = app.add_subcommand("custom", "run a fully specified configuration");
	add_flags(ps, o, true, false);
	add_flags(cs, o, true, false);
	add_flags(ct, o, true, false);
	add_flags(bb, o, false, true);
	add_flags(cu, o, false, false);

	try
	{
		app.parse(argc, argv);
	}
	catch (const CLI::ParseError &e)
	{
		const int code = app.exit(e);
		return code == 0 ? 0 : 1;
	}

	try
	{
		if (ps->parsed())
			return phase_sep(o);
		if (cs->parsed())
			return converge(o, StudyKind::Space);
		if (ct->parsed())
			return converge(o, StudyKind::Time);
		if (bb->parsed())
			return bubble(o);
		return run_sim(o, base_config(o, Experiment::Custom));
	}
	catch (const NonConvergence &e)
	{
		std::cerr << "error: " << e.what() << "\n";
		return 2;
	}
	catch (const SingularSystem &e)
	{
		std::cerr << "error: " << e.what() << "\n";
		return 2;
	}
	catch (const std::exception &e)
	{
		std::cerr << "error: " << e.what() << "\n";
		return 1;
	}
}
