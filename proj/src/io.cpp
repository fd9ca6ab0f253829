#include "nsch/io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#ifndef NSCH_VERSION
#define NSCH_VERSION "unknown"
#endif

namespace nsch
{
	namespace pt = boost::property_tree;

	std::string code_version()
	{
		return NSCH_VERSION;
	}

	std::uint64_t fnv1a(std::string_view bytes)
	{
		std::uint64_t h = 0xcbf29ce484222325ull;
		for (const unsigned char c : bytes)
		{
			h ^= c;
			h *= 0x100000001b3ull;
		}
		return h;
	}

	namespace
	{
		const std::map<std::string, std::set<std::string>> &schema()
		{
			static const std::map<std::string, std::set<std::string>> s = {
				{"run", {"experiment", "tau", "t_end", "output_every", "max_halvings", "seed", "out_dir", "levels", "h"}},
				{"mesh", {"x0", "y0", "x1", "y1", "n_x", "n_y", "boundary", "left", "right", "bottom", "top"}},
				{"physics", {"rho1", "rho2", "eta1", "eta2", "gamma", "beta", "g"}},
				{"mobility", {"law", "coefficient"}},
				{"newton", {"tol_residual", "max_iters", "line_search"}},
				{"initial",
				 {"kind", "velocity", "amplitude", "frequency", "center_x", "center_y", "radius", "width", "value",
				  "negate"}},
				{"output", {"snapshot_times"}},
			};
			return s;
		}

		// echo-only sections, accepted and ignored on input
		const std::set<std::string> informational = {"physical", "dimensionless"};

		const std::map<std::string, std::set<std::string>> &optional_for_custom()
		{
			static const std::map<std::string, std::set<std::string>> s = {
				{"run", {"output_every", "max_halvings", "seed", "out_dir", "levels", "h"}},
				{"mesh", {"left", "right", "bottom", "top"}},
				{"output", {"snapshot_times"}},
			};
			return s;
		}

		std::string fmt(double x)
		{
			std::ostringstream os;
			os << std::setprecision(17) << x;
			return os.str();
		}

		const char *kind_name(BoundaryKind k)
		{
			switch (k)
			{
			case BoundaryKind::NoSlip:
				return "no-slip";
			case BoundaryKind::NoPenetration:
				return "no-penetration";
			case BoundaryKind::Periodic:
				return "periodic";
			}
			return "";
		}

		BoundaryKind kind_from(const std::string &s)
		{
			if (s == "no-slip")
				return BoundaryKind::NoSlip;
			if (s == "no-penetration")
				return BoundaryKind::NoPenetration;
			throw ConfigError("unknown wall condition '" + s + "'");
		}

		const char *law_name(MobilityLaw::Kind k)
		{
			switch (k)
			{
			case MobilityLaw::Kind::Constant:
				return "constant";
			case MobilityLaw::Kind::DegenerateQuartic:
				return "degenerate-quartic";
			case MobilityLaw::Kind::AbsDegenerate:
				return "abs-degenerate";
			}
			return "";
		}

		MobilityLaw::Kind law_from(const std::string &s)
		{
			if (s == "constant")
				return MobilityLaw::Kind::Constant;
			if (s == "degenerate-quartic")
				return MobilityLaw::Kind::DegenerateQuartic;
			if (s == "abs-degenerate")
				return MobilityLaw::Kind::AbsDegenerate;
			throw ConfigError("unknown mobility law '" + s + "'");
		}

		const char *ic_name(InitialCondition::Kind k)
		{
			switch (k)
			{
			case InitialCondition::Kind::SineProduct:
				return "sine-product";
			case InitialCondition::Kind::Circle:
				return "circle";
			case InitialCondition::Kind::Constant:
				return "constant";
			}
			return "";
		}

		InitialCondition::Kind ic_from(const std::string &s)
		{
			if (s == "sine-product")
				return InitialCondition::Kind::SineProduct;
			if (s == "circle")
				return InitialCondition::Kind::Circle;
			if (s == "constant")
				return InitialCondition::Kind::Constant;
			throw ConfigError("unknown initial condition '" + s + "'");
		}

		InitialCondition::Velocity velocity_from(const std::string &s)
		{
			if (s == "zero")
				return InitialCondition::Velocity::Zero;
			if (s == "vortex")
				return InitialCondition::Velocity::Vortex;
			throw ConfigError("unknown initial velocity '" + s + "'");
		}

		class Reader
		{
		public:
			explicit Reader(const pt::ptree &tree)
				: tree_(tree)
			{
			}

			template <typename T>
			void get(const std::string &section, const std::string &key, T &out) const
			{
				const auto value = tree_.get_optional<std::string>(pt::ptree::path_type(section + "." + key, '.'));
				if (!value)
					return;
				out = convert<T>(*value, section + "." + key);
			}

			bool has(const std::string &section, const std::string &key) const
			{
				return bool(tree_.get_optional<std::string>(pt::ptree::path_type(section + "." + key, '.')));
			}

		private:
			template <typename T>
			static T convert(const std::string &text, const std::string &where)
			{
				if constexpr (std::is_same_v<T, std::string>)
					return text;
				else if constexpr (std::is_same_v<T, bool>)
				{
					if (text == "true" || text == "1")
						return true;
					if (text == "false" || text == "0")
						return false;
					throw ConfigError(where + ": expected true or false, got '" + text + "'");
				}
				else
				{
					std::istringstream is(text);
					T v{};
					if (!(is >> v) || !(is >> std::ws).eof())
						throw ConfigError(where + ": cannot parse '" + text + "'");
					return v;
				}
			}

			const pt::ptree &tree_;
		};

		std::vector<double> parse_list(const std::string &text)
		{
			std::vector<double> out;
			std::istringstream is(text);
			std::string item;
			while (std::getline(is, item, ','))
			{
				std::istringstream one(item);
				double v;
				if (!(one >> v) || !(one >> std::ws).eof())
					throw ConfigError("output.snapshot_times: cannot parse '" + item + "'");
				out.push_back(v);
			}
			return out;
		}
	} // namespace

	RunConfig parse_config_text(const std::string &text)
	{
		pt::ptree tree;
		try
		{
			std::istringstream is(text);
			pt::ini_parser::read_ini(is, tree);
		}
		catch (const pt::ini_parser_error &e)
		{
			throw ConfigError(std::string("malformed config: ") + e.what());
		}

		for (const auto &[section, keys] : tree)
		{
			if (informational.count(section))
				continue;
			const auto it = schema().find(section);
			if (it == schema().end())
				throw ConfigError("unknown section [" + section + "]");
			for (const auto &[key, value] : keys)
				if (!it->second.count(key))
					throw ConfigError("unknown key '" + key + "' in [" + section + "]");
		}

		const Reader r(tree);
		std::string name;
		r.get("run", "experiment", name);
		if (name.empty())
			throw ConfigError("run.experiment is required");
		Experiment experiment;
		try
		{
			experiment = experiment_from_string(name);
		}
		catch (const std::invalid_argument &e)
		{
			throw ConfigError(e.what());
		}

		if (experiment == Experiment::Custom)
			for (const auto &[section, keys] : schema())
				for (const std::string &key : keys)
				{
					const auto opt = optional_for_custom().find(section);
					const bool optional = opt != optional_for_custom().end() && opt->second.count(key);
					if (key == "experiment" || optional)
						continue;
					if (!r.has(section, key))
						throw ConfigError("custom runs need every key; missing " + section + "." + key);
				}

		RunConfig c;
		if (experiment == Experiment::RisingBubbleCase1 || experiment == Experiment::RisingBubbleCase2)
		{
			double h = 1.0 / 32;
			r.get("run", "h", h);
			try
			{
				c = rising_bubble_preset(experiment == Experiment::RisingBubbleCase1 ? 1 : 2, h);
			}
			catch (const std::invalid_argument &e)
			{
				throw ConfigError(e.what());
			}
		}
		else
			c = preset_for(experiment);

		r.get("run", "tau", c.tau);
		r.get("run", "t_end", c.t_end);
		r.get("run", "output_every", c.output_every);
		r.get("run", "max_halvings", c.max_halvings);
		r.get("run", "seed", c.seed);
		r.get("run", "out_dir", c.out_dir);
		r.get("run", "levels", c.levels);

		r.get("mesh", "x0", c.mesh.domain.x0);
		r.get("mesh", "y0", c.mesh.domain.y0);
		r.get("mesh", "x1", c.mesh.domain.x1);
		r.get("mesh", "y1", c.mesh.domain.y1);
		r.get("mesh", "n_x", c.mesh.n_x);
		r.get("mesh", "n_y", c.mesh.n_y);
		std::string boundary = c.mesh.bc.periodic ? "periodic" : "walls";
		r.get("mesh", "boundary", boundary);
		if (boundary == "periodic")
			c.mesh.bc = BoundarySpec::fully_periodic();
		else if (boundary == "walls")
		{
			BoundarySpec bc = c.mesh.bc.periodic ? BoundarySpec::no_slip() : c.mesh.bc;
			std::string side;
			for (auto [key, slot] : {std::pair{"left", &bc.left}, std::pair{"right", &bc.right},
									 std::pair{"bottom", &bc.bottom}, std::pair{"top", &bc.top}})
			{
				side = kind_name(*slot);
				r.get("mesh", key, side);
				*slot = kind_from(side);
			}
			c.mesh.bc = BoundarySpec::walls(bc.left, bc.right, bc.bottom, bc.top);
		}
		else
			throw ConfigError("mesh.boundary must be 'periodic' or 'walls'");

		r.get("physics", "rho1", c.params.rho1);
		r.get("physics", "rho2", c.params.rho2);
		r.get("physics", "eta1", c.params.eta1);
		r.get("physics", "eta2", c.params.eta2);
		r.get("physics", "gamma", c.params.gamma);
		r.get("physics", "beta", c.params.beta);
		r.get("physics", "g", c.params.g);

		std::string law = law_name(c.params.mobility.kind);
		r.get("mobility", "law", law);
		c.params.mobility.kind = law_from(law);
		r.get("mobility", "coefficient", c.params.mobility.coefficient);

		r.get("newton", "tol_residual", c.newton.tol_residual);
		r.get("newton", "max_iters", c.newton.max_iters);
		r.get("newton", "line_search", c.newton.line_search);

		std::string ic = ic_name(c.initial.kind);
		r.get("initial", "kind", ic);
		c.initial.kind = ic_from(ic);
		std::string vel = c.initial.velocity == InitialCondition::Velocity::Vortex ? "vortex" : "zero";
		r.get("initial", "velocity", vel);
		c.initial.velocity = velocity_from(vel);
		r.get("initial", "amplitude", c.initial.amplitude);
		r.get("initial", "frequency", c.initial.frequency);
		r.get("initial", "center_x", c.initial.center.x());
		r.get("initial", "center_y", c.initial.center.y());
		r.get("initial", "radius", c.initial.radius);
		r.get("initial", "width", c.initial.width);
		r.get("initial", "value", c.initial.value);
		r.get("initial", "negate", c.initial.negate);

		if (r.has("output", "snapshot_times"))
		{
			std::string list;
			r.get("output", "snapshot_times", list);
			c.snapshot_times = parse_list(list);
		}

		try
		{
			c.params.validate();
			c.newton.validate();
		}
		catch (const std::invalid_argument &e)
		{
			throw ConfigError(e.what());
		}
		if (!(c.tau > 0) || !(c.t_end >= 0) || c.output_every < 1 || c.max_halvings < 0 || c.levels < 1)
			throw ConfigError("run: tau > 0, t_end >= 0, output_every >= 1, max_halvings >= 0 and levels >= 1 required");
		if (c.mesh.n_x < 1 || c.mesh.n_y < 1 || !(c.mesh.domain.width() > 0) || !(c.mesh.domain.height() > 0))
			throw ConfigError("mesh: positive extents and subdivision counts required");
		return c;
	}

	RunConfig parse_config_file(const std::string &path)
	{
		std::ifstream in(path);
		if (!in)
			throw ConfigError("cannot read config file " + path);
		std::ostringstream text;
		text << in.rdbuf();
		return parse_config_text(text.str());
	}

	std::string config_to_ini(const RunConfig &c)
	{
		std::ostringstream os;
		os << "[run]\n"
		   << "experiment=" << to_string(c.experiment) << "\n"
		   << "tau=" << fmt(c.tau) << "\n"
		   << "t_end=" << fmt(c.t_end) << "\n"
		   << "output_every=" << c.output_every << "\n"
		   << "max_halvings=" << c.max_halvings << "\n"
		   << "levels=" << c.levels << "\n"
		   << "seed=" << c.seed << "\n";
		if (c.bubble_case != 0)
			os << "h=" << fmt(c.h) << "\n";
		if (!c.out_dir.empty())
			os << "out_dir=" << c.out_dir << "\n";

		os << "\n[mesh]\n"
		   << "x0=" << fmt(c.mesh.domain.x0) << "\n"
		   << "y0=" << fmt(c.mesh.domain.y0) << "\n"
		   << "x1=" << fmt(c.mesh.domain.x1) << "\n"
		   << "y1=" << fmt(c.mesh.domain.y1) << "\n"
		   << "n_x=" << c.mesh.n_x << "\n"
		   << "n_y=" << c.mesh.n_y << "\n";
		if (c.mesh.bc.periodic)
			os << "boundary=periodic\n";
		else
			os << "boundary=walls\n"
			   << "left=" << kind_name(c.mesh.bc.left) << "\n"
			   << "right=" << kind_name(c.mesh.bc.right) << "\n"
			   << "bottom=" << kind_name(c.mesh.bc.bottom) << "\n"
			   << "top=" << kind_name(c.mesh.bc.top) << "\n";

		const MixtureParams &p = c.params;
		os << "\n[physics]\n"
		   << "rho1=" << fmt(p.rho1) << "\n"
		   << "rho2=" << fmt(p.rho2) << "\n"
		   << "eta1=" << fmt(p.eta1) << "\n"
		   << "eta2=" << fmt(p.eta2) << "\n"
		   << "gamma=" << fmt(p.gamma) << "\n"
		   << "beta=" << fmt(p.beta) << "\n"
		   << "g=" << fmt(p.g) << "\n";
		os << "\n[mobility]\n"
		   << "law=" << law_name(p.mobility.kind) << "\n"
		   << "coefficient=" << fmt(p.mobility.coefficient) << "\n";
		os << "\n[newton]\n"
		   << "tol_residual=" << fmt(c.newton.tol_residual) << "\n"
		   << "max_iters=" << c.newton.max_iters << "\n"
		   << "line_search=" << (c.newton.line_search ? "true" : "false") << "\n";
		const InitialCondition &ic = c.initial;
		os << "\n[initial]\n"
		   << "kind=" << ic_name(ic.kind) << "\n"
		   << "velocity=" << (ic.velocity == InitialCondition::Velocity::Vortex ? "vortex" : "zero") << "\n"
		   << "amplitude=" << fmt(ic.amplitude) << "\n"
		   << "frequency=" << fmt(ic.frequency) << "\n"
		   << "center_x=" << fmt(ic.center.x()) << "\n"
		   << "center_y=" << fmt(ic.center.y()) << "\n"
		   << "radius=" << fmt(ic.radius) << "\n"
		   << "width=" << fmt(ic.width) << "\n"
		   << "value=" << fmt(ic.value) << "\n"
		   << "negate=" << (ic.negate ? "true" : "false") << "\n";
		os << "\n[output]\n"
		   << "snapshot_times=";
		for (std::size_t k = 0; k < c.snapshot_times.size(); ++k)
			os << (k ? "," : "") << fmt(c.snapshot_times[k]);
		os << "\n";

		if (c.bubble_case != 0)
		{
			const BubbleCase b = bubble_case(c.bubble_case);
			const double eps = 0.64 * c.h;
			os << "\n[physical]\n"
			   << "rho1=" << fmt(b.rho1) << "\n"
			   << "rho2=" << fmt(b.rho2) << "\n"
			   << "mu1=" << fmt(b.eta1) << "\n"
			   << "mu2=" << fmt(b.eta2) << "\n"
			   << "sigma=" << fmt(b.sigma) << "\n"
			   << "g=" << fmt(b.g) << "\n"
			   << "eps=" << fmt(eps) << "\n";
			const DimensionlessGroups d = bubble_groups(c.bubble_case, eps);
			os << "\n[dimensionless]\n"
			   << "X0=" << fmt(d.X0) << "\n"
			   << "T0=" << fmt(d.T0) << "\n"
			   << "V0=" << fmt(d.V0) << "\n"
			   << "Re=" << fmt(d.Re) << "\n"
			   << "We=" << fmt(d.We) << "\n"
			   << "Fr=" << fmt(d.Fr) << "\n"
			   << "Cn=" << fmt(d.Cn) << "\n"
			   << "Eo=" << fmt(d.Eo) << "\n"
			   << "Ar=" << fmt(d.Ar) << "\n";
		}
		return os.str();
	}

	namespace
	{
		std::ofstream open_output(const std::string &path)
		{
			std::ofstream out(path);
			if (!out)
				throw IoError("cannot open " + path + " for writing");
			out << std::setprecision(17);
			return out;
		}

		void finish(std::ofstream &out, const std::string &path)
		{
			out.flush();
			if (!out)
				throw IoError("write to " + path + " failed");
		}
	} // namespace

	void write_vtk(const Spaces &spaces, const State &state, const std::string &path)
	{
		const Mesh &mesh = *spaces.mesh;
		const auto vel = sample_at_vertices(spaces.velocity, state.vel, spaces.scalar);
		std::ofstream out = open_output(path);
		out << "# vtk DataFile Version 3.0\n"
			<< "nsch t=" << state.time << "\n"
			<< "ASCII\n"
			<< "DATASET UNSTRUCTURED_GRID\n"
			<< "POINTS " << mesh.num_vertices() << " double\n";
		for (Index v = 0; v < mesh.num_vertices(); ++v)
			out << mesh.vertices(v, 0) << " " << mesh.vertices(v, 1) << " 0\n";
		out << "CELLS " << mesh.num_cells() << " " << 4 * mesh.num_cells() << "\n";
		for (Index c = 0; c < mesh.num_cells(); ++c)
			out << "3 " << mesh.cells(c, 0) << " " << mesh.cells(c, 1) << " " << mesh.cells(c, 2) << "\n";
		out << "CELL_TYPES " << mesh.num_cells() << "\n";
		for (Index c = 0; c < mesh.num_cells(); ++c)
			out << "5\n";
		out << "POINT_DATA " << mesh.num_vertices() << "\n";
		const std::pair<const char *, const Eigen::VectorXd *> scalars[] = {
			{"phi", &state.phi}, {"mu", &state.mu}, {"p", &state.pressure}};
		for (const auto &[name, field] : scalars)
		{
			out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
			for (Index v = 0; v < mesh.num_vertices(); ++v)
				out << (*field)[spaces.scalar.vertex_dof(v)] << "\n";
		}
		out << "VECTORS velocity double\n";
		for (Index v = 0; v < mesh.num_vertices(); ++v)
		{
			const Index d = spaces.scalar.vertex_dof(v);
			out << vel(d, 0) << " " << vel(d, 1) << " 0\n";
		}
		finish(out, path);
	}

	void write_diagnostics_csv(const std::vector<DiagnosticsRecord> &records, const std::string &path, int output_every)
	{
		std::ofstream out = open_output(path);
		out << "t,E_total,E_free,E_kin,E_grav,dissipation,mass_phi,mass_drift,y_b,v_b,newton_iters\n";
		const std::vector<double> drift = mass_error_series(records);
		for (std::size_t n = 0; n < records.size(); ++n)
		{
			if (n % std::size_t(std::max(output_every, 1)) != 0 && n + 1 != records.size())
				continue;
			const DiagnosticsRecord &r = records[n];
			out << r.t << ',' << r.energy.total << ',' << r.energy.free_energy << ',' << r.energy.kinetic << ','
				<< r.energy.gravity << ',' << r.dissipation << ',' << r.mass_phi << ',' << drift[n] << ',' << r.y_b
				<< ',' << r.v_b << ',' << r.newton_iters << '\n';
		}
		finish(out, path);
	}

	void write_eoc_csv(const std::vector<EocTable> &tables, const std::string &path)
	{
		std::ofstream out = open_output(path);
		out << "variable,norm,k,resolution,error,eoc\n";
		for (const EocTable &t : tables)
			for (std::size_t k = 0; k < t.levels.size(); ++k)
			{
				const EocLevel &l = t.levels[k];
				out << t.variable << ',' << t.norm << ',' << k << ',' << l.resolution << ',' << l.error << ',';
				if (l.eoc)
					out << *l.eoc;
				out << '\n';
			}
		finish(out, path);
	}

	std::vector<Segment> zero_level_set(const Spaces &spaces, const Eigen::VectorXd &phi)
	{
		std::vector<Segment> segments;
		const Mesh &mesh = *spaces.mesh;
		for (Index c = 0; c < mesh.num_cells(); ++c)
		{
			const auto dofs = spaces.scalar.cell_dofs(c);
			Segment seg;
			int found = 0;
			for (int k = 0; k < 3; ++k)
			{
				const int next = (k + 1) % 3;
				const double a = phi[dofs[k]], b = phi[dofs[next]];
				if ((a < 0) == (b < 0))
					continue;
				const Vector2d xa = mesh.vertex(mesh.cells(c, k)), xb = mesh.vertex(mesh.cells(c, next));
				seg[found++] = xa + a / (a - b) * (xb - xa);
			}
			if (found == 2)
				segments.push_back(seg);
		}
		return segments;
	}

	void write_segments(const std::vector<Segment> &segments, const std::string &path)
	{
		std::ofstream out = open_output(path);
		out << "x0,y0,x1,y1\n";
		for (const Segment &s : segments)
			out << s[0].x() << ',' << s[0].y() << ',' << s[1].x() << ',' << s[1].y() << '\n';
		finish(out, path);
	}

	InvariantSummary summarize(const std::vector<DiagnosticsRecord> &records, bool converged)
	{
		InvariantSummary s;
		s.converged = converged;
		s.steps = records.empty() ? 0 : Index(records.size()) - 1;
		s.max_energy_increase = -std::numeric_limits<double>::infinity();
		for (std::size_t n = 0; n < records.size(); ++n)
		{
			const DiagnosticsRecord &r = records[n];
			s.max_mass_drift = std::max(s.max_mass_drift, std::abs(r.mass_phi - records.front().mass_phi));
			if (n > 0)
				s.max_energy_increase = std::max(s.max_energy_increase,
												 r.energy.total + r.tau * r.dissipation - records[n - 1].energy.total);
			for (double v : {r.t, r.energy.total, r.dissipation, r.mass_phi, r.mass_rho, r.y_b, r.v_b})
				s.all_finite = s.all_finite && std::isfinite(v);
		}
		if (s.steps == 0)
			s.max_energy_increase = 0.0;
		return s;
	}

	void write_manifest(const std::string &path, const RunConfig &config, const InvariantSummary &summary)
	{
		std::ostringstream hash;
		hash << std::hex << std::setw(16) << std::setfill('0') << fnv1a(config_to_ini(config));
		nlohmann::ordered_json j;
		j["experiment"] = to_string(config.experiment);
		j["config_hash"] = hash.str();
		j["version"] = code_version();
		j["invariants"] = {{"steps", summary.steps},
						   {"max_mass_drift", summary.max_mass_drift},
						   {"max_energy_increase", summary.max_energy_increase},
						   {"all_finite", summary.all_finite},
						   {"converged", summary.converged}};
		std::ofstream out(path);
		if (!out)
			throw IoError("cannot open " + path + " for writing");
		out << j.dump(2) << "\n";
		if (!out)
			throw IoError("write to " + path + " failed");
	}
} // namespace nsch
