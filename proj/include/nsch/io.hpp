#pragma once

#include "nsch/experiments.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nsch
{
	class ConfigError : public std::invalid_argument
	{
	public:
		using std::invalid_argument::invalid_argument;
	};

	class IoError : public std::runtime_error
	{
	public:
		using std::runtime_error::runtime_error;
	};

	/// INI text with sections [run], [mesh], [physics], [mobility], [newton],
	/// [initial], [output]. `[run] experiment` selects a preset whose values
	/// the remaining keys override; for `custom` every key is required.
	RunConfig parse_config_text(const std::string &text);
	RunConfig parse_config_file(const std::string &path);

	/// Deterministic INI echo of a configuration (every key, fixed order,
	/// 17 significant digits). parse_config_text inverts it. Bubble runs
	/// additionally carry a [dimensionless] block.
	std::string config_to_ini(const RunConfig &config);

	std::uint64_t fnv1a(std::string_view bytes);

	/// Legacy ASCII VTK unstructured grid with point data phi, mu, p and
	/// velocity (P2 values at the vertices).
	void write_vtk(const Spaces &spaces, const State &state, const std::string &path);

	/// Header t,E_total,E_free,E_kin,E_grav,dissipation,mass_phi,mass_drift,y_b,v_b,newton_iters.
	void write_diagnostics_csv(const std::vector<DiagnosticsRecord> &records, const std::string &path,
							   int output_every = 1);

	void write_eoc_csv(const std::vector<EocTable> &tables, const std::string &path);

	using Segment = std::array<Vector2d, 2>;
	/// Zero level set of the P1 phase field, one segment per cut cell.
	std::vector<Segment> zero_level_set(const Spaces &spaces, const Eigen::VectorXd &phi);
	void write_segments(const std::vector<Segment> &segments, const std::string &path);

	struct InvariantSummary
	{
		Index steps = 0;
		double max_mass_drift = 0.0;
		double max_energy_increase = 0.0; // max_n (E^{n+1} + tau D - E^n), may be negative
		bool all_finite = true;
		bool converged = true;
	};

	InvariantSummary summarize(const std::vector<DiagnosticsRecord> &records, bool converged);

	/// manifest.json with experiment, config hash, code version and the invariant summary.
	void write_manifest(const std::string &path, const RunConfig &config, const InvariantSummary &summary);

	std::string code_version();
} // namespace nsch
