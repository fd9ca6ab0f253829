#pragma once

#include "nsch/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nsch
{
	struct DiagnosticsRecord
	{
		double t = 0.0;
		double tau = 0.0; // step that produced this level, 0 for the initial record
		EnergyBreakdown energy;
		double dissipation = 0.0;           // D at the new level
		double numerical_dissipation = 0.0; // quadratic increment terms of the step
		double mass_phi = 0.0;
		double mass_rho = 0.0;
		double y_b = 0.0;
		double v_b = 0.0;
		double bubble_area = 0.0; // 0 when {phi < 0} is empty; y_b, v_b are then 0
		int newton_iters = 0;
		double residual_norm = 0.0;
	};

	/// Record of the initial level.
	DiagnosticsRecord make_record(const Spaces &spaces, const MixtureParams &params, const State &state);
	/// Record of a completed step.
	DiagnosticsRecord make_record(const Spaces &spaces, const MixtureParams &params, const StepEvent &step);

	class EmptyBubble : public std::runtime_error
	{
	public:
		using std::runtime_error::runtime_error;
	};

	struct BubbleMetrics
	{
		double y_b = 0.0;
		double v_b = 0.0;
		double area = 0.0;
	};

	/// Centre of mass and mean vertical velocity of {phi_h < 0}, integrated
	/// over the exact sub-polygons cut from each cell by the zero level set of
	/// the P1 phase field. y is measured from the domain bottom.
	BubbleMetrics bubble_metrics(const Spaces &spaces, const State &state);

	/// Signed drift <phi^n, 1> - <phi^0, 1> of each record.
	std::vector<double> mass_error_series(const std::vector<DiagnosticsRecord> &records);

	struct EocLevel
	{
		double resolution = 0.0; // h_k or tau_k
		double error = 0.0;
		std::optional<double> eoc; // log2(err_{k-1} / err_k); absent on the first level or for zero errors
	};

	struct EocTable
	{
		std::string variable;
		std::string norm;
		std::vector<EocLevel> levels;

		static EocTable from_errors(std::string variable, std::string norm, const std::vector<double> &resolutions,
									const std::vector<double> &errors);
	};

	/// Solution of one resolution level at every time level n = 0..n_T.
	struct Trajectory
	{
		std::shared_ptr<const Spaces> spaces;
		std::vector<State> states;
		double tau = 0.0;
		double resolution = 0.0;
	};

	/// The four error quantities between a level and the next finer one:
	/// max_n |phi diff|_H1^2, max_n |v diff|_L2^2, tau sum_n |(mu + alpha p) diff|_H1^2,
	/// tau sum_n |v diff|_H1^2, with n = 1..n_T.
	struct PairErrors
	{
		double phi = 0.0;
		double vel = 0.0;
		double chem = 0.0;
		double grad_vel = 0.0;
	};

	/// Fine trajectory lives on refine_uniform(coarse mesh) with the same time grid;
	/// coarse fields are prolongated by nodal interpolation.
	PairErrors spatial_pair_errors(const Trajectory &coarse, const Trajectory &fine, const MixtureParams &params);

	/// Same spaces, fine time step tau/2. mu + alpha p and v in the summed
	/// quantities are compared against the average of fine levels 2n and 2n-1.
	PairErrors temporal_pair_errors(const Trajectory &coarse, const Trajectory &fine, const MixtureParams &params);

	enum class StudyKind
	{
		Space,
		Time
	};

	/// Error tables for phi, v, mu + alpha p and grad v over a resolution
	/// ladder (coarsest first). Level k holds err between k and k+1, so there
	/// is one row fewer than there are trajectories.
	std::vector<EocTable> pairwise_errors(const std::vector<Trajectory> &levels, StudyKind kind,
										  const MixtureParams &params);
} // namespace nsch
