#include "nsch/quadrature.hpp"

#include <stdexcept>

namespace nsch
{
	namespace
	{
		QuadratureRule make_centroid()
		{
			QuadratureRule rule;
			rule.degree = 1;
			rule.points.resize(1, 3);
			rule.points << 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0;
			rule.weights.resize(1);
			rule.weights << 0.5;
			return rule;
		}

		QuadratureRule make_three_point()
		{
			QuadratureRule rule;
			rule.degree = 2;
			rule.points.resize(3, 3);
			rule.points << 2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0,
				1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0,
				1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0;
			rule.weights = Eigen::VectorXd::Constant(3, 1.0 / 6.0);
			return rule;
		}

		// Dunavant degree 4, two orbits of three points
		QuadratureRule make_six_point()
		{
			constexpr double a = 0.445948490915964886318329253883;
			constexpr double wa = 0.223381589678011465944827736085;
			constexpr double b = 0.091576213509770743459571463402;
			constexpr double wb = 0.109951743655321867388505597248;

			QuadratureRule rule;
			rule.degree = 4;
			rule.points.resize(6, 3);
			rule.points << 1.0 - 2.0 * a, a, a,
				a, 1.0 - 2.0 * a, a,
				a, a, 1.0 - 2.0 * a,
				1.0 - 2.0 * b, b, b,
				b, 1.0 - 2.0 * b, b,
				b, b, 1.0 - 2.0 * b;
			rule.weights.resize(6);
			rule.weights << wa, wa, wa, wb, wb, wb;
			rule.weights *= 0.5;
			return rule;
		}
	} // namespace

	const QuadratureRule &triangle_rule(int degree)
	{
		static const QuadratureRule centroid = make_centroid();
		static const QuadratureRule three = make_three_point();
		static const QuadratureRule six = make_six_point();
		if (degree <= 1)
			return centroid;
		if (degree == 2)
			return three;
		if (degree <= 4)
			return six;
		throw std::invalid_argument("no triangle rule of degree > 4 available");
	}
} // namespace nsch
