#pragma once

#include "kkmass/geometry.hpp"

#include <map>
#include <string>
#include <vector>

namespace kkmass {

enum class ModelName { Flat, ProductFlat, SchwarzschildSlice, EuclideanRN, PerturbedProduct };

/// Shape of the perturbation h = epsilon r^-tau S in perturbed_product.
enum class PerturbationShape {
  PureTrace,    // S = identity on every index, fiber included
  Mixing,       // S_{i alpha} = n_i for the first fiber direction
  FiberOnly,    // S = identity on the fiber block
  Anisotropic,  // fixed constant symmetric matrix coupling everything
};

/// Closed-form metric selection.
///
/// Parameters by model (defaults in brackets):
///  - flat:               k [3]
///  - product_flat:       k [3]; fiber_periods
///  - schwarzschild_slice: m [1], r_min; optional fiber_periods (unperturbed)
///  - euclidean_rn:       m [1], q or q2 [1], margin [0.1]; the circle
///                        period is fixed by regularity at r_+
///  - perturbed_product:  k [3], epsilon [0.1], tau [2], r_min [1]; fiber_periods
struct ModelSpec {
  ModelName name = ModelName::Flat;
  std::map<std::string, double> parameters;
  std::vector<double> fiber_periods;
  PerturbationShape shape = PerturbationShape::PureTrace;

  double get(const std::string& key, double fallback) const;
};

MetricField build_model(const ModelSpec& spec);

/// r_+ = m + sqrt(m^2 + q^2); throws InvalidArgument unless real and positive.
double rn_horizon(double m, double q2);

/// Circle length 2 pi r_+^2 / (r_+ - m) making the soliton smooth at r_+.
double rn_circle_length(double m, double q2);

/// Closed-form mass m (r_+ - m) / (4 pi r_+^2).
double rn_mass_closed_form(double m, double q2);

/// q^2 keeping the circle length at `length` for a given m (the larger root).
double rn_charge_for_circle(double m, double length);

/// The fixed symmetric matrix used by the anisotropic shape.
Mat anisotropic_shape(int n);

ModelName parse_model_name(const std::string& s);
std::string to_string(ModelName name);
PerturbationShape parse_shape(const std::string& s);
std::string to_string(PerturbationShape shape);

}  // namespace kkmass
