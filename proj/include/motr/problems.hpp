#pragma once

#include <string>
#include <vector>

#include "motr/core.hpp"

namespace motr::problems {

/// Biobjective exponential pair on [-2,2]^4:
///   f1 = 1 - exp(-sum (x_i - 1/2)^2),  f2 = 1 - exp(-sum (x_i + 1/2)^2).
/// With `literal` set, f2 repeats the expression of f1, which collapses the
/// image onto the diagonal.
ObjectiveVector fonseca_variant(const DecisionVector& x, bool literal = false);

/// Three-objective DTLZ2 with g(x) = (x3 - 0.5)^2 on [0,1]^3.
ObjectiveVector dtlz2(const DecisionVector& x);

/// Comet problem on [1,3.5] x [-2,2] x [0,1].
ObjectiveVector comet(const DecisionVector& x);

/// DTLZ7 variant with g(x) = 1 + 4.5 x3 and a disconnected front.
ObjectiveVector dtlz7(const DecisionVector& x);

/// Both objectives equal ||x - a||^2 with a = (0.5, -0.25) on [-2,2]^2.
ObjectiveVector twin_sphere(const DecisionVector& x);

/// Front samples (deterministic, >= 1000 points, mutually nondominated).
std::vector<ObjectiveVector> fonseca_front(int count = 1000);
std::vector<ObjectiveVector> dtlz2_front(int per_axis = 50);
std::vector<ObjectiveVector> dtlz7_front(int per_axis = 100);

Problem make_fonseca(bool literal = false);
Problem make_dtlz2();
Problem make_comet();
Problem make_dtlz7();
Problem make_twin_sphere();

/// Names accepted by by_name().
std::vector<std::string> registered_names();

/// Registered problem, or Unsupported for unknown names.
Problem by_name(const std::string& name);

/// Front sample of a problem; Unsupported when the front is unknown.
std::vector<ObjectiveVector> front_sample(const Problem& problem);

}  // namespace motr::problems
