#pragma once

#include <complex>
#include <functional>

#include "cstar_jensen/algebra.hpp"
#include "cstar_jensen/module.hpp"

namespace cstar_jensen {

using Scalar = std::complex<double>;
using AlgebraElement = BasicAlgebraElement<Scalar>;
using ModuleVector = BasicModuleVector<Scalar>;
using Coefficient = BasicCoefficient<Scalar>;
using PairImage = BasicPairImage<Scalar>;
using ExplicitPairs = BasicExplicitPairs<Scalar>;
using OrthoSamplerMode = BasicOrthoSamplerMode<Scalar>;

using VectorPair = std::pair<ModuleVector, ModuleVector>;

/// Black-box one-argument mapping E -> G.
using Evaluable = std::function<ModuleVector(const ModuleVector&)>;
/// Black-box two-argument mapping E x E -> G.
using Form = std::function<ModuleVector(const ModuleVector&, const ModuleVector&)>;

}  // namespace cstar_jensen
