#pragma once

#include <optional>
#include <string_view>

#include "psrfr/rng.hpp"
#include "psrfr/types.hpp"

namespace psrfr {

/// The thirteen synthetic regression models. N* pair with normal predictors,
/// NN* with the elliptical laws, NE* with the contamination mixture, GB4 is
/// the four-direction benchmark.
enum class ModelId {
  N1, N2, N3, N4, N5,
  NN1, NN2, NN3, NN4,
  NE1, NE2, NE3,
  GB4,
};

/// Stable lowercase id used by the CLI and result files ("n1".."gb4").
const char* model_name(ModelId id);
std::optional<ModelId> parse_model(std::string_view name);

/// Number of true directions: 4 for GB4, 2 otherwise.
Index true_k(ModelId id);

struct ModelSpec {
  ModelId model_id = ModelId::N1;
  Index p = 0;
  double sigma_noise = 0.5;
  Matrix true_basis;  // p x k, orthonormal columns
};

struct LabeledSample {
  DataMatrix predictors;
  Vector response;
  ModelSpec truth;
};

/// Canonical spec: basis (e1, e2) for two-direction models, the four
/// two-sparse +-1/sqrt(2) columns for GB4. sigma_noise defaults to 0.5
/// (GB4: 2.0, its low-noise benchmark level) unless overridden.
ModelSpec default_spec(ModelId id, Index p,
                       std::optional<double> sigma_noise = std::nullopt);

/// Computes responses row by row from the model equation. noise must hold n
/// i.i.d. N(0,1) draws supplied by the caller; the stream argument is
/// reserved for models needing internal randomness (none currently do).
LabeledSample generate(const ModelSpec& spec, DataMatrix predictors,
                       const Vector& noise, SeededStream stream);

/// Predictor covariance presets. norm_* carry diagonal (1..10), ellp_* carry
/// (1, 6, ..., 46); the p30/p40 variants repeat each value 3 or 4 times
/// consecutively.
enum class CovScenario {
  NormP10, EllpP10, NormP30, NormP40, EllpP30, EllpP40,
};

const char* scenario_name(CovScenario s);
std::optional<CovScenario> parse_scenario(std::string_view name);
Matrix covariance_for(CovScenario s);

}  // namespace psrfr
