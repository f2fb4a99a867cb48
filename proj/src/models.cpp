#include "psrfr/models.hpp"

#include <cmath>

namespace psrfr {

const char* model_name(ModelId id) {
  switch (id) {
    case ModelId::N1:  return "n1";
    case ModelId::N2:  return "n2";
    case ModelId::N3:  return "n3";
    case ModelId::N4:  return "n4";
    case ModelId::N5:  return "n5";
    case ModelId::NN1: return "nn1";
    case ModelId::NN2: return "nn2";
    case ModelId::NN3: return "nn3";
    case ModelId::NN4: return "nn4";
    case ModelId::NE1: return "ne1";
    case ModelId::NE2: return "ne2";
    case ModelId::NE3: return "ne3";
    case ModelId::GB4: return "gb4";
  }
  return "?";
}

std::optional<ModelId> parse_model(std::string_view name) {
  for (ModelId id :
       {ModelId::N1, ModelId::N2, ModelId::N3, ModelId::N4, ModelId::N5,
        ModelId::NN1, ModelId::NN2, ModelId::NN3, ModelId::NN4, ModelId::NE1,
        ModelId::NE2, ModelId::NE3, ModelId::GB4})
    if (name == model_name(id)) return id;
  return std::nullopt;
}

Index true_k(ModelId id) { return id == ModelId::GB4 ? 4 : 2; }

ModelSpec default_spec(ModelId id, Index p,
                       std::optional<double> sigma_noise) {
  const Index k = true_k(id);
  if (p < k)
    fail(ErrorCode::DimensionTooSmall,
         std::string("model ") + model_name(id) + " needs p >= " +
             std::to_string(k));
  ModelSpec spec;
  spec.model_id = id;
  spec.p = p;
  spec.true_basis = Matrix::Zero(p, k);
  if (id == ModelId::GB4) {
    const double r = 1.0 / std::sqrt(2.0);
    spec.true_basis(0, 0) = r;
    spec.true_basis(1, 0) = r;
    spec.true_basis(0, 1) = r;
    spec.true_basis(1, 1) = -r;
    spec.true_basis(2, 2) = r;
    spec.true_basis(3, 2) = r;
    spec.true_basis(2, 3) = r;
    spec.true_basis(3, 3) = -r;
    spec.sigma_noise = 2.0;
  } else {
    spec.true_basis(0, 0) = 1.0;
    spec.true_basis(1, 1) = 1.0;
    spec.sigma_noise = 0.5;
  }
  if (sigma_noise) {
    if (!(*sigma_noise >= 0.0))
      fail(ErrorCode::ConfigInvalid, "sigma_noise must be nonnegative");
    spec.sigma_noise = *sigma_noise;
  }
  return spec;
}

LabeledSample generate(const ModelSpec& spec, DataMatrix predictors,
                       const Vector& noise, SeededStream /*stream*/) {
  const Index n = predictors.n();
  if (noise.size() != n)
    fail(ErrorCode::LengthMismatch, "noise length must equal sample size");
  if (spec.true_basis.rows() != predictors.p())
    fail(ErrorCode::ShapeMismatch, "basis rows must match predictor columns");

  // b.col(i) holds beta_i' X for every row at once.
  Matrix b = predictors.values * spec.true_basis;
  const double s = spec.sigma_noise;
  Vector y(n);
  for (Index i = 0; i < n; ++i) {
    const double e = noise(i);
    const double b1 = b(i, 0);
    const double b2 = spec.true_basis.cols() > 1 ? b(i, 1) : 0.0;
    double v = 0.0;
    switch (spec.model_id) {
      case ModelId::N1:
        v = b1 + b2 * e;
        break;
      case ModelId::N2:
        v = std::sin(b1) + std::sqrt(std::abs(b2 + 1.0)) * e;
        break;
      case ModelId::N3:
        v = (4.0 + b1) * (b2 + 2.0) + s * e;
        break;
      case ModelId::N4:
        v = b1 / (0.5 + (b2 + 3.0) * (b2 + 3.0)) + s * e;
        break;
      case ModelId::N5:
        v = b1 * b1 + std::abs(b2) + s * e;
        break;
      case ModelId::NN1:
        // noise enters squared here; every other model uses plain epsilon
        v = (4.0 + b1) + (b2 + 2.0) * s * e * e;
        break;
      case ModelId::NN2:
        v = std::sqrt(std::abs(4.0 + b1)) * std::sqrt(std::abs(b2 + 2.0)) +
            s * e;
        break;
      case ModelId::NN3:
        // one epsilon shared by the interior and additive terms
        v = std::sqrt(std::abs(b1)) + std::sqrt(std::abs(b2 * e)) + s * e;
        break;
      case ModelId::NN4:
        v = 0.4 * b1 + 3.0 * std::sin(b2 / 4.0) + s * e;
        break;
      case ModelId::NE1:
        v = b1 / (0.5 + (b2 + 1.5) * (b2 + 1.5)) + s * e;
        break;
      case ModelId::NE2:
        v = b1 * (b2 + 1.0) + s * e;
        break;
      case ModelId::NE3:
        v = 0.4 * b1 + 3.0 * std::sin(b1 * b2 / 4.0) + s * e;
        break;
      case ModelId::GB4: {
        const double b3 = b(i, 2), b4 = b(i, 3);
        v = std::sin(b1 + 4.0) + std::exp(b2) + b3 * b3 + std::abs(b4) + s * e;
        break;
      }
    }
    y(i) = v;
  }
  if (!y.allFinite())
    fail(ErrorCode::ConfigInvalid, "model produced a non-finite response");
  return LabeledSample{std::move(predictors), std::move(y), spec};
}

const char* scenario_name(CovScenario s) {
  switch (s) {
    case CovScenario::NormP10: return "norm_p10";
    case CovScenario::EllpP10: return "ellp_p10";
    case CovScenario::NormP30: return "norm_p30";
    case CovScenario::NormP40: return "norm_p40";
    case CovScenario::EllpP30: return "ellp_p30";
    case CovScenario::EllpP40: return "ellp_p40";
  }
  return "?";
}

std::optional<CovScenario> parse_scenario(std::string_view name) {
  for (CovScenario s :
       {CovScenario::NormP10, CovScenario::EllpP10, CovScenario::NormP30,
        CovScenario::NormP40, CovScenario::EllpP30, CovScenario::EllpP40})
    if (name == scenario_name(s)) return s;
  return std::nullopt;
}

Matrix covariance_for(CovScenario s) {
  int repeat = 1;
  bool ellp = false;
  switch (s) {
    case CovScenario::NormP10: repeat = 1; ellp = false; break;
    case CovScenario::EllpP10: repeat = 1; ellp = true; break;
    case CovScenario::NormP30: repeat = 3; ellp = false; break;
    case CovScenario::NormP40: repeat = 4; ellp = false; break;
    case CovScenario::EllpP30: repeat = 3; ellp = true; break;
    case CovScenario::EllpP40: repeat = 4; ellp = true; break;
  }
  Vector diag(10 * repeat);
  Index at = 0;
  for (int base = 1; base <= 10; ++base) {
    double value = ellp ? 5.0 * (base - 1) + 1.0 : base;
    for (int r = 0; r < repeat; ++r) diag(at++) = value;
  }
  return diag.asDiagonal();
}

}  // namespace psrfr
