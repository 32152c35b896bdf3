#include "cpa/params.hpp"

namespace cpa {

double SystemParams::kappa() const {
  if (!is_symmetric()) {
    throw FormulaDomainError(
        "symmetric-cavity analysis requires kappa_l == kappa_r, got " +
        std::to_string(kappa_l) + " and " + std::to_string(kappa_r));
  }
  return kappa_l;
}

void SystemParams::validate() const {
  auto nonneg = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(name) + " must be >= 0");
    }
  };
  nonneg(gamma31, "gamma31");
  nonneg(gamma32, "gamma32");
  nonneg(gamma12, "gamma12");
  nonneg(kappa_l, "kappa_l");
  nonneg(kappa_r, "kappa_r");
  nonneg(g, "g");
  nonneg(omega1, "omega1");
  nonneg(r_pump, "r_pump");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  if (!(n_atoms >= 1.0)) throw std::invalid_argument("n_atoms must be >= 1");
  if (!(total_decay() > 0.0)) {
    throw std::invalid_argument("gamma31 + gamma32 must be > 0");
  }
}

void ProbeDrive::validate() const {
  if (!(amp_in >= 0.0) || !std::isfinite(amp_in)) {
    throw std::invalid_argument("amp_in must be >= 0");
  }
  if (!std::isfinite(delta_p) || !std::isfinite(phi)) {
    throw std::invalid_argument("drive fields must be finite");
  }
}

std::string to_string(ModelVariant v) {
  switch (v) {
    case ModelVariant::FullThreeLevel: return "full";
    case ModelVariant::ReducedThreeLevel: return "reduced";
    case ModelVariant::TwoLevelPumped: return "two-level";
    case ModelVariant::TwoLevelBare: return "two-level-bare";
  }
  return "unknown";
}

ModelVariant variant_from_string(const std::string& name) {
  if (name == "full") return ModelVariant::FullThreeLevel;
  if (name == "reduced") return ModelVariant::ReducedThreeLevel;
  if (name == "two-level") return ModelVariant::TwoLevelPumped;
  if (name == "two-level-bare") return ModelVariant::TwoLevelBare;
  throw std::invalid_argument("unknown variant: " + name);
}

SystemParams two_level_params(const SystemParams& p) {
  SystemParams q = p;
  q.gamma31 = p.total_decay();
  q.gamma32 = 0.0;
  q.omega1 = 0.0;
  return q;
}

}  // namespace cpa
