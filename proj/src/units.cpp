#include "etwist/units.hpp"

#include "etwist/errors.hpp"

#include <cmath>

namespace etwist {

PhysicsContext PhysicsContext::neutron() { return {}; }

PhysicsContext PhysicsContext::custom(double gyromagnetic_ratio,
                                      double speed_of_light) {
  PhysicsContext ctx{gyromagnetic_ratio, speed_of_light, Particle::custom};
  ctx.validate();
  return ctx;
}

void PhysicsContext::validate() const {
  if (!(speed_of_light > 0.0) || !std::isfinite(speed_of_light))
    throw DomainError("speed_of_light must be positive and finite");
  if (gyromagnetic_ratio == 0.0 || !std::isfinite(gyromagnetic_ratio))
    throw DomainError("gyromagnetic_ratio must be nonzero and finite");
}

CouplingConstant coupling_constant(const PhysicsContext& ctx, double field) {
  ctx.validate();
  const double c2 = ctx.speed_of_light * ctx.speed_of_light;
  return {ctx.gyromagnetic_ratio * field / c2, field};
}

double full_twist_voltage(const PhysicsContext& ctx, double alpha) {
  ctx.validate();
  if (!(alpha > 0.0))
    throw DomainError("full_twist_voltage: divergence alpha must be > 0");
  const double c2 = ctx.speed_of_light * ctx.speed_of_light;
  return kPi * c2 / (std::abs(ctx.gyromagnetic_ratio) * alpha);
}

double twister_amplitude(const PhysicsContext& ctx, double field,
                         double length) {
  if (!(length >= 0.0))
    throw DomainError("twister_amplitude: length must be >= 0");
  const double c = coupling_constant(ctx, field).value;
  return std::abs(std::sin(c * length / 2.0));
}

} // namespace etwist
