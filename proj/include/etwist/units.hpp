#pragma once

namespace etwist {

// CODATA 2018. The neutron gyromagnetic ratio is negative (moment antiparallel
// to spin); the sign is carried through, magnitudes are used where only the
// rotation angle matters.
inline constexpr double kSpeedOfLight = 299792458.0;          // m s^-1
inline constexpr double kNeutronGyromagneticRatio = -1.83247171e8; // rad s^-1 T^-1

inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

enum class Particle { neutron, custom };

// Physical constants for one particle species.
//
// All spectral code works in scaled units where 2m/hbar^2 = 1: energies are
// squared wavenumbers and the Schwinger term reduces to C = gamma E / c^2 with
// C in m^-1. This struct is the only place SI quantities enter.
struct PhysicsContext {
  double gyromagnetic_ratio = kNeutronGyromagneticRatio;
  double speed_of_light = kSpeedOfLight;
  Particle particle = Particle::neutron;

  static PhysicsContext neutron();
  // Throws DomainError if c <= 0 or gamma == 0.
  static PhysicsContext custom(double gyromagnetic_ratio, double speed_of_light);

  void validate() const;
};

struct CouplingConstant {
  double value = 0.0;          // m^-1
  double field_strength = 0.0; // V m^-1
};

CouplingConstant coupling_constant(const PhysicsContext& ctx, double field);

// Field integral E*z (volts) that moves a Bessel beam of divergence alpha
// entirely from l = 0 into l = +-1.
double full_twist_voltage(const PhysicsContext& ctx, double alpha);

// OAM amplitude |sin(C L / 2)| acquired over a path length L in a transverse
// field. The rotation angle C k_r t with t = L / (2 k) is wavelength
// independent.
double twister_amplitude(const PhysicsContext& ctx, double field, double length);

} // namespace etwist
