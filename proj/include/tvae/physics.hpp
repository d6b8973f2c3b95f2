#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "tvae/point_cloud.hpp"
#include "tvae/rng.hpp"

namespace tvae::physics {

enum class System { oscillator, orbit, qubit };

std::string_view to_string(System s);
System parse_system(std::string_view name);

// A ball between two springs anchored at +1/2 and -1/2. Observations are the
// two ball-to-anchor distances and the velocity.
struct OscillatorConfig {
  double mass = 1.0;
  double k1 = 1.0;
  double k2 = 1.0;
  double amplitude = 0.25;

  double angular_frequency() const;
  double equilibrium() const;
  void validate() const;
};

// Two unit-radius balls circling the origin: ball 1 in the z=0 plane from
// (1,0,0), ball 2 in the y=0 plane from (0,0,1), at twice the speed. The
// observer rides on ball 2 without rotating.
struct OrbitConfig {
  double radius = 1.0;
  double omega1 = 1.0;
  double omega2 = 2.0;

  void validate() const;
};

using Complex = std::complex<double>;
// Row-major 2x2 complex matrix.
using Matrix2 = std::array<Complex, 4>;

struct QubitState {
  Complex a;
  Complex b;

  // a = cos(theta/2), b = e^{i phi} sin(theta/2).
  static QubitState from_angles(double theta, double phi);
  double norm_squared() const { return std::norm(a) + std::norm(b); }
};

// O1..O5: sigma_x, -sigma_y, sigma_z, O1 + O2, O3 + O2.
const std::array<Matrix2, 5>& observables();

bool is_hermitian(const Matrix2& m, double tol = 1e-12);

// Re<psi|O|psi>. Throws ConfigError for a non-Hermitian O and NumericError if
// the imaginary part exceeds 1e-12.
double expectation(const QubitState& state, const Matrix2& obs);

struct LabeledDataset {
  PointCloud observations;
  PointCloud hidden;
};

std::array<double, 3> oscillator_observation(const OscillatorConfig& cfg, double phase);
// E = m v^2/2 + k1 (x - 1/2)^2 / 2 + k2 (x + 1/2)^2 / 2 with x = x1 - 1/2.
double energy(std::span<const double> sample, const OscillatorConfig& cfg);

std::array<double, 3> orbit_observation(const OrbitConfig& cfg, double t);

std::array<double, 5> qubit_observation(const QubitState& state);

LabeledDataset gen_oscillator(const OscillatorConfig& cfg, std::size_t n, Rng& rng);
LabeledDataset gen_orbit(const OrbitConfig& cfg, std::size_t n, Rng& rng);
LabeledDataset gen_qubit(std::size_t n, Rng& rng);

// Default configuration for `system`, sampled from rng_stream(seed, "data").
// Metadata (system, seed, generator parameters) is attached to both clouds.
LabeledDataset generate(System system, std::size_t n, std::uint64_t seed);

}  // namespace tvae::physics
