#include "tvae/physics.hpp"

#include <cmath>
#include <numbers>

#include "tvae/error.hpp"

namespace tvae::physics {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_samples(std::size_t n) {
  if (n == 0) throw ConfigError("sample count must be at least 1");
}
}  // namespace

std::string_view to_string(System s) {
  switch (s) {
    case System::oscillator: return "oscillator";
    case System::orbit: return "orbit";
    case System::qubit: return "qubit";
  }
  return "unknown";
}

System parse_system(std::string_view name) {
  if (name == "oscillator") return System::oscillator;
  if (name == "orbit") return System::orbit;
  if (name == "qubit") return System::qubit;
  throw ConfigError("unknown system '" + std::string(name) + "' (expected oscillator, orbit or qubit)");
}

double OscillatorConfig::angular_frequency() const { return std::sqrt((k1 + k2) / mass); }

double OscillatorConfig::equilibrium() const { return 0.5 * (k1 - k2) / (k1 + k2); }

void OscillatorConfig::validate() const {
  if (!(mass > 0.0) || !(k1 > 0.0) || !(k2 > 0.0)) {
    throw ConfigError("oscillator mass and spring constants must be positive");
  }
  if (!(amplitude > 0.0) || std::abs(equilibrium()) + amplitude > 0.5) {
    throw ConfigError("oscillator amplitude must keep the ball between the anchors");
  }
}

void OrbitConfig::validate() const {
  if (!(radius > 0.0)) throw ConfigError("orbit radius must be positive");
  if (omega2 != 2.0 * omega1) throw ConfigError("orbit requires omega2 = 2 * omega1");
}

QubitState QubitState::from_angles(double theta, double phi) {
  return {Complex(std::cos(0.5 * theta), 0.0), std::polar(std::sin(0.5 * theta), phi)};
}

const std::array<Matrix2, 5>& observables() {
  static const std::array<Matrix2, 5> ops = {{
      {Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0)},
      {Complex(0, 0), Complex(0, 1), Complex(0, -1), Complex(0, 0)},
      {Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(-1, 0)},
      {Complex(0, 0), Complex(1, 1), Complex(1, -1), Complex(0, 0)},
      {Complex(1, 0), Complex(0, 1), Complex(0, -1), Complex(-1, 0)},
  }};
  return ops;
}

bool is_hermitian(const Matrix2& m, double tol) {
  return std::abs(m[0].imag()) <= tol && std::abs(m[3].imag()) <= tol &&
         std::abs(m[1] - std::conj(m[2])) <= tol;
}

double expectation(const QubitState& state, const Matrix2& obs) {
  if (!is_hermitian(obs)) throw ConfigError("observable is not Hermitian");
  const Complex top = obs[0] * state.a + obs[1] * state.b;
  const Complex bottom = obs[2] * state.a + obs[3] * state.b;
  const Complex value = std::conj(state.a) * top + std::conj(state.b) * bottom;
  if (std::abs(value.imag()) >= 1e-12) throw NumericError("expectation value has an imaginary part");
  return value.real();
}

std::array<double, 3> oscillator_observation(const OscillatorConfig& cfg, double phase) {
  const double x = cfg.equilibrium() + cfg.amplitude * std::cos(phase);
  const double v = -cfg.amplitude * cfg.angular_frequency() * std::sin(phase);
  return {x + 0.5, 0.5 - x, v};
}

double energy(std::span<const double> sample, const OscillatorConfig& cfg) {
  if (sample.size() != 3) throw ConfigError("oscillator sample must be (x1, x2, v)");
  const double x = sample[0] - 0.5;
  const double v = sample[2];
  return 0.5 * cfg.mass * v * v + 0.5 * cfg.k1 * (x - 0.5) * (x - 0.5) +
         0.5 * cfg.k2 * (x + 0.5) * (x + 0.5);
}

std::array<double, 3> orbit_observation(const OrbitConfig& cfg, double t) {
  const double r = cfg.radius;
  const double a1 = cfg.omega1 * t;
  const double a2 = cfg.omega2 * t;
  // ball 1 minus ball 2
  return {r * (std::cos(a1) - std::sin(a2)), r * std::sin(a1), -r * std::cos(a2)};
}

std::array<double, 5> qubit_observation(const QubitState& state) {
  std::array<double, 5> out{};
  const auto& ops = observables();
  for (std::size_t i = 0; i < ops.size(); ++i) out[i] = expectation(state, ops[i]);
  return out;
}

LabeledDataset gen_oscillator(const OscillatorConfig& cfg, std::size_t n, Rng& rng) {
  require_samples(n);
  cfg.validate();
  std::vector<double> obs, hidden;
  obs.reserve(3 * n);
  hidden.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double phase = rng.uniform(0.0, kTwoPi);
    auto o = oscillator_observation(cfg, phase);
    obs.insert(obs.end(), o.begin(), o.end());
    hidden.push_back(phase);
  }
  return {PointCloud(3, std::move(obs)), PointCloud(1, std::move(hidden), {}, {"phase"})};
}

LabeledDataset gen_orbit(const OrbitConfig& cfg, std::size_t n, Rng& rng) {
  require_samples(n);
  cfg.validate();
  std::vector<double> obs, hidden;
  obs.reserve(3 * n);
  hidden.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = rng.uniform(0.0, kTwoPi);
    auto o = orbit_observation(cfg, t);
    obs.insert(obs.end(), o.begin(), o.end());
    hidden.push_back(t);
  }
  return {PointCloud(3, std::move(obs)), PointCloud(1, std::move(hidden), {}, {"t"})};
}

LabeledDataset gen_qubit(std::size_t n, Rng& rng) {
  require_samples(n);
  std::vector<double> obs, hidden;
  obs.reserve(5 * n);
  hidden.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    // Haar measure on pure states: cos(theta) uniform on [-1, 1].
    const double theta = std::acos(rng.uniform(-1.0, 1.0));
    const double phi = rng.uniform(0.0, kTwoPi);
    auto o = qubit_observation(QubitState::from_angles(theta, phi));
    obs.insert(obs.end(), o.begin(), o.end());
    hidden.push_back(theta);
    hidden.push_back(phi);
  }
  return {PointCloud(5, std::move(obs)), PointCloud(2, std::move(hidden), {}, {"theta", "phi"})};
}

LabeledDataset generate(System system, std::size_t n, std::uint64_t seed) {
  auto rng = rng_stream(seed, "data");
  LabeledDataset ds;
  CloudMeta meta;
  meta.system = std::string(to_string(system));
  meta.seed = seed;
  switch (system) {
    case System::oscillator: {
      OscillatorConfig cfg;
      ds = gen_oscillator(cfg, n, rng);
      meta.params = {{"mass", format_double(cfg.mass)},
                     {"k1", format_double(cfg.k1)},
                     {"k2", format_double(cfg.k2)},
                     {"amplitude", format_double(cfg.amplitude)}};
      break;
    }
    case System::orbit: {
      OrbitConfig cfg;
      ds = gen_orbit(cfg, n, rng);
      meta.params = {{"radius", format_double(cfg.radius)},
                     {"omega1", format_double(cfg.omega1)},
                     {"omega2", format_double(cfg.omega2)}};
      break;
    }
    case System::qubit:
      ds = gen_qubit(n, rng);
      meta.params = {{"sampling", "haar"}};
      break;
  }
  ds.observations.meta() = meta;
  ds.hidden.meta() = meta;
  return ds;
}

}  // namespace tvae::physics
