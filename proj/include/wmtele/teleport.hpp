#ifndef WMTELE_TELEPORT_HPP
#define WMTELE_TELEPORT_HPP

// Teleportation of one input qubit through a protected shared state.
//
// The joint register is (input, A, A, A, B). Alice measures her four qubits
// in the eta basis
//
//   eta1 = (|0000> + |0101> + |1010> + |1111>) / 2     Bob applies I
//   eta2 = (|0000> + |0101> - |1010> - |1111>) / 2     Bob applies Z
//   eta3 = (|0010> + |0111> + |1000> + |1101>) / 2     Bob applies X
//   eta4 = (|0010> + |0111> - |1000> - |1101>) / 2     Bob applies Z X
//
// and the outcome-weighted fidelity is F = sum_i Tr(rho_Bi) <in|rho_Ri|in>.

#include <array>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "wmtele/pipeline.hpp"
#include "wmtele/tensor.hpp"

namespace wmtele {

struct InputQubit {
  Complex alpha;
  Complex beta;

  // Throws std::domain_error unless |alpha|^2 + |beta|^2 = 1 within 1e-12.
  static InputQubit make(Complex alpha, Complex beta);

  PureState state() const;
};

struct MeasurementBasis {
  std::array<PureState, 4> eta;
};

const MeasurementBasis& eta_basis();

// Qubits of the joint register Alice measures.
inline constexpr std::array<int, 4> kAliceQubits = {0, 1, 2, 3};

// Outcomes below this probability get fidelity 0 and drop out of the sum.
inline constexpr double kNegligibleOutcome = 1e-14;

// Tolerated probability mass outside span{eta_i} (x) C^2.
inline constexpr double kSpanLeakTol = 1e-8;

struct TeleportOutcome {
  int index;  // 1..4
  double probability;
  MixedState bob_raw;        // unnormalized, trace = probability
  MixedState bob_corrected;  // normalized, after the correction unitary
  double fidelity;
};

struct TeleportResult {
  std::array<TeleportOutcome, 4> outcomes;
  double total_probability;
  double fidelity;  // sum_i probability_i * fidelity_i
};

// The joint state has weight outside the span of the eta basis.
class BasisLeakError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

TeleportResult teleport(const SharedState& shared, const InputQubit& input);

// How input states are averaged.
//
// Haar: uniform over the Bloch sphere, computed exactly as the mean over the
// six Pauli eigenstates (a 2-design; F is quadratic in |in><in|).
//
// RealAmplitude: real inputs cos(t)|0> + sin(t)|1>, t in [0, pi], weighted by
// sin(t)/2. Equivalently alpha = cos(t) is uniform on [-1, 1] and
// beta = sqrt(1 - alpha^2). This is the parameterization behind the published
// fidelity figures; it is not unitarily invariant. F restricted to these
// inputs is a degree-4 polynomial in alpha plus terms odd in alpha, so a
// 4-node Gauss-Legendre rule in alpha is exact.
enum class InputMeasure { Haar, RealAmplitude };

const std::vector<InputQubit>& design_points();

double average_fidelity(const SharedState& shared, InputMeasure measure = InputMeasure::Haar);

// Average fidelity with the channel alone (no weak measurement stages).
double unprotected_baseline(const ChannelSpec& channel, PipelineMode mode,
                            InputMeasure measure = InputMeasure::Haar);

std::string_view to_string(InputMeasure measure);
InputMeasure parse_measure(std::string_view text);

}  // namespace wmtele

#endif  // WMTELE_TELEPORT_HPP
