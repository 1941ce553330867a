#ifndef WMTELE_PIPELINE_HPP
#define WMTELE_PIPELINE_HPP

// The protected resource: the four-qubit state (|0000>+|0101>+|1010>+|1111>)/2
// on qubits (A, A, A, B) whose last qubit is pushed through
//
//   weak measurement m_i -> flip f_i -> channel e_j -> flip f_i -> reversal n_i
//
// before Alice and Bob use it for teleportation.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wmtele/operators.hpp"
#include "wmtele/tensor.hpp"

namespace wmtele {

// PaperLiteral sums amplitudes coherently over the measurement outcome i and
// the Kraus index j, then normalizes. PhysicalMixed treats each outcome as a
// Born-weighted branch, applies the channel as a Kraus map and keeps the
// trace lost to the reversal filter as success probability.
enum class PipelineMode { PaperLiteral, PhysicalMixed };

inline constexpr int kResourceQubits = 4;
inline constexpr int kBobQubit = 3;

class SharedState {
 public:
  SharedState(PureState state);
  SharedState(MixedState state, double success_probability);

  PipelineMode mode() const;
  bool is_pure() const { return std::holds_alternative<PureState>(state_); }

  // Precondition: is_pure().
  const PureState& pure() const { return std::get<PureState>(state_); }

  // The density operator in either mode.
  MixedState density() const;

  // Trace retained by the reversal filter (PhysicalMixed only).
  std::optional<double> success_probability() const { return success_probability_; }

 private:
  std::variant<PureState, MixedState> state_;
  std::optional<double> success_probability_;
};

// Thrown when the pipeline annihilates the resource (e.g. q = 0 together
// with omega = 0 under phase flip noise).
class ZeroNormError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

PureState initial_state();

SharedState protect(const ProtocolParams& params, const ChannelSpec& channel, PipelineMode mode);

// The channel alone, with no measurement, flips or reversal.
SharedState transmit_unprotected(const ChannelSpec& channel, PipelineMode mode);

// Basis kets reachable from the resource when only Bob's qubit is touched:
// the four resource kets and their Bob-flipped partners.
inline constexpr std::array<std::size_t, 4> kResourceKets = {0b0000, 0b0101, 0b1010, 0b1111};
inline constexpr std::array<std::size_t, 4> kFlippedKets = {0b0001, 0b0100, 0b1011, 0b1110};

// Squared norm of the component of `s` outside `support`.
double residual_outside(const PureState& s, std::span<const std::size_t> support);
double residual_outside(const MixedState& rho, std::span<const std::size_t> support);

// One printed closed-form coefficient compared with the numeric pipeline.
struct ClosedFormEntry {
  std::string name;        // e.g. "lambda_ADC"
  std::string quantity;    // what was compared, e.g. "amp(0000)/amp(0100)"
  double printed;          // value of the printed expression
  double numeric;          // value measured on the PaperLiteral state
  double discrepancy;      // |printed - numeric|, or the residual for support checks
  bool pass;
};

struct ClosedFormReport {
  ProtocolKind protocol;
  ChannelSpec channel;
  std::vector<ClosedFormEntry> entries;
};

// Evaluates the printed final-state coefficients for the given protocol and
// channel and compares them, as amplitude ratios, with the PaperLiteral
// pipeline. The undefined symbol p in the bit-flip Protocol I coefficients
// is read as r. Mismatches are reported, never thrown.
ClosedFormReport closed_form_check(const ProtocolParams& params, const ChannelSpec& channel);

std::string_view to_string(PipelineMode mode);
PipelineMode parse_mode(std::string_view text);

}  // namespace wmtele

#endif  // WMTELE_PIPELINE_HPP
