#ifndef WMTELE_OPERATORS_HPP
#define WMTELE_OPERATORS_HPP

// Named single-qubit operators: conditional flips, the two weak-measurement /
// reversal families, the three noise channels' Kraus pairs and Bob's
// teleportation corrections.

#include <array>
#include <string_view>
#include <variant>

#include "wmtele/tensor.hpp"

namespace wmtele {

enum class ProtocolKind { I, II };
enum class ChannelKind { ADC, BFC, PFC };

// Weak measurement strength omega in [0, pi] and reversal strength q in [0, 1].
struct ProtocolI {
  double omega;
  double q;
};

// Measurement and reversal strengths K1, K2 in [-1, 1].
struct ProtocolII {
  double k1;
  double k2;
};

class ProtocolParams {
 public:
  // Throws std::domain_error for out-of-range parameters.
  ProtocolParams(ProtocolI p);
  ProtocolParams(ProtocolII p);

  // Builds params from the two sweep axes of the given protocol
  // ((omega, q) or (K1, K2)).
  static ProtocolParams from_axes(ProtocolKind kind, double axis1, double axis2);

  ProtocolKind kind() const;
  const std::variant<ProtocolI, ProtocolII>& value() const { return value_; }

  // Sweep-axis view: (omega, q) or (K1, K2).
  double axis1() const;
  double axis2() const;

 private:
  std::variant<ProtocolI, ProtocolII> value_;
};

struct ChannelSpec {
  ChannelKind kind;
  double r;

  // Throws std::domain_error when r is outside [0, 1].
  static ChannelSpec make(ChannelKind kind, double r);
};

// sqrt((1 + k) / 2) and sqrt((1 - k) / 2).
double k_plus(double k);
double k_minus(double k);

QubitOperator pauli_x();
QubitOperator pauli_z();

// f0 = I, f1 = sigma_x. Throws std::invalid_argument for i outside {0, 1}.
QubitOperator flip(int i);

// Weak measurement element m_i.
QubitOperator wm(const ProtocolParams& params, int i);

// Reversal element n_i. For Protocol I the pair is a filter with
// n0^dag n0 + n1^dag n1 = (1 + q^2) I, not a complete POVM.
QubitOperator wmr(const ProtocolParams& params, int i);

using KrausPair = std::array<QubitOperator, 2>;
KrausPair kraus_set(const ChannelSpec& spec);

// Bob's Table-I correction: I, sigma_z, sigma_x, sigma_z sigma_x for
// outcomes 1..4. Throws std::out_of_range otherwise.
QubitOperator correction_unitary(int outcome);

std::string_view to_string(ProtocolKind kind);
std::string_view to_string(ChannelKind kind);

// Case-insensitive parsing ("I"/"II", "adc"/"bfc"/"pfc"); throws
// std::invalid_argument on anything else.
ProtocolKind parse_protocol(std::string_view text);
ChannelKind parse_channel(std::string_view text);

}  // namespace wmtele

#endif  // WMTELE_OPERATORS_HPP
