#ifndef WMTELE_ORACLE_HPP
#define WMTELE_ORACLE_HPP

// Brute-force reference implementation used to cross-check the main
// pipeline. Shares no code with it beyond the enums and Eigen storage:
// operators are rebuilt from their formulas, every lifted operator is a full
// 2^n x 2^n matrix filled entry by entry, and partial traces loop over the
// whole matrix.

#include <cstdint>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "wmtele/operators.hpp"
#include "wmtele/pipeline.hpp"

namespace wmtele::oracle {

using Mat = Eigen::MatrixXcd;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

struct Config {
  ProtocolKind protocol;
  double axis1;  // omega or K1
  double axis2;  // q or K2
  ChannelKind channel;
  double r;
  PipelineMode mode;

  std::string describe() const;
};

// id (x) ... (x) op (x) ... (x) id with op on `target` (qubit 0 leftmost).
Mat lifted(const Mat2& op, int num_qubits, int target);

// Traces out every qubit except the last one of an n-qubit density matrix.
Mat2 reduce_to_last(const Mat& rho, int num_qubits);

// Normalized 16x16 shared density matrix on (A, A, A, B). Throws
// std::domain_error when the pipeline annihilates the state.
Mat shared_density(const Config& config);

// The teleportation map rho_in -> sum_i U_i Tr_Alice[P_i (rho_in (x) rho) P_i] U_i^dag,
// stored by its images of the matrix units |a><b|.
struct TeleportMap {
  Mat2 image[2][2];

  Mat2 operator()(const Mat2& rho_in) const;
};

TeleportMap teleport_map(const Mat& shared);

// Outcome-weighted fidelity for one input, recomputed from scratch on the
// full 32-dimensional register.
double direct_fidelity(const Mat& shared, const Vec2& input);

// Exact Haar average from the second moment (I + SWAP) / 6.
double exact_haar_average(const TeleportMap& map);

struct McEstimate {
  double mean;
  double std_error;
  std::int64_t samples;
};

// Haar-random inputs (normalized complex Gaussian vectors).
McEstimate mc_haar_average(const TeleportMap& map, std::int64_t samples, std::uint64_t seed);

// Interior parameters and r in [0, 1].
Config random_config(std::mt19937_64& rng);

}  // namespace wmtele::oracle

#endif  // WMTELE_ORACLE_HPP
