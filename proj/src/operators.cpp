#include "wmtele/operators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wmtele {

namespace {

bool in_range(double x, double lo, double hi) { return std::isfinite(x) && x >= lo && x <= hi; }

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

void check_bit(int i) {
  if (i != 0 && i != 1) throw std::invalid_argument("outcome bit must be 0 or 1");
}

QubitOperator diag(double a, double b) {
  QubitOperator m = QubitOperator::Zero();
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

ProtocolParams::ProtocolParams(ProtocolI p) : value_(p) {
  if (!in_range(p.omega, 0.0, std::numbers::pi)) throw std::domain_error("omega outside [0, pi]");
  if (!in_range(p.q, 0.0, 1.0)) throw std::domain_error("q outside [0, 1]");
}

ProtocolParams::ProtocolParams(ProtocolII p) : value_(p) {
  if (!in_range(p.k1, -1.0, 1.0)) throw std::domain_error("K1 outside [-1, 1]");
  if (!in_range(p.k2, -1.0, 1.0)) throw std::domain_error("K2 outside [-1, 1]");
}

ProtocolParams ProtocolParams::from_axes(ProtocolKind kind, double axis1, double axis2) {
  if (kind == ProtocolKind::I) return ProtocolParams(ProtocolI{axis1, axis2});
  return ProtocolParams(ProtocolII{axis1, axis2});
}

ProtocolKind ProtocolParams::kind() const {
  return std::holds_alternative<ProtocolI>(value_) ? ProtocolKind::I : ProtocolKind::II;
}

double ProtocolParams::axis1() const {
  if (const auto* p = std::get_if<ProtocolI>(&value_)) return p->omega;
  return std::get<ProtocolII>(value_).k1;
}

double ProtocolParams::axis2() const {
  if (const auto* p = std::get_if<ProtocolI>(&value_)) return p->q;
  return std::get<ProtocolII>(value_).k2;
}

ChannelSpec ChannelSpec::make(ChannelKind kind, double r) {
  if (!in_range(r, 0.0, 1.0)) throw std::domain_error("decoherence strength r outside [0, 1]");
  return {kind, r};
}

double k_plus(double k) { return std::sqrt((1.0 + k) / 2.0); }
double k_minus(double k) { return std::sqrt((1.0 - k) / 2.0); }

QubitOperator pauli_x() {
  QubitOperator m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

QubitOperator pauli_z() { return diag(1.0, -1.0); }

QubitOperator flip(int i) {
  check_bit(i);
  return i == 0 ? QubitOperator::Identity() : pauli_x();
}

QubitOperator wm(const ProtocolParams& params, int i) {
  check_bit(i);
  if (const auto* p = std::get_if<ProtocolI>(&params.value())) {
    const double c = std::cos(p->omega / 2.0);
    const double s = std::sin(p->omega / 2.0);
    return i == 0 ? diag(c, s) : diag(s, c);
  }
  const auto& p = std::get<ProtocolII>(params.value());
  const double kp = k_plus(p.k1);
  const double km = k_minus(p.k1);
  return i == 0 ? diag(kp, km) : diag(km, kp);
}

QubitOperator wmr(const ProtocolParams& params, int i) {
  check_bit(i);
  if (const auto* p = std::get_if<ProtocolI>(&params.value())) {
    return i == 0 ? diag(p->q, 1.0) : diag(1.0, p->q);
  }
  const auto& p = std::get<ProtocolII>(params.value());
  const double kp = k_plus(p.k2);
  const double km = k_minus(p.k2);
  return i == 0 ? diag(kp, km) : diag(km, kp);
}

KrausPair kraus_set(const ChannelSpec& spec) {
  if (!in_range(spec.r, 0.0, 1.0)) throw std::domain_error("decoherence strength r outside [0, 1]");
  const double keep = std::sqrt(1.0 - spec.r);
  const double hit = std::sqrt(spec.r);
  switch (spec.kind) {
    case ChannelKind::ADC: {
      QubitOperator decay = QubitOperator::Zero();
      decay(0, 1) = hit;
      return {diag(1.0, keep), decay};
    }
    case ChannelKind::BFC:
      return {keep * QubitOperator::Identity(), hit * pauli_x()};
    case ChannelKind::PFC:
      return {keep * QubitOperator::Identity(), hit * pauli_z()};
  }
  throw std::invalid_argument("unknown channel kind");
}

QubitOperator correction_unitary(int outcome) {
  switch (outcome) {
    case 1:
      return QubitOperator::Identity();
    case 2:
      return pauli_z();
    case 3:
      return pauli_x();
    case 4:
      return pauli_z() * pauli_x();
    default:
      throw std::out_of_range("teleportation outcome must be in 1..4");
  }
}

std::string_view to_string(ProtocolKind kind) { return kind == ProtocolKind::I ? "I" : "II"; }

std::string_view to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::ADC:
      return "adc";
    case ChannelKind::BFC:
      return "bfc";
    case ChannelKind::PFC:
      return "pfc";
  }
  return "?";
}

ProtocolKind parse_protocol(std::string_view text) {
  const auto t = lower(text);
  if (t == "i" || t == "1") return ProtocolKind::I;
  if (t == "ii" || t == "2") return ProtocolKind::II;
  throw std::invalid_argument("unknown protocol '" + std::string(text) + "' (expected I or II)");
}

ChannelKind parse_channel(std::string_view text) {
  const auto t = lower(text);
  if (t == "adc") return ChannelKind::ADC;
  if (t == "bfc") return ChannelKind::BFC;
  if (t == "pfc") return ChannelKind::PFC;
  throw std::invalid_argument("unknown channel '" + std::string(text) + "' (expected adc, bfc or pfc)");
}

}  // namespace wmtele
