// constellation.cpp
#include "afdm/constellation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace afdm {

namespace {

// Two-bit Gray code onto amplitude levels {-3,-1,+1,+3}: consecutive
// levels differ in one bit.
double gray2_level(unsigned bits) {
  switch (bits & 3u) {
    case 0u: return -3.0;
    case 1u: return -1.0;
    case 3u: return 1.0;
    default: return 3.0;  // 2u
  }
}

}  // namespace

Modulation parse_modulation(const std::string& name) {
  if (name == "bpsk") return Modulation::bpsk;
  if (name == "4qam") return Modulation::qam4;
  if (name == "16qam") return Modulation::qam16;
  throw std::invalid_argument("unknown modulation \"" + name +
                              "\" (expected bpsk, 4qam, or 16qam)");
}

std::string modulation_name(Modulation mod) {
  switch (mod) {
    case Modulation::bpsk: return "bpsk";
    case Modulation::qam4: return "4qam";
    default: return "16qam";
  }
}

Constellation::Constellation(Modulation mod) : mod_(mod) {
  switch (mod) {
    case Modulation::bpsk:
      bits_ = 1;
      points_ = {cplx(1.0, 0.0), cplx(-1.0, 0.0)};
      break;
    case Modulation::qam4: {
      bits_ = 2;
      const double a = 1.0 / std::sqrt(2.0);
      points_.resize(4);
      for (unsigned g = 0; g < 4; ++g) {
        const double i = (g & 1u) ? a : -a;
        const double q = (g & 2u) ? a : -a;
        points_[g] = cplx(i, q);
      }
      break;
    }
    case Modulation::qam16: {
      bits_ = 4;
      const double a = 1.0 / std::sqrt(10.0);  // mean of {1,9} per axis is 5
      points_.resize(16);
      for (unsigned g = 0; g < 16; ++g) {
        const double i = a * gray2_level(g & 3u);
        const double q = a * gray2_level((g >> 2) & 3u);
        points_[g] = cplx(i, q);
      }
      break;
    }
  }
}

unsigned Constellation::slice_index(cplx v) const {
  unsigned best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (unsigned g = 0; g < points_.size(); ++g) {
    const double d = std::norm(v - points_[g]);
    if (d < best_d) {
      best_d = d;
      best = g;
    }
  }
  return best;
}

cvec Constellation::modulate(const std::vector<std::uint8_t>& bits) const {
  if (bits.size() % bits_ != 0)
    throw std::invalid_argument("modulate: bit count not divisible by " +
                                std::to_string(bits_));
  cvec symbols(bits.size() / bits_);
  for (Eigen::Index s = 0; s < symbols.size(); ++s) {
    unsigned group = 0;
    for (int b = 0; b < bits_; ++b)
      group |= static_cast<unsigned>(bits[s * bits_ + b] & 1u) << b;
    symbols[s] = points_[group];
  }
  return symbols;
}

std::vector<std::uint8_t> Constellation::demodulate(const cvec& symbols) const {
  std::vector<std::uint8_t> bits(symbols.size() * bits_);
  for (Eigen::Index s = 0; s < symbols.size(); ++s) {
    const unsigned group = slice_index(symbols[s]);
    for (int b = 0; b < bits_; ++b)
      bits[s * bits_ + b] = static_cast<std::uint8_t>((group >> b) & 1u);
  }
  return bits;
}

}  // namespace afdm
