// constellation.hpp - unit-energy symbol alphabets with Gray bit labeling
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "afdm/types.hpp"

namespace afdm {

enum class Modulation { bpsk, qam4, qam16 };

// Parses "bpsk", "4qam", "16qam" (case-sensitive). Throws on anything else.
Modulation parse_modulation(const std::string& name);
std::string modulation_name(Modulation mod);

// A fixed alphabet with average symbol energy exactly 1. Bit labels are
// Gray-coded per axis, so nearest-neighbor symbol errors flip one bit.
class Constellation {
 public:
  explicit Constellation(Modulation mod);

  Modulation modulation() const { return mod_; }
  int bits_per_symbol() const { return bits_; }
  int size() const { return static_cast<int>(points_.size()); }
  const std::vector<cplx>& points() const { return points_; }

  // Symbol for a bit group read LSB-first: group value b indexes the
  // alphabet directly, so map(slice_index(map(b))) == map(b).
  cplx map(unsigned group) const { return points_.at(group); }

  // Index of the alphabet point nearest to v (ties break toward the
  // lower index; exhaustive scan, alphabets are small).
  unsigned slice_index(cplx v) const;
  cplx slice(cplx v) const { return points_[slice_index(v)]; }

  // Packs bits (values 0/1, length divisible by bits_per_symbol) into
  // symbols, LSB of each group first.
  cvec modulate(const std::vector<std::uint8_t>& bits) const;

  // Hard decision back to bits; inverse of modulate on noiseless input.
  std::vector<std::uint8_t> demodulate(const cvec& symbols) const;

 private:
  Modulation mod_;
  int bits_ = 0;
  std::vector<cplx> points_;
};

}  // namespace afdm
