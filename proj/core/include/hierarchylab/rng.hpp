// core/include/hierarchylab/rng.hpp

// Copyright 2026   hierarchylab authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef HIERARCHYLAB_RNG_HPP_
#define HIERARCHYLAB_RNG_HPP_

#include <array>
#include <cstdint>

namespace hierarchylab {

// Counter-based generator: every output is a pure function of
// (key, counter), so any partition of work across threads reproduces the
// same values.  Sampling code addresses blocks as
// counter = (draw, stream, block, 0) with key = the split 64-bit seed;
// stream encodes layer index and value kind.
std::array<std::uint32_t, 4> philox4x32_10(std::uint32_t k0, std::uint32_t k1,
                                           std::uint32_t c0, std::uint32_t c1,
                                           std::uint32_t c2, std::uint32_t c3);

// Inverse standard normal CDF (Wichura's PPND16), |error| < 1e-15 on (0,1).
double inverse_normal_cdf(double u);

// out[i] = Phi^{-1}((x_i + 0.5) 2^-32) with x_i the i-th lane of the block
// at counter (draw, stream, i/4, 0).  Four normals per block; out[i] depends
// only on (seed, draw, stream, i).
void fill_normals(std::uint64_t seed, std::uint32_t draw, std::uint32_t stream,
                  double* out, int n);

// Sequential view of one (draw, stream) lane sequence, for samplers whose
// consumption count is data-dependent (rejection loops).
class SequentialRng {
 public:
  SequentialRng(std::uint64_t seed, std::uint32_t draw, std::uint32_t stream);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  double uniform();  // strictly inside (0,1)
  double normal();

 private:
  std::uint32_t k0_, k1_, c0_, c1_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int used_ = 4;
};

}  // namespace hierarchylab

#endif  // HIERARCHYLAB_RNG_HPP_
