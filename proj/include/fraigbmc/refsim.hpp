#pragma once

#include "fraigbmc/aiger.hpp"

#include <cstdint>
#include <vector>

namespace fraigbmc {

/// Bit-parallel multi-frame simulation of an AigNetwork straight from its
/// structure: 64 patterns per word, one column per pattern. Deliberately
/// independent of the solver and the unrolling/reduction path, so it can
/// serve as the reference for replay and soundness checks.
class FrameSimulator {
public:
  FrameSimulator(const AigNetwork &net, size_t words)
      : net_(net), words_(words) {}

  size_t words() const { return words_; }

  /// Assigns the simulation words of an input at a frame.
  void set_input(size_t frame, size_t input_idx, size_t word, uint64_t bits) {
    grow_frames(frame + 1);
    inputs_[frame][input_idx * words_ + word] = bits;
  }
  /// Assigns the frame-0 words of an uninitialized latch (by latch index).
  void set_initial_latch(size_t latch_idx, size_t word, uint64_t bits) {
    init_latches_[latch_idx * words_ + word] = bits;
  }

  /// Evaluates all variables for frames 0..nframes-1.
  void run(size_t nframes);

  uint64_t lit_word(size_t frame, AigLiteral lit, size_t word) const {
    uint64_t v = values_[frame][lit.var() * words_ + word];
    return lit.negated() ? ~v : v;
  }
  bool lit_bit(size_t frame, AigLiteral lit, size_t bit) const {
    return (lit_word(frame, lit, bit / 64) >> (bit % 64)) & 1;
  }

private:
  void grow_frames(size_t n) {
    while (inputs_.size() < n)
      inputs_.emplace_back(net_.inputs.size() * words_, 0);
    if (init_latches_.empty())
      init_latches_.assign(net_.latches.size() * words_, 0);
  }

  const AigNetwork &net_;
  size_t words_;
  std::vector<std::vector<uint64_t>> inputs_; // [frame][input*words+word]
  std::vector<uint64_t> init_latches_;        // [latch*words+word]
  std::vector<std::vector<uint64_t>> values_; // [frame][var*words+word]
};

} // namespace fraigbmc
