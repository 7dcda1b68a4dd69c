#include "fraigbmc/refsim.hpp"

namespace fraigbmc {

void FrameSimulator::run(size_t nframes) {
  grow_frames(nframes);
  values_.assign(nframes, {});
  for (size_t f = 0; f < nframes; ++f) {
    auto &vals = values_[f];
    vals.assign((net_.maxvar + 1) * words_, 0);

    for (size_t i = 0; i < net_.inputs.size(); ++i) {
      uint32_t var = net_.inputs[i].var();
      for (size_t w = 0; w < words_; ++w)
        vals[var * words_ + w] = inputs_[f][i * words_ + w];
    }
    for (size_t i = 0; i < net_.latches.size(); ++i) {
      const Latch &l = net_.latches[i];
      uint32_t var = l.state.var();
      for (size_t w = 0; w < words_; ++w) {
        uint64_t bits;
        if (f == 0) {
          switch (l.reset) {
          case LatchReset::Zero:
            bits = 0;
            break;
          case LatchReset::One:
            bits = ~0ull;
            break;
          case LatchReset::Uninitialized:
            bits = init_latches_[i * words_ + w];
            break;
          }
        } else {
          bits = lit_word(f - 1, l.next, w);
        }
        vals[var * words_ + w] = bits;
      }
    }
    for (const AndGate &g : net_.ands) {
      uint32_t var = g.out.var();
      for (size_t w = 0; w < words_; ++w)
        vals[var * words_ + w] = lit_word(f, g.in0, w) & lit_word(f, g.in1, w);
    }
  }
}

} // namespace fraigbmc
