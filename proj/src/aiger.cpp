#include "fraigbmc/aiger.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fraigbmc {

namespace {

struct Reader {
  std::string_view buf;
  size_t pos = 0;

  bool eof() const { return pos >= buf.size(); }
  int peek() const { return eof() ? -1 : static_cast<unsigned char>(buf[pos]); }
  int get() { return eof() ? -1 : static_cast<unsigned char>(buf[pos++]); }

  [[noreturn]] void fail(ParseErrorKind kind, const std::string &msg) const {
    throw ParseError(kind, pos, msg);
  }

  void skip_spaces() {
    if (peek() != ' ')
      fail(ParseErrorKind::MalformedHeader, "expected space");
    while (peek() == ' ')
      ++pos;
  }

  void expect_newline() {
    if (peek() == '\r')
      ++pos;
    if (get() != '\n')
      fail(ParseErrorKind::MalformedHeader, "expected end of line");
  }

  uint64_t read_uint(ParseErrorKind kind) {
    if (eof())
      fail(ParseErrorKind::Truncated, "unexpected end of file");
    if (peek() < '0' || peek() > '9')
      fail(kind, "expected a number");
    uint64_t value = 0;
    while (peek() >= '0' && peek() <= '9') {
      value = value * 10 + static_cast<uint64_t>(get() - '0');
      if (value > (1ull << 32))
        fail(kind, "number out of range");
    }
    return value;
  }
};

struct Header {
  bool binary = false;
  uint64_t m = 0, i = 0, l = 0, o = 0, a = 0, b = 0, c = 0;
};

Header read_header(Reader &r) {
  Header h;
  if (r.buf.substr(0, 3) == "aag")
    h.binary = false;
  else if (r.buf.substr(0, 3) == "aig")
    h.binary = true;
  else
    r.fail(ParseErrorKind::MalformedHeader, "not an AIGER file");
  r.pos = 3;

  uint64_t fields[9] = {};
  size_t count = 0;
  while (count < 9 && r.peek() == ' ') {
    r.skip_spaces();
    fields[count++] = r.read_uint(ParseErrorKind::MalformedHeader);
  }
  if (count < 5)
    r.fail(ParseErrorKind::MalformedHeader, "header needs M I L O A");
  r.expect_newline();

  h.m = fields[0];
  h.i = fields[1];
  h.l = fields[2];
  h.o = fields[3];
  h.a = fields[4];
  h.b = count > 5 ? fields[5] : 0;
  h.c = count > 6 ? fields[6] : 0;
  uint64_t j = count > 7 ? fields[7] : 0;
  uint64_t f = count > 8 ? fields[8] : 0;
  if (j > 0 || f > 0)
    r.fail(ParseErrorKind::UnsupportedSection,
           "justice/fairness sections are not supported");
  if (h.i + h.l + h.a > h.m)
    r.fail(ParseErrorKind::MalformedHeader, "M smaller than I+L+A");
  if (h.binary && h.i + h.l + h.a != h.m)
    r.fail(ParseErrorKind::MalformedHeader, "binary AIGER requires M = I+L+A");
  return h;
}

AigLiteral read_literal(Reader &r, uint64_t maxvar) {
  size_t at = r.pos;
  uint64_t raw = r.read_uint(ParseErrorKind::OutOfRangeLiteral);
  if (raw > 2 * maxvar + 1)
    throw ParseError(ParseErrorKind::OutOfRangeLiteral, at,
                     "literal " + std::to_string(raw) + " exceeds maxvar");
  return AigLiteral(static_cast<uint32_t>(raw));
}

LatchReset read_reset(Reader &r, uint64_t maxvar, AigLiteral state) {
  size_t at = r.pos;
  uint64_t raw = r.read_uint(ParseErrorKind::BadLatch);
  if (raw == 0)
    return LatchReset::Zero;
  if (raw == 1)
    return LatchReset::One;
  if (raw == state.raw())
    return LatchReset::Uninitialized;
  (void)maxvar;
  throw ParseError(ParseErrorKind::BadLatch, at,
                   "latch reset must be 0, 1 or the latch literal");
}

uint64_t read_varint(Reader &r) {
  uint64_t value = 0;
  unsigned shift = 0;
  for (;;) {
    int byte = r.get();
    if (byte < 0)
      r.fail(ParseErrorKind::Truncated, "truncated binary delta");
    value |= static_cast<uint64_t>(byte & 0x7f) << shift;
    if ((byte & 0x80) == 0)
      return value;
    shift += 7;
    if (shift > 35)
      r.fail(ParseErrorKind::NonTopological, "binary delta out of range");
  }
}

/// Sorts `ands` topologically (ASCII files may list gates in any order) and
/// rejects combinational cycles.
void topo_sort_gates(std::vector<AndGate> &ands, uint32_t maxvar,
                     const std::vector<size_t> &gate_offsets) {
  std::vector<int32_t> gate_idx(maxvar + 1, -1);
  for (size_t i = 0; i < ands.size(); ++i)
    gate_idx[ands[i].out.var()] = static_cast<int32_t>(i);

  enum : uint8_t { White, Grey, Black };
  std::vector<uint8_t> mark(ands.size(), White);
  std::vector<AndGate> sorted;
  sorted.reserve(ands.size());

  std::vector<std::pair<int32_t, int>> stack; // (gate index, next fanin)
  for (size_t root = 0; root < ands.size(); ++root) {
    if (mark[root] != White)
      continue;
    stack.emplace_back(static_cast<int32_t>(root), 0);
    mark[root] = Grey;
    while (!stack.empty()) {
      auto &[gi, phase] = stack.back();
      if (phase == 2) {
        mark[gi] = Black;
        sorted.push_back(ands[gi]);
        stack.pop_back();
        continue;
      }
      AigLiteral in = phase == 0 ? ands[gi].in0 : ands[gi].in1;
      ++phase;
      int32_t child = in.is_constant() ? -1 : gate_idx[in.var()];
      if (child < 0)
        continue;
      if (mark[child] == Grey)
        throw ParseError(ParseErrorKind::NonTopological, gate_offsets[gi],
                         "combinational cycle through gate literal " +
                             std::to_string(ands[gi].out.raw()));
      if (mark[child] == White) {
        mark[child] = Grey;
        stack.emplace_back(child, 0);
      }
    }
  }
  ands = std::move(sorted);
}

} // namespace

size_t AigNetwork::num_uninitialized_latches() const {
  size_t n = 0;
  for (const Latch &l : latches)
    n += l.reset == LatchReset::Uninitialized ? 1 : 0;
  return n;
}

void AigNetwork::finalize() {
  var_kinds_.assign(maxvar + 1, VarKind::Unused);
  var_pos_.assign(maxvar + 1, 0);
  var_kinds_[0] = VarKind::Constant;

  auto declare = [&](AigLiteral lit, VarKind kind, uint32_t pos,
                     const char *what) {
    if (lit.negated() || lit.is_constant())
      throw ParseError(ParseErrorKind::BadLatch, 0,
                       std::string(what) + " literal must be even and nonzero");
    if (lit.var() > maxvar)
      throw ParseError(ParseErrorKind::OutOfRangeLiteral, 0,
                       std::string(what) + " variable exceeds maxvar");
    if (var_kinds_[lit.var()] != VarKind::Unused)
      throw ParseError(ParseErrorKind::DuplicateDefinition, 0,
                       "variable " + std::to_string(lit.var()) +
                           " defined more than once");
    var_kinds_[lit.var()] = kind;
    var_pos_[lit.var()] = pos;
  };

  for (uint32_t i = 0; i < inputs.size(); ++i)
    declare(inputs[i], VarKind::Input, i, "input");
  for (uint32_t i = 0; i < latches.size(); ++i)
    declare(latches[i].state, VarKind::Latch, i, "latch");
  for (uint32_t i = 0; i < ands.size(); ++i)
    declare(ands[i].out, VarKind::Gate, i, "gate");

  auto check_ref = [&](AigLiteral lit, const char *what) {
    if (lit.var() > maxvar)
      throw ParseError(ParseErrorKind::OutOfRangeLiteral, 0,
                       std::string(what) + " literal exceeds maxvar");
    if (!lit.is_constant() && var_kinds_[lit.var()] == VarKind::Unused)
      throw ParseError(ParseErrorKind::UndefinedVariable, 0,
                       std::string(what) + " references undefined variable " +
                           std::to_string(lit.var()));
  };

  for (const Latch &l : latches)
    check_ref(l.next, "latch next-state");
  for (AigLiteral l : bads)
    check_ref(l, "bad");
  for (AigLiteral l : constraints)
    check_ref(l, "constraint");
  for (AigLiteral l : outputs)
    check_ref(l, "output");

  // Gates must appear after everything they read.
  std::vector<bool> seen(maxvar + 1, false);
  for (const AndGate &g : ands) {
    for (AigLiteral in : {g.in0, g.in1}) {
      check_ref(in, "gate input");
      if (!in.is_constant() && var_kinds_[in.var()] == VarKind::Gate &&
          !seen[in.var()])
        throw ParseError(ParseErrorKind::NonTopological, 0,
                         "gate list is not topologically sorted");
    }
    seen[g.out.var()] = true;
  }
}

AigNetwork parse_aiger(std::string_view bytes, bool adopt_outputs_as_bads) {
  Reader r{bytes};
  Header h = read_header(r);

  AigNetwork net;
  net.maxvar = static_cast<uint32_t>(h.m);
  net.inputs.reserve(h.i);
  net.latches.reserve(h.l);
  net.ands.reserve(h.a);

  if (!h.binary) {
    for (uint64_t i = 0; i < h.i; ++i) {
      AigLiteral lit = read_literal(r, h.m);
      r.expect_newline();
      net.inputs.push_back(lit);
    }
    for (uint64_t i = 0; i < h.l; ++i) {
      size_t at = r.pos;
      AigLiteral state = read_literal(r, h.m);
      if (state.negated() || state.is_constant())
        throw ParseError(ParseErrorKind::BadLatch, at,
                         "latch literal must be even and nonzero");
      r.skip_spaces();
      AigLiteral next = read_literal(r, h.m);
      LatchReset reset = LatchReset::Zero;
      if (r.peek() == ' ') {
        r.skip_spaces();
        reset = read_reset(r, h.m, state);
      }
      r.expect_newline();
      net.latches.push_back(Latch{state, next, reset});
    }
  } else {
    for (uint64_t i = 0; i < h.i; ++i)
      net.inputs.push_back(AigLiteral::of_var(static_cast<uint32_t>(i + 1)));
    for (uint64_t i = 0; i < h.l; ++i) {
      AigLiteral state = AigLiteral::of_var(static_cast<uint32_t>(h.i + i + 1));
      AigLiteral next = read_literal(r, h.m);
      LatchReset reset = LatchReset::Zero;
      if (r.peek() == ' ') {
        r.skip_spaces();
        reset = read_reset(r, h.m, state);
      }
      r.expect_newline();
      net.latches.push_back(Latch{state, next, reset});
    }
  }

  auto read_root_section = [&](uint64_t count, std::vector<AigLiteral> &out) {
    for (uint64_t i = 0; i < count; ++i) {
      out.push_back(read_literal(r, h.m));
      r.expect_newline();
    }
  };
  read_root_section(h.o, net.outputs);
  read_root_section(h.b, net.bads);
  read_root_section(h.c, net.constraints);

  std::vector<size_t> gate_offsets;
  gate_offsets.reserve(h.a);
  if (!h.binary) {
    for (uint64_t i = 0; i < h.a; ++i) {
      gate_offsets.push_back(r.pos);
      AigLiteral out = read_literal(r, h.m);
      if (out.negated() || out.is_constant())
        throw ParseError(ParseErrorKind::MalformedHeader, gate_offsets.back(),
                         "gate literal must be even and nonzero");
      r.skip_spaces();
      AigLiteral in0 = read_literal(r, h.m);
      r.skip_spaces();
      AigLiteral in1 = read_literal(r, h.m);
      r.expect_newline();
      net.ands.push_back(AndGate{out, in0, in1});
    }
    topo_sort_gates(net.ands, net.maxvar, gate_offsets);
  } else {
    for (uint64_t i = 0; i < h.a; ++i) {
      size_t at = r.pos;
      uint64_t lhs = 2 * (h.i + h.l + i + 1);
      uint64_t delta0 = read_varint(r);
      uint64_t delta1 = read_varint(r);
      if (delta0 == 0 || delta0 > lhs)
        throw ParseError(ParseErrorKind::NonTopological, at,
                         "binary delta violates lhs > rhs0");
      uint64_t rhs0 = lhs - delta0;
      if (delta1 > rhs0)
        throw ParseError(ParseErrorKind::NonTopological, at,
                         "binary delta violates rhs0 >= rhs1");
      uint64_t rhs1 = rhs0 - delta1;
      net.ands.push_back(AndGate{AigLiteral(static_cast<uint32_t>(lhs)),
                                 AigLiteral(static_cast<uint32_t>(rhs0)),
                                 AigLiteral(static_cast<uint32_t>(rhs1))});
    }
  }

  // Symbol table and comments, if any, are ignored.

  if (adopt_outputs_as_bads && net.bads.empty() && !net.outputs.empty()) {
    net.bads = net.outputs;
    net.outputs_adopted_as_bads = true;
  }

  net.finalize();
  return net;
}

AigNetwork load_aiger_file(const std::string &path,
                           bool adopt_outputs_as_bads) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_aiger(ss.str(), adopt_outputs_as_bads);
}

std::string write_aiger_ascii(const AigNetwork &net) {
  std::string out;
  out += "aag " + std::to_string(net.maxvar) + ' ' +
         std::to_string(net.inputs.size()) + ' ' +
         std::to_string(net.latches.size()) + ' ' +
         std::to_string(net.outputs.size()) + ' ' +
         std::to_string(net.ands.size());
  if (!net.bads.empty() || !net.constraints.empty()) {
    out += ' ' + std::to_string(net.bads.size());
    if (!net.constraints.empty())
      out += ' ' + std::to_string(net.constraints.size());
  }
  out += '\n';

  for (AigLiteral l : net.inputs)
    out += std::to_string(l.raw()) + '\n';
  for (const Latch &l : net.latches) {
    out += std::to_string(l.state.raw()) + ' ' + std::to_string(l.next.raw());
    if (l.reset == LatchReset::One)
      out += " 1";
    else if (l.reset == LatchReset::Uninitialized)
      out += ' ' + std::to_string(l.state.raw());
    out += '\n';
  }
  for (AigLiteral l : net.outputs)
    out += std::to_string(l.raw()) + '\n';
  for (AigLiteral l : net.bads)
    out += std::to_string(l.raw()) + '\n';
  for (AigLiteral l : net.constraints)
    out += std::to_string(l.raw()) + '\n';
  for (const AndGate &g : net.ands)
    out += std::to_string(g.out.raw()) + ' ' + std::to_string(g.in0.raw()) +
           ' ' + std::to_string(g.in1.raw()) + '\n';
  return out;
}

std::string write_aiger_binary(const AigNetwork &net) {
  // The binary format requires the compact variable layout: inputs first,
  // then latches, then gates, consecutively numbered and in file order.
  uint32_t next_var = 1;
  for (AigLiteral l : net.inputs)
    if (l.var() != next_var++)
      throw std::logic_error("network does not use the binary AIGER layout");
  for (const Latch &l : net.latches)
    if (l.state.var() != next_var++)
      throw std::logic_error("network does not use the binary AIGER layout");
  for (const AndGate &g : net.ands)
    if (g.out.var() != next_var++)
      throw std::logic_error("network does not use the binary AIGER layout");
  if (net.maxvar + 1 != next_var)
    throw std::logic_error("network does not use the binary AIGER layout");

  std::string out;
  out += "aig " + std::to_string(net.maxvar) + ' ' +
         std::to_string(net.inputs.size()) + ' ' +
         std::to_string(net.latches.size()) + ' ' +
         std::to_string(net.outputs.size()) + ' ' +
         std::to_string(net.ands.size());
  if (!net.bads.empty() || !net.constraints.empty()) {
    out += ' ' + std::to_string(net.bads.size());
    if (!net.constraints.empty())
      out += ' ' + std::to_string(net.constraints.size());
  }
  out += '\n';

  for (const Latch &l : net.latches) {
    out += std::to_string(l.next.raw());
    if (l.reset == LatchReset::One)
      out += " 1";
    else if (l.reset == LatchReset::Uninitialized)
      out += ' ' + std::to_string(l.state.raw());
    out += '\n';
  }
  for (AigLiteral l : net.outputs)
    out += std::to_string(l.raw()) + '\n';
  for (AigLiteral l : net.bads)
    out += std::to_string(l.raw()) + '\n';
  for (AigLiteral l : net.constraints)
    out += std::to_string(l.raw()) + '\n';

  auto put_varint = [&out](uint64_t v) {
    while (v & ~0x7full) {
      out += static_cast<char>(0x80 | (v & 0x7f));
      v >>= 7;
    }
    out += static_cast<char>(v);
  };
  for (const AndGate &g : net.ands) {
    uint32_t rhs0 = std::max(g.in0.raw(), g.in1.raw());
    uint32_t rhs1 = std::min(g.in0.raw(), g.in1.raw());
    put_varint(g.out.raw() - rhs0);
    put_varint(rhs0 - rhs1);
  }
  return out;
}

std::string write_witness(const Witness &w) {
  std::string out = "1\nb" + std::to_string(w.bad_index) + '\n';
  out += w.latch_row;
  out += '\n';
  for (const std::string &row : w.input_rows) {
    out += row;
    out += '\n';
  }
  out += ".\n";
  return out;
}

Witness parse_witness(std::string_view text, const AigNetwork &net) {
  Reader r{text};
  auto read_line = [&]() -> std::string {
    if (r.eof())
      r.fail(ParseErrorKind::BadWitness, "truncated witness");
    std::string line;
    while (!r.eof() && r.peek() != '\n')
      line += static_cast<char>(r.get());
    r.get(); // newline
    return line;
  };

  if (read_line() != "1")
    throw ParseError(ParseErrorKind::BadWitness, 0,
                     "witness must start with status line '1'");
  std::string prop = read_line();
  if (prop.size() < 2 || prop[0] != 'b')
    throw ParseError(ParseErrorKind::BadWitness, 0,
                     "expected bad-property line 'b<i>'");
  Witness w;
  w.bad_index = static_cast<uint32_t>(std::stoul(prop.substr(1)));
  if (w.bad_index >= net.bads.size())
    throw ParseError(ParseErrorKind::BadWitness, 0,
                     "bad-property index out of range");

  auto check_row = [&](const std::string &row, size_t width,
                       const char *what) {
    if (row.size() != width)
      throw ParseError(ParseErrorKind::BadWitness, 0,
                       std::string(what) + " row has wrong width");
    for (char c : row)
      if (c != '0' && c != '1' && c != 'x')
        throw ParseError(ParseErrorKind::BadWitness, 0,
                         std::string(what) + " row has invalid character");
  };

  w.latch_row = read_line();
  check_row(w.latch_row, net.latches.size(), "latch");
  for (;;) {
    std::string line = read_line();
    if (line == ".")
      break;
    check_row(line, net.inputs.size(), "input");
    w.input_rows.push_back(std::move(line));
  }
  if (w.input_rows.empty())
    throw ParseError(ParseErrorKind::BadWitness, 0,
                     "witness needs at least one input row");
  return w;
}

} // namespace fraigbmc
