// Copyright 2026 The Forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "forge/sim/simulator.h"

#include <algorithm>
#include <bit>
#include <cctype>

#include "forge/util/error.h"
#include "forge/verilog/semantic.h"

namespace forge::sim {

using verilog::Direction;
using verilog::Expr;
using verilog::ExprKind;
using verilog::NetType;
using verilog::Stmt;
using verilog::StmtKind;

namespace {

constexpr int kMaxCombPasses = 256;
constexpr int kMaxEdgeRounds = 64;

uint64_t mask(int w) { return w >= 64 ? ~0ULL : ((1ULL << w) - 1); }

enum class Op {
  kSignal, kConst, kNot, kNeg, kPlus, kLogNot,
  kRedAnd, kRedOr, kRedXor, kRedNand, kRedNor, kRedXnor,
  kAdd, kSub, kMul, kDiv, kMod, kPow, kAnd, kOr, kXor, kXnor, kShl, kShr,
  kEq, kNe, kLt, kLe, kGt, kGe, kLAnd, kLOr,
  kTernary, kConcat, kReplicate, kBitSel, kArrayElem, kPartSel,
};

struct Node {
  Op op = Op::kConst;
  int self = 1;
  int sig = -1;
  uint64_t value = 0;  // constant; replicate count; part-select offset
  std::vector<Node> args;
};

struct SignalInfo {
  std::string name;
  int width = 1;
  int64_t right = 0;  // index of the least significant bit
  bool descending = true;
  int64_t array_lo = 0;
  size_t array_len = 0;  // 0 for plain vectors
  size_t offset = 0;     // into the flat value store
  Direction direction = Direction::kNone;
  bool variable = false;

  size_t slots() const { return array_len == 0 ? 1 : array_len; }
  // Bit position for a declared index, or -1 when out of range.
  int64_t position(int64_t index) const {
    const int64_t p = descending ? index - right : right - index;
    return p >= 0 && p < width ? p : -1;
  }
};

enum class TargetKind { kWhole, kBit, kElem, kPart };

struct Target {
  TargetKind kind = TargetKind::kWhole;
  int sig = -1;
  int width = 1;
  int lo = 0;
  std::vector<Node> index;  // at most one
};

struct Lhs {
  std::vector<Target> parts;  // most significant first
  int width = 0;
};

struct Write {
  size_t slot = 0;
  int lo = 0;
  int width = 0;
  uint64_t value = 0;
};

struct SNode {
  StmtKind kind = StmtKind::kNull;
  Lhs lhs;
  Node expr;
  std::vector<SNode> body;
  std::vector<std::vector<Node>> labels;  // case items; empty = default
};

struct Trigger {
  int sig = -1;
  bool posedge = true;
};

struct Process {
  SNode body;
  std::vector<Trigger> triggers;
};

struct Continuous {
  Lhs lhs;
  Node rhs;
};

bool is_reset_name(const std::string& name) {
  std::string n;
  for (char c : name) n.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return n.find("rst") != std::string::npos || n.find("reset") != std::string::npos ||
         n.find("clr") != std::string::npos || n.find("clear") != std::string::npos;
}

bool is_clock_name(const std::string& name) {
  std::string n;
  for (char c : name) n.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return n.find("clk") != std::string::npos || n.find("clock") != std::string::npos;
}

bool active_low_name(const std::string& name) {
  std::string n;
  for (char c : name) n.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return n.ends_with("_n") || n.ends_with("rstn") || n.ends_with("resetn") ||
         n.ends_with("_b") || n.ends_with("clrn");
}

}  // namespace

struct Simulator::Impl {
  std::vector<SignalInfo> signals;
  std::unordered_map<std::string, int> index;
  verilog::ParamMap params;
  std::vector<PortInfo> ports;
  std::vector<uint64_t> mem;
  std::vector<Continuous> continuous;
  std::vector<Process> comb;
  std::vector<Process> seq;
  std::vector<int> tracked;       // signals with edge triggers
  std::vector<uint64_t> last;     // previous level of each tracked signal

  [[noreturn]] static void unsupported(const std::string& what) {
    throw Error(ErrorCode::kInvalidArgument, "simulator: unsupported " + what);
  }

  int lookup(const std::string& name) const {
    auto it = index.find(name);
    return it == index.end() ? -1 : it->second;
  }

  int64_t const_int(const Expr& e) const {
    auto v = verilog::eval_const(e, params);
    if (!v) unsupported("non-constant expression '" + e.text + "'");
    return static_cast<int64_t>(*v);
  }

  void add_signal(const verilog::Symbol& sym) {
    SignalInfo s;
    s.name = sym.name;
    s.direction = sym.direction;
    s.variable = sym.is_variable();
    if (sym.type == NetType::kInteger) {
      s.width = 32;
    } else if (sym.range) {
      const int64_t msb = const_int(sym.range->msb);
      const int64_t lsb = const_int(sym.range->lsb);
      const int64_t w = (msb >= lsb ? msb - lsb : lsb - msb) + 1;
      if (w > 64) unsupported("vector wider than 64 bits: " + sym.name);
      s.width = static_cast<int>(w);
      s.right = lsb;
      s.descending = msb >= lsb;
    }
    if (sym.array) {
      const int64_t a = const_int(sym.array->msb);
      const int64_t b = const_int(sym.array->lsb);
      s.array_lo = std::min(a, b);
      s.array_len = static_cast<size_t>((a > b ? a - b : b - a) + 1);
      if (s.array_len > (1u << 16)) unsupported("array larger than 65536 words");
    }
    s.offset = mem.size();
    mem.resize(mem.size() + s.slots(), 0);
    index[s.name] = static_cast<int>(signals.size());
    signals.push_back(std::move(s));
  }

  Node compile(const Expr& e) const {
    Node n;
    switch (e.kind) {
      case ExprKind::kIdentifier: {
        const int sig = lookup(e.text);
        if (sig < 0) {
          auto p = params.find(e.text);
          if (p == params.end()) unsupported("identifier '" + e.text + "'");
          n.op = Op::kConst;
          n.value = p->second;
          n.self = p->second >> 32 ? 64 : 32;
          return n;
        }
        if (signals[sig].array_len) unsupported("whole-array reference '" + e.text + "'");
        n.op = Op::kSignal;
        n.sig = sig;
        n.self = signals[sig].width;
        return n;
      }
      case ExprKind::kNumber: {
        auto lit = verilog::parse_literal(e.text);
        if (!lit) unsupported("literal '" + e.text + "'");
        n.op = Op::kConst;
        n.self = std::min(lit->width, 64);
        n.value = lit->value & mask(n.self);
        return n;
      }
      case ExprKind::kUnary: {
        n.args.push_back(compile(e.args[0]));
        const int a = n.args[0].self;
        const std::string& o = e.text;
        n.self = 1;
        if (o == "~") n.op = Op::kNot, n.self = a;
        else if (o == "-") n.op = Op::kNeg, n.self = a;
        else if (o == "+") n.op = Op::kPlus, n.self = a;
        else if (o == "!") n.op = Op::kLogNot;
        else if (o == "&") n.op = Op::kRedAnd;
        else if (o == "|") n.op = Op::kRedOr;
        else if (o == "^") n.op = Op::kRedXor;
        else if (o == "~&") n.op = Op::kRedNand;
        else if (o == "~|") n.op = Op::kRedNor;
        else if (o == "~^" || o == "^~") n.op = Op::kRedXnor;
        else unsupported("unary operator '" + o + "'");
        return n;
      }
      case ExprKind::kBinary: {
        n.args.push_back(compile(e.args[0]));
        n.args.push_back(compile(e.args[1]));
        const int a = n.args[0].self;
        const int b = n.args[1].self;
        const std::string& o = e.text;
        struct Entry { const char* text; Op op; int kind; };  // 0 ctx, 1 lhs, 2 bool
        static const Entry kTable[] = {
            {"+", Op::kAdd, 0},  {"-", Op::kSub, 0},   {"*", Op::kMul, 0},
            {"/", Op::kDiv, 0},  {"%", Op::kMod, 0},   {"**", Op::kPow, 1},
            {"&", Op::kAnd, 0},  {"|", Op::kOr, 0},    {"^", Op::kXor, 0},
            {"~^", Op::kXnor, 0}, {"^~", Op::kXnor, 0}, {"<<", Op::kShl, 1},
            {">>", Op::kShr, 1}, {"<<<", Op::kShl, 1}, {">>>", Op::kShr, 1},
            {"==", Op::kEq, 2},  {"!=", Op::kNe, 2},   {"===", Op::kEq, 2},
            {"!==", Op::kNe, 2}, {"<", Op::kLt, 2},    {"<=", Op::kLe, 2},
            {">", Op::kGt, 2},   {">=", Op::kGe, 2},   {"&&", Op::kLAnd, 2},
            {"||", Op::kLOr, 2},
        };
        for (const auto& entry : kTable) {
          if (o != entry.text) continue;
          n.op = entry.op;
          n.self = entry.kind == 0 ? std::max(a, b) : entry.kind == 1 ? a : 1;
          return n;
        }
        unsupported("binary operator '" + o + "'");
      }
      case ExprKind::kTernary: {
        for (const auto& a : e.args) n.args.push_back(compile(a));
        n.op = Op::kTernary;
        n.self = std::max(n.args[1].self, n.args[2].self);
        return n;
      }
      case ExprKind::kConcat: {
        n.op = Op::kConcat;
        int w = 0;
        for (const auto& a : e.args) {
          n.args.push_back(compile(a));
          w += n.args.back().self;
        }
        n.self = std::min(w, 64);
        return n;
      }
      case ExprKind::kReplicate: {
        n.op = Op::kReplicate;
        const int64_t count = const_int(e.args[0]);
        if (count < 0 || count > 64) unsupported("replication count");
        n.value = static_cast<uint64_t>(count);
        int w = 0;
        for (size_t i = 1; i < e.args.size(); ++i) {
          n.args.push_back(compile(e.args[i]));
          w += n.args.back().self;
        }
        n.self = static_cast<int>(std::min<int64_t>(w * count, 64));
        if (n.self == 0) n.self = 1;
        return n;
      }
      case ExprKind::kIndex: {
        const int sig = lookup(e.text);
        if (sig < 0) unsupported("select of '" + e.text + "'");
        n.sig = sig;
        n.args.push_back(compile(e.args[0]));
        if (signals[sig].array_len) {
          n.op = Op::kArrayElem;
          n.self = signals[sig].width;
        } else {
          n.op = Op::kBitSel;
          n.self = 1;
        }
        return n;
      }
      case ExprKind::kRangeSelect: {
        const int sig = lookup(e.text);
        if (sig < 0 || signals[sig].array_len) unsupported("part select of '" + e.text + "'");
        const SignalInfo& s = signals[sig];
        const int64_t msb = const_int(e.args[0]);
        const int64_t lsb = const_int(e.args[1]);
        const int64_t lo = s.position(lsb);
        const int64_t hi = s.position(msb);
        if (lo < 0 || hi < 0 || hi < lo) unsupported("part select range on '" + e.text + "'");
        n.op = Op::kPartSel;
        n.sig = sig;
        n.value = static_cast<uint64_t>(lo);
        n.self = static_cast<int>(hi - lo + 1);
        return n;
      }
    }
    unsupported("expression");
  }

  Target compile_target(const Expr& e) const {
    Target t;
    const int sig = lookup(e.text);
    if (sig < 0) unsupported("assignment target '" + e.text + "'");
    const SignalInfo& s = signals[sig];
    t.sig = sig;
    switch (e.kind) {
      case ExprKind::kIdentifier:
        if (s.array_len) unsupported("whole-array assignment");
        t.kind = TargetKind::kWhole;
        t.width = s.width;
        break;
      case ExprKind::kIndex:
        t.kind = s.array_len ? TargetKind::kElem : TargetKind::kBit;
        t.width = s.array_len ? s.width : 1;
        t.index.push_back(compile(e.args[0]));
        break;
      case ExprKind::kRangeSelect: {
        const int64_t lo = s.position(const_int(e.args[1]));
        const int64_t hi = s.position(const_int(e.args[0]));
        if (lo < 0 || hi < lo) unsupported("part-select target");
        t.kind = TargetKind::kPart;
        t.lo = static_cast<int>(lo);
        t.width = static_cast<int>(hi - lo + 1);
        break;
      }
      default:
        unsupported("assignment target");
    }
    return t;
  }

  Lhs compile_lhs(const Expr& e) const {
    Lhs lhs;
    if (e.kind == ExprKind::kConcat) {
      for (const auto& a : e.args) lhs.parts.push_back(compile_target(a));
    } else {
      lhs.parts.push_back(compile_target(e));
    }
    for (const auto& p : lhs.parts) lhs.width += p.width;
    lhs.width = std::min(lhs.width, 64);
    return lhs;
  }

  SNode compile_stmt(const Stmt& s) const {
    SNode n;
    n.kind = s.kind;
    switch (s.kind) {
      case StmtKind::kBlock:
        for (const auto& c : s.body) n.body.push_back(compile_stmt(c));
        break;
      case StmtKind::kIf:
        n.expr = compile(s.rhs);
        for (const auto& c : s.body) n.body.push_back(compile_stmt(c));
        break;
      case StmtKind::kCase:
        n.expr = compile(s.rhs);
        for (const auto& item : s.items) {
          std::vector<Node> labels;
          for (const auto& l : item.labels) labels.push_back(compile(l));
          n.labels.push_back(std::move(labels));
          n.body.push_back(compile_stmt(item.body));
        }
        break;
      case StmtKind::kBlockingAssign:
      case StmtKind::kNonblockingAssign:
        n.lhs = compile_lhs(s.lhs);
        n.expr = compile(s.rhs);
        break;
      case StmtKind::kNull:
        break;
    }
    return n;
  }

  uint64_t eval(const Node& n, int ctx) const {
    const int w = std::min(64, std::max(ctx, n.self));
    const uint64_t m = mask(w);
    auto arg = [&](size_t i) { return eval(n.args[i], w); };
    auto self = [&](size_t i) { return eval(n.args[i], n.args[i].self); };
    auto cmp_width = [&] { return std::max(n.args[0].self, n.args[1].self); };
    switch (n.op) {
      case Op::kSignal: return mem[signals[n.sig].offset] & m;
      case Op::kConst: return n.value & m;
      case Op::kNot: return ~arg(0) & m;
      case Op::kNeg: return (0 - arg(0)) & m;
      case Op::kPlus: return arg(0);
      case Op::kLogNot: return self(0) == 0;
      case Op::kRedAnd: return self(0) == mask(n.args[0].self);
      case Op::kRedOr: return self(0) != 0;
      case Op::kRedXor: return std::popcount(self(0)) & 1;
      case Op::kRedNand: return self(0) != mask(n.args[0].self);
      case Op::kRedNor: return self(0) == 0;
      case Op::kRedXnor: return (std::popcount(self(0)) & 1) ^ 1;
      case Op::kAdd: return (arg(0) + arg(1)) & m;
      case Op::kSub: return (arg(0) - arg(1)) & m;
      case Op::kMul: return (arg(0) * arg(1)) & m;
      case Op::kDiv: {
        const uint64_t d = arg(1);
        return d == 0 ? 0 : (arg(0) / d) & m;
      }
      case Op::kMod: {
        const uint64_t d = arg(1);
        return d == 0 ? 0 : (arg(0) % d) & m;
      }
      case Op::kPow: {
        uint64_t base = arg(0);
        uint64_t e = self(1);
        uint64_t r = 1;
        while (e) {
          if (e & 1) r *= base;
          base *= base;
          e >>= 1;
        }
        return r & m;
      }
      case Op::kAnd: return arg(0) & arg(1);
      case Op::kOr: return arg(0) | arg(1);
      case Op::kXor: return arg(0) ^ arg(1);
      case Op::kXnor: return ~(arg(0) ^ arg(1)) & m;
      case Op::kShl: {
        const uint64_t s = self(1);
        return s >= 64 ? 0 : (arg(0) << s) & m;
      }
      case Op::kShr: {
        const uint64_t s = self(1);
        return s >= 64 ? 0 : arg(0) >> s;
      }
      case Op::kEq: { const int c = cmp_width(); return eval(n.args[0], c) == eval(n.args[1], c); }
      case Op::kNe: { const int c = cmp_width(); return eval(n.args[0], c) != eval(n.args[1], c); }
      case Op::kLt: { const int c = cmp_width(); return eval(n.args[0], c) < eval(n.args[1], c); }
      case Op::kLe: { const int c = cmp_width(); return eval(n.args[0], c) <= eval(n.args[1], c); }
      case Op::kGt: { const int c = cmp_width(); return eval(n.args[0], c) > eval(n.args[1], c); }
      case Op::kGe: { const int c = cmp_width(); return eval(n.args[0], c) >= eval(n.args[1], c); }
      case Op::kLAnd: return self(0) != 0 && self(1) != 0;
      case Op::kLOr: return self(0) != 0 || self(1) != 0;
      case Op::kTernary: return self(0) != 0 ? eval(n.args[1], w) : eval(n.args[2], w);
      case Op::kConcat:
      case Op::kReplicate: {
        uint64_t item = 0;
        int item_width = 0;
        for (size_t i = 0; i < n.args.size(); ++i) {
          const int aw = n.args[i].self;
          item = aw >= 64 ? 0 : item << aw;
          item |= self(i);
          item_width += aw;
        }
        if (n.op == Op::kConcat) return item & m;
        uint64_t r = 0;
        for (uint64_t k = 0; k < n.value; ++k) {
          r = item_width >= 64 ? 0 : r << item_width;
          r |= item;
        }
        return r & m;
      }
      case Op::kBitSel: {
        const SignalInfo& s = signals[n.sig];
        const int64_t p = s.position(static_cast<int64_t>(self(0)));
        return p < 0 ? 0 : (mem[s.offset] >> p) & 1;
      }
      case Op::kArrayElem: {
        const SignalInfo& s = signals[n.sig];
        const int64_t e = static_cast<int64_t>(self(0)) - s.array_lo;
        if (e < 0 || static_cast<size_t>(e) >= s.array_len) return 0;
        return mem[s.offset + static_cast<size_t>(e)] & m;
      }
      case Op::kPartSel: {
        const SignalInfo& s = signals[n.sig];
        return (mem[s.offset] >> n.value) & mask(n.self) & m;
      }
    }
    return 0;
  }

  void resolve(const Lhs& lhs, uint64_t value, std::vector<Write>& out) const {
    for (size_t i = lhs.parts.size(); i-- > 0;) {
      const Target& t = lhs.parts[i];
      const SignalInfo& s = signals[t.sig];
      Write w;
      w.width = t.width;
      w.value = value & mask(t.width);
      w.slot = s.offset;
      value = t.width >= 64 ? 0 : value >> t.width;
      switch (t.kind) {
        case TargetKind::kWhole:
          break;
        case TargetKind::kPart:
          w.lo = t.lo;
          break;
        case TargetKind::kBit: {
          const int64_t p = s.position(static_cast<int64_t>(eval(t.index[0], t.index[0].self)));
          if (p < 0) continue;
          w.lo = static_cast<int>(p);
          break;
        }
        case TargetKind::kElem: {
          const int64_t e =
              static_cast<int64_t>(eval(t.index[0], t.index[0].self)) - s.array_lo;
          if (e < 0 || static_cast<size_t>(e) >= s.array_len) continue;
          w.slot += static_cast<size_t>(e);
          break;
        }
      }
      out.push_back(w);
    }
  }

  void apply(const Write& w) {
    const uint64_t field = mask(w.width) << w.lo;
    mem[w.slot] = (mem[w.slot] & ~field) | ((w.value << w.lo) & field);
  }

  void assign(const Lhs& lhs, const Node& rhs, std::vector<Write>* deferred) {
    const uint64_t v = eval(rhs, lhs.width);
    std::vector<Write> writes;
    resolve(lhs, v, writes);
    if (deferred) {
      deferred->insert(deferred->end(), writes.begin(), writes.end());
    } else {
      for (const auto& w : writes) apply(w);
    }
  }

  void exec(const SNode& n, std::vector<Write>& nba) {
    switch (n.kind) {
      case StmtKind::kBlock:
        for (const auto& c : n.body) exec(c, nba);
        break;
      case StmtKind::kIf:
        if (eval(n.expr, n.expr.self) != 0) {
          exec(n.body[0], nba);
        } else if (n.body.size() > 1) {
          exec(n.body[1], nba);
        }
        break;
      case StmtKind::kCase: {
        const SNode* fallback = nullptr;
        for (size_t i = 0; i < n.labels.size(); ++i) {
          if (n.labels[i].empty()) {
            fallback = &n.body[i];
            continue;
          }
          for (const auto& label : n.labels[i]) {
            const int c = std::max(n.expr.self, label.self);
            if (eval(n.expr, c) == eval(label, c)) {
              exec(n.body[i], nba);
              return;
            }
          }
        }
        if (fallback) exec(*fallback, nba);
        break;
      }
      case StmtKind::kBlockingAssign:
        assign(n.lhs, n.expr, nullptr);
        break;
      case StmtKind::kNonblockingAssign:
        assign(n.lhs, n.expr, &nba);
        break;
      case StmtKind::kNull:
        break;
    }
  }

  void comb_fixpoint() {
    std::vector<uint64_t> before;
    std::vector<Write> nba;
    for (int pass = 0; pass < kMaxCombPasses; ++pass) {
      before = mem;
      for (const auto& c : continuous) assign(c.lhs, c.rhs, nullptr);
      for (const auto& p : comb) {
        nba.clear();
        exec(p.body, nba);
        for (const auto& w : nba) apply(w);
      }
      if (mem == before) return;
    }
    throw Error(ErrorCode::kDomain, "simulator: combinational logic does not settle");
  }

  void settle() {
    std::vector<Write> nba;
    for (int round = 0; round < kMaxEdgeRounds; ++round) {
      comb_fixpoint();
      std::vector<const Process*> fired;
      for (const auto& p : seq) {
        for (const auto& t : p.triggers) {
          const size_t k = static_cast<size_t>(
              std::find(tracked.begin(), tracked.end(), t.sig) - tracked.begin());
          const uint64_t old_bit = last[k] & 1;
          const uint64_t new_bit = mem[signals[t.sig].offset] & 1;
          if ((t.posedge && !old_bit && new_bit) || (!t.posedge && old_bit && !new_bit)) {
            fired.push_back(&p);
            break;
          }
        }
      }
      for (size_t k = 0; k < tracked.size(); ++k) last[k] = mem[signals[tracked[k]].offset];
      if (fired.empty()) return;
      nba.clear();
      for (const Process* p : fired) exec(p->body, nba);
      for (const auto& w : nba) apply(w);
    }
    throw Error(ErrorCode::kDomain, "simulator: edge-triggered logic does not settle");
  }
};

Simulator::Simulator(const verilog::Module& module) : impl_(std::make_unique<Impl>()) {
  Impl& im = *impl_;
  std::vector<verilog::ParseDiagnostic> diags;
  verilog::SymbolTable table = verilog::build_symbols(module, &diags);
  im.params = table.params;
  for (const verilog::Symbol* sym : table.ordered()) {
    if (sym->kind == verilog::SymbolKind::kParam) continue;
    im.add_signal(*sym);
  }
  for (const std::string& name : module.port_names()) {
    const int sig = im.lookup(name);
    if (sig < 0) Impl::unsupported("port without declaration '" + name + "'");
    im.ports.push_back({name, im.signals[sig].direction, im.signals[sig].width});
  }

  auto declarators = [&](const verilog::Declaration& d) {
    for (const auto& dn : d.names) {
      if (!dn.init) continue;
      if (d.type == NetType::kReg || d.type == NetType::kInteger) {
        const int sig = im.lookup(dn.name);
        im.mem[im.signals[sig].offset] =
            static_cast<uint64_t>(im.const_int(*dn.init)) & mask(im.signals[sig].width);
      } else {
        im.continuous.push_back({im.compile_lhs(Expr::identifier(dn.name)), im.compile(*dn.init)});
      }
    }
  };
  for (const auto& d : module.ansi_ports) declarators(d);
  for (const auto& item : module.items) {
    if (const auto* d = std::get_if<verilog::Declaration>(&item)) {
      declarators(*d);
    } else if (const auto* ca = std::get_if<verilog::ContinuousAssign>(&item)) {
      for (const auto& a : ca->assigns) {
        im.continuous.push_back({im.compile_lhs(a.lhs), im.compile(a.rhs)});
      }
    } else if (const auto* al = std::get_if<verilog::Always>(&item)) {
      Process p;
      p.body = im.compile_stmt(al->body);
      if (al->edge_triggered()) {
        for (const auto& s : al->sensitivity) {
          if (s.edge == verilog::Edge::kNone) continue;
          if (s.signal.kind != ExprKind::kIdentifier) Impl::unsupported("edge on a select");
          const int sig = im.lookup(s.signal.text);
          if (sig < 0) Impl::unsupported("edge on '" + s.signal.text + "'");
          p.triggers.push_back({sig, s.edge == verilog::Edge::kPosedge});
          if (std::find(im.tracked.begin(), im.tracked.end(), sig) == im.tracked.end()) {
            im.tracked.push_back(sig);
          }
        }
        im.seq.push_back(std::move(p));
      } else {
        im.comb.push_back(std::move(p));
      }
    }
  }
  im.last.assign(im.tracked.size(), 0);
}

Simulator::~Simulator() = default;
Simulator::Simulator(Simulator&&) noexcept = default;
Simulator& Simulator::operator=(Simulator&&) noexcept = default;

const std::vector<PortInfo>& Simulator::ports() const { return impl_->ports; }

std::vector<PortInfo> Simulator::inputs() const {
  std::vector<PortInfo> out;
  for (const auto& p : impl_->ports) {
    if (p.direction == Direction::kInput) out.push_back(p);
  }
  return out;
}

std::vector<PortInfo> Simulator::outputs() const {
  std::vector<PortInfo> out;
  for (const auto& p : impl_->ports) {
    if (p.direction == Direction::kOutput || p.direction == Direction::kInout) out.push_back(p);
  }
  return out;
}

int Simulator::input_bits() const {
  int bits = 0;
  for (const auto& p : inputs()) bits += p.width;
  return bits;
}

void Simulator::set_input(const std::string& name, uint64_t value) {
  const int sig = impl_->lookup(name);
  if (sig < 0) throw Error(ErrorCode::kInvalidArgument, "no such signal '" + name + "'");
  const SignalInfo& s = impl_->signals[sig];
  impl_->mem[s.offset] = value & mask(s.width);
}

uint64_t Simulator::value(const std::string& name) const {
  const int sig = impl_->lookup(name);
  if (sig < 0) throw Error(ErrorCode::kInvalidArgument, "no such signal '" + name + "'");
  return impl_->mem[impl_->signals[sig].offset];
}

std::vector<uint64_t> Simulator::output_values() const {
  std::vector<uint64_t> out;
  for (const auto& p : outputs()) out.push_back(value(p.name));
  return out;
}

void Simulator::settle() { impl_->settle(); }

std::vector<uint64_t> Simulator::state() const {
  std::vector<uint64_t> s = impl_->mem;
  s.insert(s.end(), impl_->last.begin(), impl_->last.end());
  return s;
}

void Simulator::set_state(const std::vector<uint64_t>& state) {
  Impl& im = *impl_;
  if (state.size() != im.mem.size() + im.last.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "simulator state size mismatch");
  }
  std::copy(state.begin(), state.begin() + static_cast<std::ptrdiff_t>(im.mem.size()),
            im.mem.begin());
  std::copy(state.begin() + static_cast<std::ptrdiff_t>(im.mem.size()), state.end(),
            im.last.begin());
}

Clocking detect_clocking(const verilog::Module& module) {
  std::vector<verilog::ParseDiagnostic> diags;
  const verilog::SymbolTable table = verilog::build_symbols(module, &diags);
  auto is_input = [&](const std::string& name) {
    const verilog::Symbol* s = table.find(name);
    return s && s->direction == Direction::kInput;
  };
  std::vector<std::pair<std::string, verilog::Edge>> edges;
  for (const auto& item : module.items) {
    const auto* al = std::get_if<verilog::Always>(&item);
    if (!al) continue;
    for (const auto& s : al->sensitivity) {
      if (s.edge == verilog::Edge::kNone || s.signal.kind != ExprKind::kIdentifier) continue;
      if (!is_input(s.signal.text)) continue;
      const bool seen = std::any_of(edges.begin(), edges.end(),
                                    [&](const auto& e) { return e.first == s.signal.text; });
      if (!seen) edges.emplace_back(s.signal.text, s.edge);
    }
  }
  Clocking c;
  for (const auto& [name, edge] : edges) {
    if (is_reset_name(name)) continue;
    if (!c.clock || (is_clock_name(name) && !is_clock_name(*c.clock))) {
      c.clock = name;
      c.clock_posedge = edge == verilog::Edge::kPosedge;
    }
  }
  if (!c.clock) return c;
  for (const auto& [name, edge] : edges) {
    if (name != *c.clock && is_reset_name(name)) {
      c.reset = name;
      c.reset_active_high = edge == verilog::Edge::kPosedge;
      return c;
    }
  }
  for (const std::string& name : module.port_names()) {
    if (is_input(name) && is_reset_name(name)) {
      c.reset = name;
      c.reset_active_high = !active_low_name(name);
      return c;
    }
  }
  return c;
}

}  // namespace forge::sim
