#include "pftpha/ground_tree.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>

#include "pftpha/compile.h"
#include "pftpha/error.h"

namespace pftpha {

// ---------------------------------------------------------------------------
// Unfolding

GroundFaultTree GroundFaultTree::at_time(double t_hours) const {
  GroundFaultTree out = *this;
  out.time_ = t_hours;
  for (auto& be : out.basic_) be.probability = failure_probability(be.lambda, t_hours);
  return out;
}

std::optional<GroundRef> GroundFaultTree::find(std::string_view label) const {
  for (std::size_t i = 0; i < basic_.size(); ++i)
    if (basic_[i].label() == label) return GroundRef::basic(i);
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].label == label) return GroundRef::node(i);
  return std::nullopt;
}

GroundFaultTree unfold(const PftModel& model, double t_hours) {
  require_valid(model);
  GroundFaultTree tree;
  tree.time_ = t_hours;

  std::map<std::string, std::size_t> basic_index;
  for (const auto& e : model.events) {
    if (!e.is_basic()) continue;
    const double lambda = *model.rate_of(e.name);
    for (const auto& tuple : model.tuples(e.params)) {
      basic_index[ground_label(e.name, tuple)] = tree.basic_.size();
      tree.basic_.push_back(
          {e.name, tuple, lambda, failure_probability(lambda, t_hours)});
    }
  }

  std::map<std::string, std::size_t> memo;
  std::function<GroundRef(const std::string&, const std::vector<int>&)> ground =
      [&](const std::string& cls, const std::vector<int>& args) -> GroundRef {
    const std::string label = ground_label(cls, args);
    const EventNode& event = *model.find_event(cls);
    if (event.is_basic()) return GroundRef::basic(basic_index.at(label));
    if (auto it = memo.find(label); it != memo.end()) return GroundRef::node(it->second);

    std::map<std::string, int> bound;
    for (std::size_t k = 0; k < args.size(); ++k) bound[event.params[k].name] = args[k];
    const Gate& gate = *model.gate_for(cls);

    // Every replica of one input, in declared-tuple order.
    auto replicas = [&](const GateInput& in) {
      std::vector<GroundRef> out;
      for (const auto& tuple : model.tuples(in.declared)) {
        std::map<std::string, int> local = bound;
        for (std::size_t k = 0; k < tuple.size(); ++k) local[in.declared[k].name] = tuple[k];
        std::vector<int> child_args;
        for (const auto& a : in.ref.args)
          child_args.push_back(a.is_param() ? local.at(*a.param) : a.value);
        out.push_back(ground(in.ref.event, child_args));
      }
      return out;
    };

    GroundNode node;
    node.label = label;
    if (gate.kind == GateKind::k_of_n) {
      const auto reps = replicas(gate.inputs[0]);
      node.op = GroundNode::Op::or_op;
      for (const auto& term : expand_kofn(model, gate).and_terms) {
        GroundNode conj{GroundNode::Op::and_op, "", {}};
        for (std::size_t idx : term) conj.inputs.push_back(reps[idx]);
        tree.nodes_.push_back(std::move(conj));
        node.inputs.push_back(GroundRef::node(tree.nodes_.size() - 1));
      }
    } else {
      node.op = gate.kind == GateKind::and_gate ? GroundNode::Op::and_op
                                                : GroundNode::Op::or_op;
      for (const auto& in : gate.inputs)
        for (const auto& r : replicas(in)) node.inputs.push_back(r);
    }
    tree.nodes_.push_back(std::move(node));
    memo[label] = tree.nodes_.size() - 1;
    return GroundRef::node(tree.nodes_.size() - 1);
  };

  tree.top_ = ground(model.top()->name, {}).index;
  return tree;
}

// ---------------------------------------------------------------------------
// Evaluation

std::vector<bool> evaluate(const GroundFaultTree& tree,
                           const std::vector<bool>& failed_basic) {
  if (failed_basic.size() != tree.basic_events().size())
    throw AnalysisError("assignment must cover every basic event");
  std::vector<bool> state(tree.nodes().size());
  auto value = [&](const GroundRef& r) {
    return r.is_basic() ? failed_basic[r.index] : static_cast<bool>(state[r.index]);
  };
  for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
    const auto& n = tree.nodes()[i];
    if (n.op == GroundNode::Op::and_op)
      state[i] = std::all_of(n.inputs.begin(), n.inputs.end(), value);
    else
      state[i] = std::any_of(n.inputs.begin(), n.inputs.end(), value);
  }
  return state;
}

namespace {

// Evaluates 64 consecutive assignments at once. Assignment `mask` fails basic
// event i iff bit i of mask is set; block b covers masks [64b, 64b+64).
class BlockEnumerator {
 public:
  BlockEnumerator(const GroundFaultTree& tree, std::size_t max_basic)
      : tree_(tree), n_(tree.basic_events().size()) {
    if (n_ > max_basic)
      throw AnalysisError("exhaustive enumeration limited to " +
                          std::to_string(max_basic) + " basic events, tree has " +
                          std::to_string(n_));
    low_bits_ = std::min<std::size_t>(n_, 6);
    blocks_ = n_ > 6 ? std::uint64_t{1} << (n_ - 6) : 1;
    valid_ = low_bits_ == 6 ? ~std::uint64_t{0}
                            : (std::uint64_t{1} << (std::uint64_t{1} << low_bits_)) - 1;
    // Weights of the low six events for each in-block offset.
    low_weight_.assign(64, 0.0);
    for (std::size_t off = 0; off < (std::size_t{1} << low_bits_); ++off) {
      double w = 1.0;
      for (std::size_t i = 0; i < low_bits_; ++i) {
        double p = tree.basic_events()[i].probability;
        w *= (off >> i & 1) ? p : 1.0 - p;
      }
      low_weight_[off] = w;
    }
    node_words_.resize(tree.nodes().size());
  }

  std::uint64_t blocks() const { return blocks_; }
  std::uint64_t valid() const { return valid_; }

  void evaluate_block(std::uint64_t block) {
    block_ = block;
    for (std::size_t i = 0; i < tree_.nodes().size(); ++i) {
      const auto& n = tree_.nodes()[i];
      const bool conj = n.op == GroundNode::Op::and_op;
      std::uint64_t w = conj ? ~std::uint64_t{0} : 0;
      for (const auto& r : n.inputs) w = conj ? (w & word(r)) : (w | word(r));
      node_words_[i] = w;
    }
  }

  std::uint64_t word(const GroundRef& r) const {
    if (!r.is_basic()) return node_words_[r.index];
    static constexpr std::uint64_t kPatterns[6] = {
        0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
        0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
    if (r.index < 6) return kPatterns[r.index];
    return (block_ >> (r.index - 6) & 1) ? ~std::uint64_t{0} : 0;
  }

  /// Probability mass of the assignments selected by `bits` in this block.
  double mass(std::uint64_t bits) const {
    bits &= valid_;
    if (!bits) return 0.0;
    double high = 1.0;
    for (std::size_t i = 6; i < n_; ++i) {
      double p = tree_.basic_events()[i].probability;
      high *= (block_ >> (i - 6) & 1) ? p : 1.0 - p;
    }
    double low = 0.0;
    while (bits) {
      low += low_weight_[std::countr_zero(bits)];
      bits &= bits - 1;
    }
    return high * low;
  }

 private:
  const GroundFaultTree& tree_;
  std::size_t n_;
  std::size_t low_bits_ = 0;
  std::uint64_t blocks_ = 1;
  std::uint64_t valid_ = 0;
  std::uint64_t block_ = 0;
  std::vector<double> low_weight_;
  std::vector<std::uint64_t> node_words_;
};

std::uint64_t selected(const BlockEnumerator& en,
                       const std::vector<StateCondition>& condition) {
  std::uint64_t bits = ~std::uint64_t{0};
  for (const auto& c : condition) {
    std::uint64_t w = en.word(c.ref);
    bits &= c.failed ? w : ~w;
  }
  return bits;
}

}  // namespace

double exact_probability(const GroundFaultTree& tree,
                         const std::vector<StateCondition>& condition,
                         std::size_t max_basic) {
  BlockEnumerator en(tree, max_basic);
  double total = 0.0;
  for (std::uint64_t b = 0; b < en.blocks(); ++b) {
    en.evaluate_block(b);
    total += en.mass(selected(en, condition));
  }
  return total;
}

double conditional_probability(const GroundFaultTree& tree,
                               const std::vector<StateCondition>& event,
                               const std::vector<StateCondition>& given,
                               std::size_t max_basic) {
  BlockEnumerator en(tree, max_basic);
  double joint = 0.0, base = 0.0;
  for (std::uint64_t b = 0; b < en.blocks(); ++b) {
    en.evaluate_block(b);
    std::uint64_t g = selected(en, given);
    base += en.mass(g);
    joint += en.mass(g & selected(en, event));
  }
  if (base <= 0.0) throw AnalysisError("conditioning event has probability zero");
  return joint / base;
}

std::vector<std::vector<std::size_t>> prime_implicants(const GroundFaultTree& tree,
                                                       std::size_t max_basic) {
  BlockEnumerator en(tree, max_basic);
  const std::size_t n = tree.basic_events().size();
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<bool> fails(total);
  for (std::uint64_t b = 0; b < en.blocks(); ++b) {
    en.evaluate_block(b);
    std::uint64_t w = en.word(tree.top()) & en.valid();
    while (w) {
      fails[b * 64 + std::countr_zero(w)] = true;
      w &= w - 1;
    }
  }
  // On a coherent tree S is a minimal cut set iff failing exactly S fails the
  // top while restoring any single member of S repairs it.
  std::vector<std::vector<std::size_t>> out;
  for (std::uint64_t s = 0; s < total; ++s) {
    if (!fails[s]) continue;
    bool minimal = true;
    for (std::uint64_t rest = s; rest && minimal; rest &= rest - 1)
      minimal = !fails[s & ~(rest & -rest)];
    if (!minimal) continue;
    std::vector<std::size_t> set;
    for (std::size_t i = 0; i < n; ++i)
      if (s >> i & 1) set.push_back(i);
    out.push_back(std::move(set));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

}  // namespace pftpha
