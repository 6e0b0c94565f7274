#include "pftpha/compile.h"

#include <functional>
#include <optional>

#include "pftpha/error.h"

namespace pftpha {

namespace {

using Bindings = std::map<std::string, int>;

constexpr const char* kFailed = "f";
constexpr const char* kWorking = "w";

Atom event_atom(const EventRef& ref, const Bindings& bound,
                std::optional<std::string> status) {
  Atom a{predicate_name(ref.event), {}};
  for (const auto& arg : ref.args) {
    if (!arg.is_param()) {
      a.args.push_back(Term::constant(arg.value));
    } else if (auto it = bound.find(*arg.param); it != bound.end()) {
      a.args.push_back(Term::constant(it->second));
    } else {
      a.args.push_back(Term::var(variable_name(*arg.param)));
    }
  }
  if (status) a.args.push_back(Term::constant(*status));
  return a;
}

Atom head_atom(const EventNode& e, std::optional<std::string> status) {
  Atom a{predicate_name(e.name), {}};
  for (const auto& p : e.params) a.args.push_back(Term::var(variable_name(p.name)));
  if (status) a.args.push_back(Term::constant(*status));
  return a;
}

std::vector<const GateInput*> ordered_inputs(const Gate& gate,
                                             const CompileOptions& opts) {
  std::vector<const GateInput*> out;
  auto it = opts.input_order.find(gate.output);
  if (it == opts.input_order.end()) {
    for (const auto& in : gate.inputs) out.push_back(&in);
    return out;
  }
  std::vector<bool> used(gate.inputs.size(), false);
  for (const auto& name : it->second) {
    bool found = false;
    for (std::size_t i = 0; i < gate.inputs.size() && !found; ++i) {
      if (!used[i] && gate.inputs[i].ref.event == name) {
        used[i] = true;
        out.push_back(&gate.inputs[i]);
        found = true;
      }
    }
    if (!found) break;
  }
  if (out.size() != gate.inputs.size() || it->second.size() != gate.inputs.size())
    throw ValidationError("input order for " + gate.output +
                          " is not a permutation of its inputs");
  return out;
}

// One atom per replica of a replicated input, or the single atom otherwise.
std::vector<Atom> expanded_atoms(const PftModel& model, const GateInput& in,
                                 std::optional<std::string> status) {
  if (!in.is_replicated()) return {event_atom(in.ref, {}, status)};
  std::vector<Atom> out;
  for (const auto& tuple : model.tuples(in.declared)) {
    Bindings b;
    for (std::size_t k = 0; k < tuple.size(); ++k) b[in.declared[k].name] = tuple[k];
    out.push_back(event_atom(in.ref, b, status));
  }
  return out;
}

std::vector<DisjointDeclaration> basic_declarations(const PftModel& model,
                                                    double t) {
  std::vector<DisjointDeclaration> decls;
  for (const auto& e : model.events) {
    if (!e.is_basic()) continue;
    const double p = failure_probability(*model.rate_of(e.name), t);
    for (const auto& tuple : model.tuples(e.params)) {
      Atom base{predicate_name(e.name), {}};
      for (int v : tuple) base.args.push_back(Term::constant(v));
      Atom working = base, failed = base;
      working.args.push_back(Term::constant(kWorking));
      failed.args.push_back(Term::constant(kFailed));
      decls.push_back({{{working, 1.0 - p}, {failed, p}}});
    }
  }
  return decls;
}

void check_inputs(const PftModel& model, const CompileOptions& opts) {
  require_valid(model);
  if (!(opts.time_hours >= 0.0))
    throw DomainError("analysis time must be nonnegative");
  for (const auto& [gate, order] : opts.input_order)
    if (!model.gate_for(gate))
      throw ValidationError("input order names " + gate + ", which is not a gate output");
}

}  // namespace

std::vector<std::vector<std::size_t>> kofn_failure_combinations(std::size_t n,
                                                                std::size_t k) {
  if (k < 1 || k > n)
    throw ValidationError("k must lie in 1..n for a k-out-of-n gate");
  const std::size_t size = n - k + 1;
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> pick(size);
  for (std::size_t i = 0; i < size; ++i) pick[i] = i;
  while (true) {
    out.push_back(pick);
    // Advance to the next combination in lexicographic order.
    std::size_t i = size;
    while (i > 0 && pick[i - 1] == n - size + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

KofnExpansion expand_kofn(const PftModel& model, const Gate& gate) {
  if (gate.kind != GateKind::k_of_n || gate.inputs.size() != 1 ||
      !gate.inputs[0].is_replicated())
    throw ValidationError("KofN gate " + gate.output +
                          " must have exactly one replicator input");
  KofnExpansion out;
  out.replicas = model.tuples(gate.inputs[0].declared);
  out.and_terms = kofn_failure_combinations(out.replicas.size(),
                                            static_cast<std::size_t>(gate.k));
  return out;
}

PhaTheory conversion1(const PftModel& model, const CompileOptions& opts) {
  check_inputs(model, opts);
  std::vector<Clause> clauses;
  auto status_of = [&](const GateInput& in) -> std::optional<std::string> {
    if (model.find_event(in.ref.event)->is_basic()) return kFailed;
    return std::nullopt;
  };
  for (const auto& gate : model.gates) {
    const EventNode& out = *model.find_event(gate.output);
    const Atom head = head_atom(out, std::nullopt);
    const auto inputs = ordered_inputs(gate, opts);
    switch (gate.kind) {
      case GateKind::or_gate:
        // Replicated inputs stay parametric: the free variable already ranges
        // over the replicas.
        for (const GateInput* in : inputs)
          clauses.push_back({head, {event_atom(in->ref, {}, status_of(*in))}});
        break;
      case GateKind::and_gate: {
        Clause c{head, {}};
        for (const GateInput* in : inputs)
          for (auto& a : expanded_atoms(model, *in, status_of(*in)))
            c.body.push_back(std::move(a));
        clauses.push_back(std::move(c));
        break;
      }
      case GateKind::k_of_n: {
        const auto replicas = expanded_atoms(model, gate.inputs[0],
                                             status_of(gate.inputs[0]));
        for (const auto& term : expand_kofn(model, gate).and_terms) {
          Clause c{head, {}};
          for (std::size_t idx : term) c.body.push_back(replicas[idx]);
          clauses.push_back(std::move(c));
        }
        break;
      }
    }
  }
  return PhaTheory(std::move(clauses), basic_declarations(model, opts.time_hours),
                   Stage::f1);
}

PhaTheory conversion2(const PftModel& model, const CompileOptions& opts) {
  check_inputs(model, opts);
  std::vector<Clause> clauses;
  for (const auto& gate : model.gates) {
    const EventNode& out = *model.find_event(gate.output);

    // Ground-expanded inputs as (failed, working) atom pairs.
    std::vector<std::pair<Atom, Atom>> expanded;
    for (const GateInput* in : ordered_inputs(gate, opts)) {
      auto failed = expanded_atoms(model, *in, kFailed);
      auto working = expanded_atoms(model, *in, kWorking);
      for (std::size_t r = 0; r < failed.size(); ++r)
        expanded.emplace_back(std::move(failed[r]), std::move(working[r]));
    }
    auto input_atom = [&](std::size_t j, const char* status) {
      return status == kFailed ? expanded[j].first : expanded[j].second;
    };
    const std::size_t n = expanded.size();
    // The gate fails iff at least `threshold` inputs fail.
    std::size_t threshold = 1;
    if (gate.kind == GateKind::and_gate) threshold = n;
    if (gate.kind == GateKind::k_of_n) threshold = n - gate.k + 1;

    std::vector<const char*> statuses = {kFailed};
    if (!out.is_top()) statuses.push_back(kWorking);
    for (const char* target : statuses) {
      const char* other = target == kFailed ? kWorking : kFailed;
      const Atom head =
          out.is_top() ? head_atom(out, std::nullopt) : head_atom(out, target);
      std::vector<const char*> path;  // status chosen per input so far
      std::function<void(std::size_t)> explore = [&](std::size_t fails) {
        const std::size_t i = path.size();
        const bool failed = fails >= threshold;
        const bool working = fails + (n - i) < threshold;
        if (failed || working) {
          if ((failed ? kFailed : kWorking) != target) return;
          // Inputs agreeing with the head status first, in input order; the
          // disagreeing ones after, most recently decided first.
          Clause c{head, {}};
          for (std::size_t j = 0; j < i; ++j)
            if (path[j] == target) c.body.push_back(input_atom(j, target));
          for (std::size_t j = i; j-- > 0;)
            if (path[j] == other) c.body.push_back(input_atom(j, other));
          clauses.push_back(std::move(c));
          return;
        }
        for (const char* s : {target, other}) {
          path.push_back(s);
          explore(fails + (s == kFailed ? 1 : 0));
          path.pop_back();
        }
      };
      explore(0);
    }
  }
  return PhaTheory(std::move(clauses), basic_declarations(model, opts.time_hours),
                   Stage::f2);
}

}  // namespace pftpha
