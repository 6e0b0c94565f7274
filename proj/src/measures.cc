#include "pftpha/measures.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <map>

#include "pftpha/error.h"

namespace pftpha {

BasicEventId parse_basic_event(const std::string& label) {
  BasicEventId id;
  auto open = label.find('(');
  id.event_class = label.substr(0, open);
  auto trim = [](std::string s) {
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
    return s;
  };
  id.event_class = trim(id.event_class);
  if (id.event_class.empty()) throw Error("malformed basic event '" + label + "'");
  if (open == std::string::npos) return id;
  auto close = label.find(')', open);
  if (close == std::string::npos || trim(label.substr(close + 1)) != "")
    throw Error("malformed basic event '" + label + "'");
  std::string inner = label.substr(open + 1, close - open - 1);
  std::size_t start = 0;
  while (start <= inner.size()) {
    auto comma = inner.find(',', start);
    std::string part = trim(inner.substr(start, comma - start));
    std::size_t used = 0;
    try {
      id.args.push_back(std::stoi(part, &used));
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used == 0 || used != part.size())
      throw Error("malformed basic event '" + label + "'");
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return id;
}

std::string CutSet::render() const {
  std::string out = "{";
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i) out += ", ";
    out += events[i].label();
  }
  return out + "}";
}

// ---------------------------------------------------------------------------

Analysis::Analysis(PftModel model, double t_hours, AnalysisOptions options)
    : model_(std::move(model)), t_(t_hours), options_(std::move(options)) {
  require_valid(model_);
  if (!(t_ >= 0.0)) throw DomainError("analysis time must be nonnegative");
  options_.compile.time_hours = t_;
}

const PhaTheory& Analysis::theory_f1() const {
  std::call_once(f1_once_, [&] {
    f1_ = std::make_unique<PhaTheory>(conversion1(model_, options_.compile));
  });
  return *f1_;
}

const PhaTheory& Analysis::theory_f2() const {
  std::call_once(f2_once_, [&] {
    f2_ = std::make_unique<PhaTheory>(conversion2(model_, options_.compile));
  });
  return *f2_;
}

std::vector<CutSet> Analysis::minimal_cut_sets(const StopCriteria& stop) const {
  if (!(t_ > 0.0))
    throw DomainError("cut-set ranking needs an analysis time above zero");
  const PhaTheory& f1 = theory_f1();
  std::map<std::string, std::string> class_of;
  for (const auto& e : model_.events) class_of[predicate_name(e.name)] = e.name;

  const Atom top{predicate_name(model_.top()->name), {}};
  auto result = pftpha::minimal_explanations(f1, {top}, stop, options_.search);
  std::vector<CutSet> out;
  for (const auto& e : result.explanations) {
    CutSet cs;
    // Recomputed in declaration order so that equal cut-sets tie exactly.
    cs.prior = 1.0;
    for (const auto& h : e.hypotheses) cs.prior *= f1.hypothesis(h).probability;
    for (const auto& atom : e.atoms(f1)) {
      BasicEventId id{class_of.at(atom.predicate), {}};
      for (std::size_t k = 0; k + 1 < atom.args.size(); ++k)
        id.args.push_back(std::stoi(atom.args[k].name));
      cs.events.push_back(std::move(id));
    }
    std::sort(cs.events.begin(), cs.events.end());
    out.push_back(std::move(cs));
  }
  std::sort(out.begin(), out.end(), [](const CutSet& a, const CutSet& b) {
    if (a.prior != b.prior) return a.prior > b.prior;
    return a.render() < b.render();
  });
  return out;
}

const ProbabilityBounds& Analysis::top_bounds() const {
  std::call_once(top_once_, [&] {
    const Atom top{predicate_name(model_.top()->name), {}};
    top_ = probability(theory_f2(), {top}, options_.stop, options_.search);
  });
  return top_;
}

ProbabilityBounds Analysis::system_unreliability() const { return top_bounds(); }

double Analysis::joint_with_top(std::vector<Atom> atoms) const {
  atoms.push_back(Atom{predicate_name(model_.top()->name), {}});
  const double denominator = top_bounds().lower;
  if (!(denominator > 0.0))
    throw AnalysisError("posterior undefined: system unreliability is zero");
  const auto joint = probability(theory_f2(), atoms, options_.stop, options_.search);
  return joint.lower / denominator;
}

Atom Analysis::failure_atom(const BasicEventId& be) const {
  const EventNode* e = model_.find_event(be.event_class);
  if (!e || !e->is_basic())
    throw AnalysisError("unknown basic event " + be.label());
  Atom a{predicate_name(be.event_class), {}};
  for (int v : be.args) a.args.push_back(Term::constant(v));
  a.args.push_back(Term::constant("f"));
  if (!theory_f2().find_hypothesis(a))
    throw AnalysisError("unknown basic event " + be.label());
  return a;
}

double Analysis::mcs_posterior(const CutSet& cs) const {
  std::vector<Atom> atoms;
  for (const auto& be : cs.events) atoms.push_back(failure_atom(be));
  return joint_with_top(std::move(atoms));
}

double Analysis::basic_event_posterior(const BasicEventId& be) const {
  return joint_with_top({failure_atom(be)});
}

std::vector<BasicEventPosterior> Analysis::basic_event_posteriors() const {
  std::vector<BasicEventPosterior> out;
  for (const auto& e : model_.events) {
    if (!e.is_basic()) continue;
    for (const auto& tuple : model_.tuples(e.params)) {
      BasicEventId id{e.name, tuple};
      double p = basic_event_posterior(id);
      out.push_back({std::move(id), p});
    }
  }
  return out;
}

void Analysis::attach_posteriors(std::vector<CutSet>& cut_sets) const {
  for (auto& cs : cut_sets) cs.posterior = mcs_posterior(cs);
}

// ---------------------------------------------------------------------------

std::vector<CutSet> minimal_cut_sets(const PftModel& model, double t_hours) {
  return Analysis(model, t_hours).minimal_cut_sets();
}

ProbabilityBounds system_unreliability(const PftModel& model, double t_hours,
                                       const StopCriteria& stop) {
  AnalysisOptions opts;
  opts.stop = stop;
  return Analysis(model, t_hours, opts).system_unreliability();
}

std::vector<UnreliabilityPoint> unreliability_curve(const PftModel& model,
                                                    double t_start, double t_end,
                                                    double step,
                                                    const StopCriteria& stop) {
  if (!(t_start >= 0.0) || !(t_end >= t_start))
    throw DomainError("curve needs 0 <= start <= end");
  if (!(step > 0.0)) throw DomainError("curve step must be positive");
  require_valid(model);
  std::vector<UnreliabilityPoint> out;
  for (std::size_t i = 0;; ++i) {
    const double t = t_start + static_cast<double>(i) * step;
    if (t > t_end + 1e-9 * step) break;
    out.push_back({t, {}});
  }
  // Points are independent; fan them out over a few workers.
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < out.size();) {
      try {
        out[i].bounds = system_unreliability(model, out[i].time_hours, stop);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < std::min(hw, out.size()); ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

double mcs_posterior(const PftModel& model, const CutSet& cs, double t_hours,
                     const StopCriteria& stop) {
  AnalysisOptions opts;
  opts.stop = stop;
  return Analysis(model, t_hours, opts).mcs_posterior(cs);
}

double basic_event_posterior(const PftModel& model, const BasicEventId& be,
                             double t_hours, const StopCriteria& stop) {
  AnalysisOptions opts;
  opts.stop = stop;
  return Analysis(model, t_hours, opts).basic_event_posterior(be);
}

MeasureReport build_report(const PftModel& model, double t_hours,
                           const ReportRequest& request,
                           const AnalysisOptions& options) {
  MeasureReport report;
  report.model_name = model.name;
  report.time_hours = t_hours;
  Analysis analysis(model, t_hours, options);
  if (request.cut_sets) {
    report.cut_sets = analysis.minimal_cut_sets();
    if (request.posteriors) analysis.attach_posteriors(report.cut_sets);
  }
  if (request.posteriors) report.posteriors = analysis.basic_event_posteriors();
  if (request.curve_start && request.curve_end && request.curve_step)
    report.curve = unreliability_curve(model, *request.curve_start,
                                       *request.curve_end, *request.curve_step,
                                       options.stop);
  return report;
}

}  // namespace pftpha
