#include "liftsl/semantics.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "liftsl/error.hpp"

namespace liftsl {

const GenRel& AssertEnv::at(const std::string& name) const {
  auto it = rels.find(name);
  if (it == rels.end()) throw ShapeError("unbound assertion variable '" + name + "'");
  return it->second;
}

void AssertEnv::set(const std::string& name, GenRel r) {
  if (r.arity() != arity) {
    throw ShapeError("relation for '" + name + "' has arity " + std::to_string(r.arity()) +
                     ", expected " + std::to_string(arity));
  }
  rels.insert_or_assign(name, std::move(r));
}

std::string to_string(const AssertEnv& rho) {
  std::string out;
  for (const auto& [name, r] : rho.rels) {
    if (!out.empty()) out += "; ";
    out += name + " = " + to_string(r);
  }
  return out;
}

namespace {

GenRel diagonal_cell(int n, Loc l, Val v) {
  return GenRel::principal(HeapTuple(static_cast<std::size_t>(n), Heap::cell(l, v)));
}

// Structural interpreter. Subterms without assertion variables that sit
// outside every binder depend only on η, so they are cached across the many
// ρ tried by the search.
class Interpreter {
 public:
  Interpreter(const VarEnv& eta, const ValueDomain& dom, int n) : eta_(eta), dom_(dom), n_(n) {
    if (dom.values.empty()) throw std::invalid_argument("value domain must be nonempty");
  }

  GenRel run(const Assertion& a, const AssertEnv& rho) {
    if (rho.arity != n_) throw ShapeError("assertion environment arity does not match");
    rho_ = &rho;
    VarEnv eta = eta_;
    return eval(*a, eta, 0);
  }

 private:
  bool avar_free(const Node& n) {
    auto it = avar_free_.find(&n);
    if (it != avar_free_.end()) return it->second;
    bool free = n.kind != Node::Kind::AVar;
    if (free && n.lhs) free = avar_free(*n.lhs);
    if (free && n.rhs) free = avar_free(*n.rhs);
    avar_free_.emplace(&n, free);
    return free;
  }

  GenRel eval(const Node& node, VarEnv& eta, int binders) {
    const bool cacheable = binders == 0 && avar_free(node);
    if (cacheable) {
      auto it = cache_.find(&node);
      if (it != cache_.end()) return it->second;
    }
    GenRel r = compute(node, eta, binders);
    if (cacheable) cache_.emplace(&node, r);
    return r;
  }

  GenRel prim(const Prim& p, const VarEnv& eta) {
    switch (p.kind) {
      case Prim::Kind::PointsTo: {
        const Loc l = eval_expr(*p.lhs, eta);
        if (l <= 0) return GenRel::empty(n_);
        return diagonal_cell(n_, l, eval_expr(*p.rhs, eta));
      }
      case Prim::Kind::NonEmpty: {
        std::vector<HeapTuple> gens;
        for (Loc l = 1; l <= dom_.loc_bound; ++l) {
          for (Val v : dom_.values) gens.emplace_back(static_cast<std::size_t>(n_), Heap::cell(l, v));
        }
        return GenRel(n_, std::move(gens));
      }
      case Prim::Kind::Compare:
        return compare(p.op, eval_expr(*p.lhs, eta), eval_expr(*p.rhs, eta)) ? GenRel::top(n_)
                                                                              : GenRel::empty(n_);
    }
    return GenRel::empty(n_);
  }

  static Val eval_expr(const Expr& e, const VarEnv& eta) { return liftsl::eval(e, eta); }

  GenRel compute(const Node& node, VarEnv& eta, int binders) {
    switch (node.kind) {
      case Node::Kind::Prim:
        return prim(node.prim, eta);
      case Node::Kind::AVar:
        return rho_->at(node.name);
      case Node::Kind::True:
        return GenRel::top(n_);
      case Node::Kind::False:
        return GenRel::empty(n_);
      case Node::Kind::Star:
        return star(eval(*node.lhs, eta, binders), eval(*node.rhs, eta, binders));
      case Node::Kind::And: {
        GenRel l = eval(*node.lhs, eta, binders);
        if (l.is_empty()) return l;
        return meet(l, eval(*node.rhs, eta, binders));
      }
      case Node::Kind::Or:
        return rel_union(eval(*node.lhs, eta, binders), eval(*node.rhs, eta, binders));
      case Node::Kind::Forall:
      case Node::Kind::Exists: {
        const bool exists = node.kind == Node::Kind::Exists;
        std::optional<Val> saved;
        if (auto it = eta.find(node.name); it != eta.end()) saved = it->second;
        std::optional<GenRel> acc;
        for (Val v : dom_.values) {
          eta[node.name] = v;
          GenRel body = eval(*node.lhs, eta, binders + 1);
          acc = !acc ? body : exists ? rel_union(*acc, body) : meet(*acc, body);
        }
        if (saved) eta[node.name] = *saved; else eta.erase(node.name);
        return *acc;
      }
    }
    return GenRel::empty(n_);
  }

  const VarEnv& eta_;
  const ValueDomain& dom_;
  int n_;
  const AssertEnv* rho_ = nullptr;
  std::unordered_map<const Node*, GenRel> cache_;
  std::unordered_map<const Node*, bool> avar_free_;
};

std::size_t cells_of(const HeapTuple& t) {
  std::size_t c = 0;
  for (const auto& h : t) c += h.size();
  return c;
}

// Candidate relations grouped by generator count.
std::vector<std::vector<GenRel>> candidates_by_size(int n, const SearchBudget& budget) {
  const auto heaps = enumerate_heaps(budget.max_locs, budget.values, budget.max_heap_size);
  std::vector<HeapTuple> tuples{HeapTuple{}};
  for (int k = 0; k < n; ++k) {
    std::vector<HeapTuple> next;
    for (const auto& t : tuples) {
      for (const auto& h : heaps) {
        auto s = t;
        s.push_back(h);
        next.push_back(std::move(s));
      }
    }
    tuples = std::move(next);
  }
  std::stable_sort(tuples.begin(), tuples.end(), [](const HeapTuple& a, const HeapTuple& b) {
    const auto ca = cells_of(a), cb = cells_of(b);
    if (ca != cb) return ca < cb;
    return a < b;
  });

  const std::size_t T = tuples.size();
  std::vector<std::vector<bool>> comparable(T, std::vector<bool>(T));
  for (std::size_t i = 0; i < T; ++i) {
    for (std::size_t j = 0; j < T; ++j) {
      comparable[i][j] = i == j || tuple_extends(tuples[i], tuples[j]) || tuple_extends(tuples[j], tuples[i]);
    }
  }

  std::vector<std::vector<GenRel>> out(static_cast<std::size_t>(budget.max_gens) + 1);
  out[0].push_back(GenRel::empty(n));
  std::vector<std::size_t> pick;
  // Depth-first over increasing index sequences of pairwise incomparable tuples.
  auto extend = [&](auto&& self, std::size_t from) -> void {
    if (!pick.empty()) {
      std::vector<HeapTuple> gens;
      for (auto i : pick) gens.push_back(tuples[i]);
      out[pick.size()].emplace_back(n, std::move(gens));
    }
    if (pick.size() == static_cast<std::size_t>(budget.max_gens)) return;
    for (std::size_t i = from; i < T; ++i) {
      bool ok = true;
      for (auto p : pick) ok = ok && !comparable[p][i];
      if (!ok) continue;
      pick.push_back(i);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  extend(extend, 0);
  return out;
}

// Compositions of `total` into `parts` parts, each at most `cap`, in
// lexicographic order.
void compositions(int total, int parts, int cap, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out) {
  if (parts == 0) {
    if (total == 0) out.push_back(cur);
    return;
  }
  for (int v = 0; v <= std::min(total, cap); ++v) {
    if (total - v > cap * (parts - 1)) continue;
    cur.push_back(v);
    compositions(total - v, parts - 1, cap, cur, out);
    cur.pop_back();
  }
}

}  // namespace

GenRel interpret(const Assertion& phi, const VarEnv& eta, const AssertEnv& rho,
                 const ValueDomain& dom) {
  Interpreter in(eta, dom, rho.arity);
  return in.run(phi, rho);
}

GenRel interpret_unary(const Assertion& phi, const VarEnv& eta, const ValueDomain& dom) {
  return interpret(phi, eta, AssertEnv{1, {}}, dom);
}

bool env_valid(const Assertion& lhs, const Assertion& rhs, const VarEnv& eta,
               const AssertEnv& rho, const ValueDomain& dom) {
  Interpreter in(eta, dom, rho.arity);
  return included(in.run(lhs, rho), in.run(rhs, rho));
}

std::vector<GenRel> candidate_relations(int n, const SearchBudget& budget) {
  std::vector<GenRel> flat;
  for (auto& group : candidates_by_size(n, budget)) {
    for (auto& r : group) flat.push_back(std::move(r));
  }
  return flat;
}

SearchReport find_counter_env(const Assertion& lhs, const Assertion& rhs, const VarEnv& eta,
                              int n, const SearchBudget& budget, const ValueDomain& dom) {
  if (n < 1) throw std::invalid_argument("arity must be positive");
  if (budget.max_gens < 0 || budget.max_locs < 1 || budget.values.empty()) {
    throw std::invalid_argument("search budget out of range");
  }
  SearchReport report;
  report.arity = n;
  report.budget = budget;

  std::vector<std::string> vars;
  for (const auto& v : avars_of(lhs)) vars.push_back(v);
  for (const auto& v : avars_of(rhs)) {
    if (!std::count(vars.begin(), vars.end(), v)) vars.push_back(v);
  }
  std::sort(vars.begin(), vars.end());

  const auto cands = candidates_by_size(n, budget);
  const int workers = std::max(1, budget.threads);

  // Evaluates one ρ; returns the witness when it refutes the implication.
  auto try_env = [&](Interpreter& in, const AssertEnv& rho) -> std::optional<HeapTuple> {
    GenRel l = in.run(lhs, rho);
    if (l.is_empty()) return std::nullopt;
    return escaping_generator(l, in.run(rhs, rho));
  };

  if (vars.empty()) {
    Interpreter in(eta, dom, n);
    AssertEnv rho{n, {}};
    report.candidates = 1;
    if (auto w = try_env(in, rho)) report.found = CounterEnv{rho, *w};
    return report;
  }

  const int k = static_cast<int>(vars.size());
  std::vector<Interpreter> interpreters;
  interpreters.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) interpreters.emplace_back(eta, dom, n);

  for (int total = 0; total <= budget.max_gens * k; ++total) {
    std::vector<std::vector<int>> shapes;
    std::vector<int> cur;
    compositions(total, k, budget.max_gens, cur, shapes);
    for (const auto& shape : shapes) {
      std::size_t space = 1;
      bool empty_space = false;
      for (int v = 0; v < k; ++v) {
        const auto size = cands[static_cast<std::size_t>(shape[v])].size();
        if (size == 0) empty_space = true;
        space *= std::max<std::size_t>(size, 1);
      }
      if (empty_space) continue;

      auto env_at = [&](std::size_t index) {
        AssertEnv rho{n, {}};
        // Odometer with the last variable moving fastest.
        for (int v = k - 1; v >= 0; --v) {
          const auto& group = cands[static_cast<std::size_t>(shape[v])];
          rho.rels.emplace(vars[static_cast<std::size_t>(v)], group[index % group.size()]);
          index /= group.size();
        }
        return rho;
      };

      std::atomic<std::size_t> best{space};
      std::optional<CounterEnv> hit;
      std::mutex hit_mutex;
      std::atomic<std::size_t> next_block{0};
      constexpr std::size_t kBlock = 512;

      auto worker = [&](int id) {
        for (;;) {
          const std::size_t start = next_block.fetch_add(kBlock);
          if (start >= space || start >= best.load()) return;
          const std::size_t stop = std::min(space, start + kBlock);
          for (std::size_t i = start; i < stop && i < best.load(); ++i) {
            AssertEnv rho = env_at(i);
            if (auto w = try_env(interpreters[static_cast<std::size_t>(id)], rho)) {
              std::lock_guard<std::mutex> lock(hit_mutex);
              if (i < best.load()) {
                best = i;
                hit = CounterEnv{std::move(rho), std::move(*w)};
              }
              break;
            }
          }
        }
      };

      if (workers == 1) {
        worker(0);
      } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker, w);
        for (auto& t : pool) t.join();
      }
      if (hit) {
        // Count candidates up to and including the hit, independent of
        // how much speculative work other workers did.
        report.candidates += best.load() + 1;
        report.found = std::move(hit);
        return report;
      }
      report.candidates += space;
    }
  }
  return report;
}

}  // namespace liftsl
