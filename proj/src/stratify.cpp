#include "fuzzynf/stratify.hpp"

#include <deque>
#include <set>

namespace fnf {

StratConstraint StratConstraint::diff(std::string a, std::string b, int delta, SourcePos origin,
                                      std::string atom) {
  return StratConstraint{Kind::Diff, std::move(a), std::move(b), delta, origin, std::move(atom)};
}

StratConstraint StratConstraint::eq(std::string a, std::string b, SourcePos origin, std::string atom) {
  return StratConstraint{Kind::Eq, std::move(a), std::move(b), 0, origin, std::move(atom)};
}

std::string StratConstraint::to_string() const {
  if (kind == Kind::Eq) return "Eq(" + a + ", " + b + ")";
  return "Diff(" + a + ", " + b + ", " + std::to_string(delta) + ")";
}

bool StratTyping::satisfies(std::span<const StratConstraint> cs) const {
  for (const auto& c : cs) {
    auto ia = assignment.find(c.a);
    auto ib = assignment.find(c.b);
    if (ia == assignment.end() || ib == assignment.end()) return false;
    if (ia->second != ib->second + c.delta) return false;
  }
  return true;
}

std::string InconsistencyCertificate::to_string() const {
  std::string out;
  for (const auto& s : cycle) {
    if (!out.empty()) out += ", ";
    out += s.constraint.atom.empty() ? s.constraint.to_string() : s.constraint.atom;
    out += " [" + s.from + "->" + s.to + ": " + (s.step >= 0 ? "+" : "") + std::to_string(s.step) + "]";
  }
  return "cycle " + out + " sums to " + std::to_string(sum);
}

namespace {

class ConstraintCollector {
 public:
  explicit ConstraintCollector(const Formula& f) {
    for (const auto& v : free_variables(f)) used_.insert(v.name);
    for (const auto& c : constants_of(f)) used_.insert(c);
  }

  std::vector<StratConstraint> run(const Formula& f) {
    visit(f);
    return std::move(out_);
  }

 private:
  std::string key(const Term& t) const {
    if (t.is_var()) {
      for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
        if (it->first == t.name) return it->second;
      }
    }
    return t.name;
  }

  void visit(const Formula& f) {
    const auto& t = f.terms();
    switch (f.kind()) {
      case NodeKind::CrispIn:
      case NodeKind::MuEq:
      case NodeKind::MuLt:
        out_.push_back(StratConstraint::diff(key(t[0]), key(t[1]), -1, f.pos(), print(f)));
        return;
      case NodeKind::SetEq:
        out_.push_back(StratConstraint::eq(key(t[0]), key(t[1]), f.pos(), print(f)));
        return;
      case NodeKind::DegLt:
      case NodeKind::DegEq:
        return;
      case NodeKind::Forall:
      case NodeKind::Exists: {
        const Var& v = f.bound();
        if (v.sort == Sort::Degree) {
          visit(f.body());
          return;
        }
        std::string k = v.name;
        for (int i = 1; used_.count(k); ++i) k = v.name + "#" + std::to_string(i);
        used_.insert(k);
        scope_.emplace_back(v.name, k);
        visit(f.body());
        scope_.pop_back();
        return;
      }
      default:
        for (const auto& c : f.children()) visit(c);
    }
  }

  std::set<std::string> used_;
  std::vector<std::pair<std::string, std::string>> scope_;
  std::vector<StratConstraint> out_;
};

struct Edge {
  std::size_t constraint;
  std::size_t other;
  int step;  // type(other) - type(self)
};

class OffsetUnionFind {
 public:
  std::size_t id(const std::string& name) {
    auto [it, fresh] = index_.emplace(name, names_.size());
    if (fresh) {
      names_.push_back(name);
      parent_.push_back(it->second);
      offset_.push_back(0);
      tree_.emplace_back();
    }
    return it->second;
  }

  // Returns (root, type(v) - type(root)).
  std::pair<std::size_t, long> find(std::size_t v) {
    long acc = 0;
    std::size_t r = v;
    while (parent_[r] != r) {
      acc += offset_[r];
      r = parent_[r];
    }
    // Path compression with offset fix-up.
    long rem = acc;
    while (parent_[v] != v) {
      std::size_t next = parent_[v];
      long here = offset_[v];
      parent_[v] = r;
      offset_[v] = rem;
      rem -= here;
      v = next;
    }
    return {r, acc};
  }

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  std::vector<std::size_t>& parent() { return parent_; }
  std::vector<long>& offset() { return offset_; }
  std::vector<std::vector<Edge>>& tree() { return tree_; }

 private:
  std::map<std::string, std::size_t> index_;
  std::vector<std::string> names_;
  std::vector<std::size_t> parent_;
  std::vector<long> offset_;
  std::vector<std::vector<Edge>> tree_;
};

}  // namespace

std::vector<StratConstraint> collect_constraints(const Formula& f) { return ConstraintCollector(f).run(f); }

std::variant<StratTyping, InconsistencyCertificate> solve_constraints(std::span<const StratConstraint> cs,
                                                                      std::span<const std::string> extra) {
  OffsetUnionFind uf;
  for (const auto& name : extra) uf.id(name);

  for (std::size_t ci = 0; ci < cs.size(); ++ci) {
    const auto& c = cs[ci];
    std::size_t a = uf.id(c.a), b = uf.id(c.b);
    auto [ra, pa] = uf.find(a);
    auto [rb, pb] = uf.find(b);
    if (ra != rb) {
      // type(a) - type(b) = delta  =>  type(ra) - type(rb) = delta - pa + pb
      uf.parent()[ra] = rb;
      uf.offset()[ra] = c.delta - pa + pb;
      uf.tree()[b].push_back({ci, a, c.delta});
      uf.tree()[a].push_back({ci, b, -c.delta});
      continue;
    }
    if (pa - pb == c.delta) continue;

    // Conflict: walk the spanning tree from a to b, then close the cycle with c.
    std::vector<long> prev_edge(uf.size(), -1);
    std::vector<std::size_t> prev_node(uf.size(), 0);
    std::vector<bool> seen(uf.size(), false);
    std::deque<std::size_t> queue{a};
    seen[a] = true;
    while (!queue.empty() && !seen[b]) {
      std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t k = 0; k < uf.tree()[u].size(); ++k) {
        const Edge& e = uf.tree()[u][k];
        if (seen[e.other]) continue;
        seen[e.other] = true;
        prev_node[e.other] = u;
        prev_edge[e.other] = static_cast<long>(k);
        queue.push_back(e.other);
      }
    }
    InconsistencyCertificate cert;
    std::vector<CycleStep> path;
    for (std::size_t v = b; v != a;) {
      std::size_t u = prev_node[v];
      const Edge& e = uf.tree()[u][static_cast<std::size_t>(prev_edge[v])];
      path.push_back({cs[e.constraint], uf.name(u), uf.name(v), e.step});
      v = u;
    }
    cert.cycle.assign(path.rbegin(), path.rend());
    cert.cycle.push_back({c, c.b, c.a, c.delta});
    for (const auto& s : cert.cycle) cert.sum += s.step;
    return cert;
  }

  StratTyping typing;
  std::map<std::size_t, long> least;
  std::vector<std::pair<std::size_t, long>> roots(uf.size());
  for (std::size_t v = 0; v < uf.size(); ++v) {
    roots[v] = uf.find(v);
    auto [it, fresh] = least.emplace(roots[v].first, roots[v].second);
    if (!fresh) it->second = std::min(it->second, roots[v].second);
  }
  for (std::size_t v = 0; v < uf.size(); ++v) {
    typing.assignment[uf.name(v)] = static_cast<int>(roots[v].second - least[roots[v].first]);
  }
  return typing;
}

StratResult is_stratified(const Formula& f) {
  StratResult r;
  r.constraints = collect_constraints(f);
  std::vector<std::string> extra;
  for (const auto& v : free_variables(f)) {
    if (v.sort == Sort::Set) extra.push_back(v.name);
  }
  for (const auto& c : constants_of(f)) extra.push_back(c);
  auto solved = solve_constraints(r.constraints, extra);
  if (auto* t = std::get_if<StratTyping>(&solved)) {
    r.stratified = true;
    r.typing = std::move(*t);
  } else {
    r.certificate = std::get<InconsistencyCertificate>(std::move(solved));
  }
  return r;
}

}  // namespace fnf
