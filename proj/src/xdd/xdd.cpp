// Copyright 2026 The xddpipe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "xddpipe/xdd.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "xddpipe/errors.hpp"

namespace xddpipe {

namespace {

constexpr std::uint64_t kLeafOrder = std::numeric_limits<std::uint64_t>::max();

std::size_t mix(std::size_t h, std::uint64_t v) {
  v *= 0x9e3779b97f4a7c15ULL;
  v ^= v >> 31;
  return h ^ (v + 0x9e3779b9 + (h << 6) + (h >> 2));
}

bool commutative(BinaryOp op) {
  return op == BinaryOp::kMax || op == BinaryOp::kPlus || op == BinaryOp::kMin;
}

}  // namespace

// ---------------------------------------------------------------------------
// Xdd

bool Xdd::is_leaf() const { return store().at(id_).is_leaf; }

ExtTime Xdd::leaf_value() const {
  const auto& n = store().at(id_);
  if (!n.is_leaf) throw std::logic_error("leaf_value() on a node");
  return n.leaf;
}

EventId Xdd::event() const {
  const auto& n = store().at(id_);
  if (n.is_leaf) throw std::logic_error("event() on a leaf");
  return n.event;
}

Xdd Xdd::lo() const {
  const auto& n = store().at(id_);
  if (n.is_leaf) throw std::logic_error("lo() on a leaf");
  return Xdd(store_, n.lo);
}

Xdd Xdd::hi() const {
  const auto& n = store().at(id_);
  if (n.is_leaf) throw std::logic_error("hi() on a leaf");
  return Xdd(store_, n.hi);
}

XddStore& Xdd::store() const {
  if (store_ == nullptr) throw std::logic_error("null Xdd handle");
  return *store_;
}

// ---------------------------------------------------------------------------
// Configuration

Configuration::Configuration(const std::vector<EventId>& domain,
                             const std::vector<EventId>& active) {
  for (EventId e : domain) values_[e] = false;
  for (EventId e : active) values_[e] = true;
}

bool Configuration::active(EventId e) const {
  auto it = values_.find(e);
  if (it == values_.end())
    throw UndefinedEvent("configuration does not define event " + std::to_string(e.base) + "[" +
                         std::to_string(e.generation) + "]");
  return it->second;
}

// ---------------------------------------------------------------------------
// XddStore

std::size_t XddStore::NodeKeyHash::operator()(const NodeKey& k) const {
  return mix(mix(mix(0, k.order), k.lo), k.hi);
}

std::size_t XddStore::MemoKeyHash::operator()(const MemoKey& k) const {
  return mix(mix(mix(0, static_cast<std::uint64_t>(k.op)), k.f), k.g);
}

XddStore::XddStore() {
  zero_ = leaf(ExtTime::neg_inf());
  one_ = leaf(0);
  pos_inf_ = leaf(ExtTime::pos_inf());
}

Xdd XddStore::leaf(ExtTime k) {
  auto [it, fresh] = leaves_.try_emplace(k.raw(), static_cast<std::uint32_t>(nodes_.size()));
  if (fresh) {
    Node n;
    n.leaf = k;
    nodes_.push_back(n);
  }
  return handle(it->second);
}

std::uint32_t XddStore::make_node(EventId e, std::uint32_t lo, std::uint32_t hi) {
  if (lo == hi) return lo;
  NodeKey key{e.order_index(), lo, hi};
  auto [it, fresh] = unique_.try_emplace(key, static_cast<std::uint32_t>(nodes_.size()));
  if (fresh) {
    Node n;
    n.event = e;
    n.lo = lo;
    n.hi = hi;
    n.is_leaf = false;
    nodes_.push_back(n);
  }
  return it->second;
}

Xdd XddStore::node(EventId e, Xdd lo, Xdd hi) {
  if (&lo.store() != this || &hi.store() != this)
    throw std::invalid_argument("node(): children from another store");
  for (Xdd c : {lo, hi}) {
    const Node& n = at(c.id());
    if (!n.is_leaf && n.event.order_index() <= e.order_index())
      throw OrderingViolation("node " + event_label(e) + " above " + event_label(n.event) +
                              " breaks the event order");
  }
  return handle(make_node(e, lo.id(), hi.id()));
}

std::uint32_t XddStore::new_event_base(std::string name) {
  event_names_.push_back(std::move(name));
  return static_cast<std::uint32_t>(event_names_.size() - 1);
}

const std::string& XddStore::event_name(std::uint32_t base) const {
  if (base >= event_names_.size()) {
    static const std::string kAnon = "e";
    return kAnon;
  }
  return event_names_[base];
}

std::string XddStore::event_label(EventId e) const {
  std::string name = e.base < event_names_.size() ? event_names_[e.base]
                                                  : "e" + std::to_string(e.base);
  return name + "[" + std::to_string(e.generation) + "]";
}

ExtTime apply_scalar(BinaryOp op, ExtTime a, ExtTime b) {
  switch (op) {
    case BinaryOp::kMax: return std::max(a, b);
    case BinaryOp::kPlus: return a + b;
    case BinaryOp::kMin: return std::min(a, b);
    case BinaryOp::kMinus: return a - b;
    case BinaryOp::kSchedMe: return a <= b ? a : ExtTime::pos_inf();
    case BinaryOp::kSchedFe: return a < b ? a : ExtTime::pos_inf();
    case BinaryOp::kDropBelow: return a >= b ? a : ExtTime::neg_inf();
  }
  throw std::logic_error("unknown BinaryOp");
}

std::uint32_t XddStore::cofactor(std::uint32_t f, std::uint64_t order, bool present) const {
  const Node& n = at(f);
  if (n.is_leaf || n.event.order_index() != order) return f;
  return present ? n.hi : n.lo;
}

Xdd XddStore::apply(BinaryOp op, Xdd f, Xdd g) {
  if (&f.store() != this || &g.store() != this)
    throw std::invalid_argument("apply(): operands from another store");
  return handle(apply_rec(op, f.id(), g.id()));
}

std::uint32_t XddStore::apply_rec(BinaryOp op, std::uint32_t f, std::uint32_t g) {
  const std::uint32_t zero = zero_.id(), one = one_.id(), top = pos_inf_.id();
  switch (op) {
    case BinaryOp::kMax:
      if (f == g || g == zero || f == top) return f;
      if (f == zero || g == top) return g;
      break;
    case BinaryOp::kPlus:
      if (f == zero || g == zero) return zero;
      if (g == one) return f;
      if (f == one) return g;
      break;
    case BinaryOp::kMin:
      if (f == g || g == top || f == zero) return f;
      if (f == top || g == zero) return g;
      break;
    case BinaryOp::kMinus:
      if (g == one) return f;
      break;
    case BinaryOp::kSchedMe:
      if (f == g) return f;
      break;
    case BinaryOp::kSchedFe:
      if (f == g) return top;
      break;
    case BinaryOp::kDropBelow:
      if (f == g || g == zero) return f;
      break;
  }
  const Node& nf = at(f);
  const Node& ng = at(g);
  if (nf.is_leaf && ng.is_leaf) return leaf(apply_scalar(op, nf.leaf, ng.leaf)).id();

  if (commutative(op) && f > g) std::swap(f, g);
  MemoKey key{f, g, op};
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  const Node& a = at(f);
  const Node& b = at(g);
  std::uint64_t of = a.is_leaf ? kLeafOrder : a.event.order_index();
  std::uint64_t og = b.is_leaf ? kLeafOrder : b.event.order_index();
  EventId e = of <= og ? a.event : b.event;
  std::uint64_t o = std::min(of, og);
  std::uint32_t lo = apply_rec(op, cofactor(f, o, false), cofactor(g, o, false));
  std::uint32_t hi = apply_rec(op, cofactor(f, o, true), cofactor(g, o, true));
  std::uint32_t r = make_node(e, lo, hi);
  memo_.emplace(key, r);
  return r;
}

// Node testing `e` over lo/hi that may contain events ordered before `e`.
// `e` itself must not occur in lo or hi.
std::uint32_t XddStore::ite(EventId e, std::uint32_t lo, std::uint32_t hi,
                            std::unordered_map<NodeKey, std::uint32_t, NodeKeyHash>& memo) {
  if (lo == hi) return lo;
  const Node& a = at(lo);
  const Node& b = at(hi);
  std::uint64_t oa = a.is_leaf ? kLeafOrder : a.event.order_index();
  std::uint64_t ob = b.is_leaf ? kLeafOrder : b.event.order_index();
  std::uint64_t t = std::min(oa, ob);
  if (e.order_index() < t) return make_node(e, lo, hi);
  if (e.order_index() == t) throw std::invalid_argument("relabel(): rename is not injective");

  NodeKey key{e.order_index(), lo, hi};
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  EventId top = oa <= ob ? a.event : b.event;
  std::uint32_t l = ite(e, cofactor(lo, t, false), cofactor(hi, t, false), memo);
  std::uint32_t h = ite(e, cofactor(lo, t, true), cofactor(hi, t, true), memo);
  std::uint32_t r = make_node(top, l, h);
  memo.emplace(key, r);
  return r;
}

Xdd XddStore::relabel(Xdd f, const std::function<EventId(EventId)>& rename) {
  std::unordered_map<std::uint32_t, std::uint32_t> done;
  std::unordered_map<NodeKey, std::uint32_t, NodeKeyHash> ite_memo;
  std::function<std::uint32_t(std::uint32_t)> rec = [&](std::uint32_t id) -> std::uint32_t {
    const Node& n = at(id);
    if (n.is_leaf) return id;
    if (auto it = done.find(id); it != done.end()) return it->second;
    EventId e = n.event;
    std::uint32_t lo_in = n.lo, hi_in = n.hi;
    std::uint32_t lo = rec(lo_in);
    std::uint32_t hi = rec(hi_in);
    std::uint32_t r = ite(rename(e), lo, hi, ite_memo);
    done.emplace(id, r);
    return r;
  };
  return handle(rec(f.id()));
}

Xdd XddStore::eliminate(Xdd f, const std::function<bool(EventId)>& pred) {
  std::unordered_map<std::uint32_t, std::uint32_t> done;
  std::function<std::uint32_t(std::uint32_t)> rec = [&](std::uint32_t id) -> std::uint32_t {
    const Node& n = at(id);
    if (n.is_leaf) return id;
    if (auto it = done.find(id); it != done.end()) return it->second;
    EventId e = n.event;
    std::uint32_t lo_in = n.lo, hi_in = n.hi;
    std::uint32_t lo = rec(lo_in);
    std::uint32_t hi = rec(hi_in);
    std::uint32_t r = pred(e) ? apply_rec(BinaryOp::kMax, lo, hi) : make_node(e, lo, hi);
    done.emplace(id, r);
    return r;
  };
  return handle(rec(f.id()));
}

Xdd XddStore::restrict(Xdd f, EventId e, bool present) {
  std::unordered_map<std::uint32_t, std::uint32_t> done;
  const std::uint64_t o = e.order_index();
  std::function<std::uint32_t(std::uint32_t)> rec = [&](std::uint32_t id) -> std::uint32_t {
    const Node& n = at(id);
    if (n.is_leaf || n.event.order_index() > o) return id;
    if (n.event.order_index() == o) return present ? n.hi : n.lo;
    if (auto it = done.find(id); it != done.end()) return it->second;
    EventId ev = n.event;
    std::uint32_t lo_in = n.lo, hi_in = n.hi;
    std::uint32_t r = make_node(ev, rec(lo_in), rec(hi_in));
    done.emplace(id, r);
    return r;
  };
  return handle(rec(f.id()));
}

// ---------------------------------------------------------------------------
// Queries

ExtTime eval(Xdd f, const Configuration& gamma) {
  while (!f.is_leaf()) f = gamma.active(f.event()) ? f.hi() : f.lo();
  return f.leaf_value();
}

namespace {

template <typename Visit>
void for_each_node(Xdd f, Visit&& visit) {
  std::unordered_set<std::uint32_t> seen;
  std::vector<Xdd> todo{f};
  while (!todo.empty()) {
    Xdd x = todo.back();
    todo.pop_back();
    if (!seen.insert(x.id()).second) continue;
    visit(x);
    if (!x.is_leaf()) {
      todo.push_back(x.lo());
      todo.push_back(x.hi());
    }
  }
}

}  // namespace

std::vector<EventId> support(Xdd f) {
  std::vector<EventId> out;
  for_each_node(f, [&](Xdd x) {
    if (!x.is_leaf()) out.push_back(x.event());
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ExtTime max_leaf(Xdd f) {
  ExtTime m = ExtTime::neg_inf();
  for_each_node(f, [&](Xdd x) {
    if (x.is_leaf()) m = std::max(m, x.leaf_value());
  });
  return m;
}

ExtTime min_leaf(Xdd f) {
  ExtTime m = ExtTime::pos_inf();
  for_each_node(f, [&](Xdd x) {
    if (x.is_leaf()) m = std::min(m, x.leaf_value());
  });
  return m;
}

bool any_leaf(Xdd f, const std::function<bool(ExtTime)>& pred) {
  bool hit = false;
  for_each_node(f, [&](Xdd x) {
    if (!hit && x.is_leaf() && pred(x.leaf_value())) hit = true;
  });
  return hit;
}

std::size_t dag_size(Xdd f) {
  std::size_t n = 0;
  for_each_node(f, [&](Xdd) { ++n; });
  return n;
}

// ---------------------------------------------------------------------------
// Explicit maps

ExplicitMap to_explicit(Xdd f, std::vector<EventId> sup) {
  std::sort(sup.begin(), sup.end());
  sup.erase(std::unique(sup.begin(), sup.end()), sup.end());
  if (sup.size() > kMaxExplicitSupport)
    throw std::invalid_argument("explicit support of " + std::to_string(sup.size()) +
                                " events exceeds " + std::to_string(kMaxExplicitSupport));
  for (EventId e : support(f))
    if (!std::binary_search(sup.begin(), sup.end(), e))
      throw std::invalid_argument("explicit support misses event " + f.store().event_label(e));

  ExplicitMap m;
  m.support = sup;
  m.values.resize(std::size_t{1} << sup.size());
  Configuration gamma;
  for (std::size_t idx = 0; idx < m.values.size(); ++idx) {
    for (std::size_t k = 0; k < sup.size(); ++k) gamma.set(sup[k], (idx >> k) & 1U);
    m.values[idx] = eval(f, gamma);
  }
  return m;
}

Xdd from_explicit(XddStore& store, const ExplicitMap& m) {
  const std::size_t n = m.support.size();
  if (n > kMaxExplicitSupport)
    throw std::invalid_argument("explicit support exceeds " + std::to_string(kMaxExplicitSupport));
  if (m.values.size() != (std::size_t{1} << n))
    throw std::invalid_argument("explicit map size does not match its support");
  if (!std::is_sorted(m.support.begin(), m.support.end()) ||
      std::adjacent_find(m.support.begin(), m.support.end()) != m.support.end())
    throw std::invalid_argument("explicit support must be strictly ascending");

  std::function<Xdd(std::size_t, std::size_t)> build = [&](std::size_t level,
                                                           std::size_t idx) -> Xdd {
    if (level == n) return store.leaf(m.values[idx]);
    Xdd lo = build(level + 1, idx);
    Xdd hi = build(level + 1, idx | (std::size_t{1} << level));
    return store.node(m.support[level], lo, hi);
  };
  return build(0, 0);
}

// ---------------------------------------------------------------------------
// Printing

std::string to_text(Xdd f) {
  if (f.is_leaf()) return to_string(f.leaf_value());
  return f.store().event_label(f.event()) + "(" + to_text(f.lo()) + ", " + to_text(f.hi()) + ")";
}

std::string to_dot(Xdd f, const std::string& graph_name) {
  // Number nodes in depth-first, lo-before-hi order so the output is stable.
  std::unordered_map<std::uint32_t, std::size_t> number;
  std::vector<Xdd> order;
  std::function<void(Xdd)> visit = [&](Xdd x) {
    if (number.count(x.id())) return;
    number.emplace(x.id(), order.size());
    order.push_back(x);
    if (!x.is_leaf()) {
      visit(x.lo());
      visit(x.hi());
    }
  };
  visit(f);

  std::string out = "digraph \"" + graph_name + "\" {\n";
  for (Xdd x : order) {
    std::string id = "n" + std::to_string(number[x.id()]);
    if (x.is_leaf()) {
      out += "  " + id + " [shape=box,label=\"" + to_string(x.leaf_value()) + "\"];\n";
    } else {
      out += "  " + id + " [shape=circle,label=\"" + f.store().event_label(x.event()) + "\"];\n";
      out += "  " + id + " -> n" + std::to_string(number[x.lo().id()]) + " [style=dashed];\n";
      out += "  " + id + " -> n" + std::to_string(number[x.hi().id()]) + ";\n";
    }
  }
  out += "}\n";
  return out;
}

}  // namespace xddpipe
