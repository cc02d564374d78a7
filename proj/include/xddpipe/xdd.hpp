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

// Execution decision diagrams: reduced, ordered, hash-consed decision
// diagrams whose internal nodes test micro-architectural events and whose
// leaves hold extended cycle counts.

#ifndef XDDPIPE_XDD_HPP
#define XDDPIPE_XDD_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "xddpipe/ext_time.hpp"

namespace xddpipe {

/// One occurrence of an uncertain access. `base` names the static access,
/// `generation` counts loop restarts since the occurrence was created.
struct EventId {
  std::uint32_t base = 0;
  std::uint32_t generation = 0;

  /// Total order used by every diagram: generation first, then base
  /// creation sequence.
  constexpr std::uint64_t order_index() const {
    return (std::uint64_t{generation} << 32) | base;
  }
  friend constexpr bool operator==(EventId a, EventId b) {
    return a.base == b.base && a.generation == b.generation;
  }
  friend constexpr std::strong_ordering operator<=>(EventId a, EventId b) {
    return a.order_index() <=> b.order_index();
  }
};

class XddStore;

/// Handle to an interned diagram. Two handles from the same store are equal
/// iff the diagrams denote the same function. A default-constructed handle
/// is null and only good for assignment.
class Xdd {
 public:
  Xdd() = default;

  bool is_null() const { return store_ == nullptr; }
  bool is_leaf() const;
  /// Leaf value; throws std::logic_error on a node.
  ExtTime leaf_value() const;
  /// Event tested by a node; throws std::logic_error on a leaf.
  EventId event() const;
  /// Branch taken when the event is absent.
  Xdd lo() const;
  /// Branch taken when the event is present.
  Xdd hi() const;

  std::uint32_t id() const { return id_; }
  XddStore& store() const;

  friend bool operator==(Xdd a, Xdd b) { return a.store_ == b.store_ && a.id_ == b.id_; }

 private:
  friend class XddStore;
  Xdd(XddStore* s, std::uint32_t id) : store_(s), id_(id) {}

  XddStore* store_ = nullptr;
  std::uint32_t id_ = 0;
};

/// Pointwise binary operators on extended times that the store memoizes.
enum class BinaryOp : std::uint8_t {
  kMax,      ///< ⊕
  kPlus,     ///< ⊗
  kMin,      ///< ⊖
  kMinus,    ///< ⊘ (subtrahend must be finite)
  kSchedMe,  ///< f if f <= g else +inf
  kSchedFe,  ///< f if f < g else +inf
  kDropBelow ///< f if f >= g else -inf
};

/// Assignment of events to present/absent. Evaluation of an event the
/// configuration does not mention is an error.
class Configuration {
 public:
  Configuration() = default;
  /// `domain` events not listed in `active` are absent.
  Configuration(const std::vector<EventId>& domain, const std::vector<EventId>& active);

  void set(EventId e, bool present) { values_[e] = present; }
  bool defines(EventId e) const { return values_.count(e) != 0; }
  /// Throws UndefinedEvent.
  bool active(EventId e) const;

 private:
  std::map<EventId, bool> values_;
};

/// Configuration -> time table over a finite event support. Entry `i` is the
/// configuration where support[k] is present iff bit k of `i` is set.
struct ExplicitMap {
  std::vector<EventId> support;  // ascending event order
  std::vector<ExtTime> values;   // size 2^support.size()

  friend bool operator==(const ExplicitMap&, const ExplicitMap&) = default;
};

/// Largest support accepted by to_explicit/from_explicit.
inline constexpr std::size_t kMaxExplicitSupport = 20;

/// Owner of every node. Append-only unique tables plus per-operator memo
/// tables keyed by operand handles.
///
/// Not internally synchronized: one store belongs to one thread at a time.
class XddStore {
 public:
  XddStore();
  XddStore(const XddStore&) = delete;
  XddStore& operator=(const XddStore&) = delete;

  Xdd leaf(ExtTime k);
  Xdd zero() { return zero_; }     ///< LEAF(-inf)
  Xdd one() { return one_; }       ///< LEAF(0)
  Xdd pos_inf() { return pos_inf_; }

  /// Checked node constructor. Returns `lo` when lo == hi; throws
  /// OrderingViolation unless `e` precedes every event in lo and hi.
  Xdd node(EventId e, Xdd lo, Xdd hi);

  /// Registers a new static access; returns its base id. Bases are handed
  /// out in creation order.
  std::uint32_t new_event_base(std::string name);
  std::size_t event_base_count() const { return event_names_.size(); }
  const std::string& event_name(std::uint32_t base) const;
  /// "IC_3[0]"
  std::string event_label(EventId e) const;

  Xdd apply(BinaryOp op, Xdd f, Xdd g);

  /// Rebuilds `f` with every event renamed through `rename`, restoring the
  /// event order. `rename` must be injective on support(f).
  Xdd relabel(Xdd f, const std::function<EventId(EventId)>& rename);
  /// Replaces each node whose event satisfies `pred` by lo ⊕ hi.
  Xdd eliminate(Xdd f, const std::function<bool(EventId)>& pred);
  /// Cofactor of `f` with `e` fixed to `present`.
  Xdd restrict(Xdd f, EventId e, bool present);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t memo_size() const { return memo_.size(); }
  /// Drops memo tables. Never changes any later result.
  void clear_memo() { memo_.clear(); }

 private:
  friend class Xdd;

  struct Node {
    ExtTime leaf;
    EventId event;
    std::uint32_t lo = 0;
    std::uint32_t hi = 0;
    bool is_leaf = true;
  };
  struct NodeKey {
    std::uint64_t order;
    std::uint32_t lo, hi;
    friend bool operator==(const NodeKey&, const NodeKey&) = default;
  };
  struct NodeKeyHash {
    std::size_t operator()(const NodeKey& k) const;
  };
  struct MemoKey {
    std::uint32_t f, g;
    BinaryOp op;
    friend bool operator==(const MemoKey&, const MemoKey&) = default;
  };
  struct MemoKeyHash {
    std::size_t operator()(const MemoKey& k) const;
  };

  const Node& at(std::uint32_t id) const { return nodes_[id]; }
  Xdd handle(std::uint32_t id) { return Xdd(this, id); }
  std::uint32_t make_node(EventId e, std::uint32_t lo, std::uint32_t hi);
  std::uint32_t apply_rec(BinaryOp op, std::uint32_t f, std::uint32_t g);
  std::uint32_t cofactor(std::uint32_t f, std::uint64_t order, bool present) const;
  std::uint32_t ite(EventId e, std::uint32_t lo, std::uint32_t hi,
                    std::unordered_map<NodeKey, std::uint32_t, NodeKeyHash>& memo);

  std::vector<Node> nodes_;
  std::unordered_map<std::int64_t, std::uint32_t> leaves_;
  std::unordered_map<NodeKey, std::uint32_t, NodeKeyHash> unique_;
  std::unordered_map<MemoKey, std::uint32_t, MemoKeyHash> memo_;
  std::vector<std::string> event_names_;
  Xdd zero_, one_, pos_inf_;
};

// Semiring and scheduling operators.
inline Xdd oplus(Xdd f, Xdd g) { return f.store().apply(BinaryOp::kMax, f, g); }
inline Xdd otimes(Xdd f, Xdd g) { return f.store().apply(BinaryOp::kPlus, f, g); }
inline Xdd ominus(Xdd f, Xdd g) { return f.store().apply(BinaryOp::kMin, f, g); }
/// Throws std::domain_error when `g` has an infinite leaf.
inline Xdd oslash(Xdd f, Xdd g) { return f.store().apply(BinaryOp::kMinus, f, g); }
/// Configurations where the ME access is served first (ties go to ME);
/// +inf elsewhere.
inline Xdd sched_me(Xdd f_me, Xdd f_fe) { return f_me.store().apply(BinaryOp::kSchedMe, f_me, f_fe); }
/// Configurations where the FE access is strictly first; +inf elsewhere.
inline Xdd sched_fe(Xdd f_fe, Xdd f_me) { return f_fe.store().apply(BinaryOp::kSchedFe, f_fe, f_me); }
/// `f` where f >= floor, -inf elsewhere.
inline Xdd drop_below(Xdd f, Xdd floor) { return f.store().apply(BinaryOp::kDropBelow, f, floor); }

/// Pointwise operator behind each BinaryOp, exposed for oracles and tests.
ExtTime apply_scalar(BinaryOp op, ExtTime a, ExtTime b);

ExtTime eval(Xdd f, const Configuration& gamma);
/// Events on some path of `f`, ascending.
std::vector<EventId> support(Xdd f);
ExtTime max_leaf(Xdd f);
ExtTime min_leaf(Xdd f);
/// Whether some leaf satisfies `pred`.
bool any_leaf(Xdd f, const std::function<bool(ExtTime)>& pred);
/// Number of distinct nodes reachable from `f`, leaves included.
std::size_t dag_size(Xdd f);

/// `support` must cover support(f) and hold at most kMaxExplicitSupport
/// events; throws std::invalid_argument otherwise.
ExplicitMap to_explicit(Xdd f, std::vector<EventId> support);
Xdd from_explicit(XddStore& store, const ExplicitMap& m);

/// Nested text form, e.g. `DC_2[0](IC_1[0](3, 5), 7)`. Byte-stable.
std::string to_text(Xdd f);
/// Graphviz rendering; dashed edges are the absent branch.
std::string to_dot(Xdd f, const std::string& graph_name = "xdd");

}  // namespace xddpipe

#endif  // XDDPIPE_XDD_HPP
