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

// Temporal states and transition matrices tied to a slot layout.

#ifndef XDDPIPE_ALGEBRA_HPP
#define XDDPIPE_ALGEBRA_HPP

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "xddpipe/semiring.hpp"
#include "xddpipe/xdd.hpp"

namespace xddpipe {

/// Whether a slot records vertex start times (ρ) or end times (ρ*).
enum class TimingPoint : std::uint8_t { kStart, kEnd, kPointer };

struct Slot {
  std::string name;
  TimingPoint point = TimingPoint::kStart;
};

class SlotLayout {
 public:
  /// Exactly one slot must be the time pointer. Names must be unique.
  explicit SlotLayout(std::vector<Slot> slots);

  Eigen::Index size() const { return static_cast<Eigen::Index>(slots_.size()); }
  Eigen::Index rho() const { return rho_; }
  const Slot& slot(Eigen::Index i) const;
  /// Throws std::out_of_range for unknown names.
  Eigen::Index index_of(const std::string& name) const;
  bool contains(const std::string& name) const { return by_name_.count(name) != 0; }

  friend bool operator==(const SlotLayout& a, const SlotLayout& b);

 private:
  std::vector<Slot> slots_;
  std::unordered_map<std::string, Eigen::Index> by_name_;
  Eigen::Index rho_ = -1;
};

using LayoutPtr = std::shared_ptr<const SlotLayout>;

class StateVector {
 public:
  StateVector() = default;
  /// Every slot 𝟘.
  StateVector(XddStore& store, LayoutPtr layout);
  StateVector(LayoutPtr layout, SemiringRow<Xdd> slots);

  const LayoutPtr& layout() const { return layout_; }
  Eigen::Index size() const { return slots_.size(); }
  Xdd operator[](Eigen::Index i) const { return slots_(i); }
  Xdd& operator[](Eigen::Index i) { return slots_(i); }
  Xdd rho() const { return slots_(layout_->rho()); }
  Xdd& rho() { return slots_(layout_->rho()); }
  const SemiringRow<Xdd>& row() const { return slots_; }
  SemiringRow<Xdd>& row() { return slots_; }

  friend bool operator==(const StateVector& a, const StateVector& b);

 private:
  LayoutPtr layout_;
  SemiringRow<Xdd> slots_;
};

struct StateVectorHash {
  std::size_t operator()(const StateVector& s) const;
};

class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  TransitionMatrix(LayoutPtr layout, SemiringMatrix<Xdd> m);

  const LayoutPtr& layout() const { return layout_; }
  Eigen::Index size() const { return m_.rows(); }
  Xdd operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  const SemiringMatrix<Xdd>& matrix() const { return m_; }
  SemiringMatrix<Xdd>& matrix() { return m_; }

  friend bool operator==(const TransitionMatrix& a, const TransitionMatrix& b);

 private:
  LayoutPtr layout_;
  SemiringMatrix<Xdd> m_;
};

/// Throws LayoutMismatch unless both layouts are the same shape.
void require_same_layout(const LayoutPtr& a, const LayoutPtr& b);

Xdd dot(const StateVector& u, const StateVector& v);
TransitionMatrix mat_mul(const TransitionMatrix& b, const TransitionMatrix& c);
StateVector vec_mat(const StateVector& s, const TransitionMatrix& m);
StateVector vec_oplus(const StateVector& u, const StateVector& v);

TransitionMatrix identity(XddStore& store, const LayoutPtr& layout);
TransitionMatrix m_reset(XddStore& store, const LayoutPtr& layout);
TransitionMatrix m_wait(XddStore& store, const LayoutPtr& layout, Eigen::Index x);
TransitionMatrix m_move(XddStore& store, const LayoutPtr& layout, Eigen::Index src,
                        Eigen::Index dest);
TransitionMatrix m_consume(XddStore& store, const LayoutPtr& layout, Xdd lambda);

/// Slot-named grid; 𝟘 and 𝟙 abbreviated, other entries in diagram text form.
std::string to_text(const TransitionMatrix& m);
/// One "name = diagram" line per slot.
std::string to_text(const StateVector& s);

}  // namespace xddpipe

#endif  // XDDPIPE_ALGEBRA_HPP
