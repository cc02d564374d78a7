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

#include "xddpipe/algebra.hpp"

#include <sstream>
#include <stdexcept>

#include "xddpipe/errors.hpp"

namespace xddpipe {

SlotLayout::SlotLayout(std::vector<Slot> slots) : slots_(std::move(slots)) {
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    auto idx = static_cast<Eigen::Index>(i);
    if (!by_name_.emplace(slots_[i].name, idx).second)
      throw std::invalid_argument("duplicate slot name: " + slots_[i].name);
    if (slots_[i].point == TimingPoint::kPointer) {
      if (rho_ >= 0) throw std::invalid_argument("layout has two time pointers");
      rho_ = idx;
    }
  }
  if (rho_ < 0) throw std::invalid_argument("layout has no time pointer");
}

const Slot& SlotLayout::slot(Eigen::Index i) const {
  if (i < 0 || i >= size()) throw std::out_of_range("slot index " + std::to_string(i));
  return slots_[static_cast<std::size_t>(i)];
}

Eigen::Index SlotLayout::index_of(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw std::out_of_range("unknown slot: " + name);
  return it->second;
}

bool operator==(const SlotLayout& a, const SlotLayout& b) {
  if (a.slots_.size() != b.slots_.size()) return false;
  for (std::size_t i = 0; i < a.slots_.size(); ++i)
    if (a.slots_[i].name != b.slots_[i].name || a.slots_[i].point != b.slots_[i].point)
      return false;
  return true;
}

void require_same_layout(const LayoutPtr& a, const LayoutPtr& b) {
  if (a == b) return;
  if (!a || !b || !(*a == *b)) throw LayoutMismatch("operands use different slot layouts");
}

StateVector::StateVector(XddStore& store, LayoutPtr layout)
    : layout_(std::move(layout)), slots_(zeros(XddSemiring(store), layout_->size())) {}

StateVector::StateVector(LayoutPtr layout, SemiringRow<Xdd> slots)
    : layout_(std::move(layout)), slots_(std::move(slots)) {
  if (slots_.size() != layout_->size()) throw LayoutMismatch("state length differs from layout");
}

bool operator==(const StateVector& a, const StateVector& b) {
  if (a.slots_.size() != b.slots_.size()) return false;
  for (Eigen::Index i = 0; i < a.slots_.size(); ++i)
    if (!(a.slots_(i) == b.slots_(i))) return false;
  return true;
}

std::size_t StateVectorHash::operator()(const StateVector& s) const {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (Eigen::Index i = 0; i < s.size(); ++i) h = (h ^ s[i].id()) * 0x100000001b3ULL;
  return h;
}

TransitionMatrix::TransitionMatrix(LayoutPtr layout, SemiringMatrix<Xdd> m)
    : layout_(std::move(layout)), m_(std::move(m)) {
  if (m_.rows() != layout_->size() || m_.cols() != layout_->size())
    throw LayoutMismatch("matrix dimension differs from layout");
}

bool operator==(const TransitionMatrix& a, const TransitionMatrix& b) {
  if (a.m_.rows() != b.m_.rows() || a.m_.cols() != b.m_.cols()) return false;
  for (Eigen::Index i = 0; i < a.m_.size(); ++i)
    if (!(a.m_.data()[i] == b.m_.data()[i])) return false;
  return true;
}

namespace {

XddSemiring semiring_of(const SemiringRow<Xdd>& v) { return XddSemiring(v(0).store()); }
XddSemiring semiring_of(const SemiringMatrix<Xdd>& m) { return XddSemiring(m(0, 0).store()); }

}  // namespace

Xdd dot(const StateVector& u, const StateVector& v) {
  require_same_layout(u.layout(), v.layout());
  return dot(semiring_of(u.row()), u.row(), v.row());
}

TransitionMatrix mat_mul(const TransitionMatrix& b, const TransitionMatrix& c) {
  require_same_layout(b.layout(), c.layout());
  return TransitionMatrix(b.layout(), mat_mul(semiring_of(b.matrix()), b.matrix(), c.matrix()));
}

StateVector vec_mat(const StateVector& s, const TransitionMatrix& m) {
  require_same_layout(s.layout(), m.layout());
  return StateVector(s.layout(), vec_mat(semiring_of(s.row()), s.row(), m.matrix()));
}

StateVector vec_oplus(const StateVector& u, const StateVector& v) {
  require_same_layout(u.layout(), v.layout());
  return StateVector(u.layout(), vec_oplus(semiring_of(u.row()), u.row(), v.row()));
}

namespace {

void check_index(const LayoutPtr& layout, Eigen::Index i) {
  if (i < 0 || i >= layout->size())
    throw std::out_of_range("slot index " + std::to_string(i) + " outside layout");
}

}  // namespace

TransitionMatrix identity(XddStore& store, const LayoutPtr& layout) {
  return TransitionMatrix(layout, identity(XddSemiring(store), layout->size()));
}

TransitionMatrix m_reset(XddStore& store, const LayoutPtr& layout) {
  return TransitionMatrix(layout, m_reset(XddSemiring(store), layout->size(), layout->rho()));
}

TransitionMatrix m_wait(XddStore& store, const LayoutPtr& layout, Eigen::Index x) {
  check_index(layout, x);
  return TransitionMatrix(layout, m_wait(XddSemiring(store), layout->size(), layout->rho(), x));
}

TransitionMatrix m_move(XddStore& store, const LayoutPtr& layout, Eigen::Index src,
                        Eigen::Index dest) {
  check_index(layout, src);
  check_index(layout, dest);
  return TransitionMatrix(layout, m_move(XddSemiring(store), layout->size(), src, dest));
}

TransitionMatrix m_consume(XddStore& store, const LayoutPtr& layout, Xdd lambda) {
  return TransitionMatrix(layout,
                          m_consume(XddSemiring(store), layout->size(), layout->rho(), lambda));
}

namespace {

std::string entry_text(Xdd x) {
  if (x == x.store().zero()) return "𝟘";
  if (x == x.store().one()) return "𝟙";
  return to_text(x);
}

}  // namespace

std::string to_text(const TransitionMatrix& m) {
  const SlotLayout& l = *m.layout();
  std::ostringstream os;
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    os << l.slot(i).name << ":";
    for (Eigen::Index j = 0; j < m.size(); ++j) {
      Xdd x = m(i, j);
      if (x == x.store().zero()) continue;
      os << ' ' << l.slot(j).name << '=' << entry_text(x);
    }
    os << '\n';
  }
  return os.str();
}

std::string to_text(const StateVector& s) {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    os << s.layout()->slot(i).name << " = " << entry_text(s[i]) << '\n';
  return os.str();
}

}  // namespace xddpipe
