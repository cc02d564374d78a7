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

#include <gtest/gtest.h>

#include <random>

#include "../support/random_xdd.hpp"
#include "xddpipe/errors.hpp"

namespace xddpipe {
namespace {

using testing::all_configurations;
using testing::LeafDist;
using testing::lookup;
using testing::make_events;
using testing::random_map;

// Order DC2 < IC1 < IC0, matching the diagram's root-to-leaf order.
struct Sample {
  XddStore store;
  EventId dc2{store.new_event_base("DC2"), 0};
  EventId ic1{store.new_event_base("IC1"), 0};
  EventId ic0{store.new_event_base("IC0"), 0};

  Xdd diagram() {
    Xdd left = store.node(ic1, store.node(ic0, store.leaf(7), store.leaf(16)), store.leaf(24));
    Xdd right = store.node(ic0, store.leaf(16), store.leaf(25));
    return store.node(dc2, left, right);
  }
  // Rows of the explicit table, indexed by (IC0, IC1, DC2) presence.
  ExplicitMap table() {
    ExplicitMap m;
    m.support = {dc2, ic1, ic0};  // bit0 = DC2, bit1 = IC1, bit2 = IC0
    m.values.resize(8);
    auto set = [&](bool ic0p, bool ic1p, bool dc2p, int t) {
      m.values[(dc2p ? 1 : 0) | (ic1p ? 2 : 0) | (ic0p ? 4 : 0)] = t;
    };
    set(true, true, true, 25);
    set(true, false, true, 25);
    set(false, true, true, 16);
    set(false, false, true, 16);
    set(true, true, false, 24);
    set(false, true, false, 24);
    set(true, false, false, 16);
    set(false, false, false, 7);
    return m;
  }
};

TEST(ExtTimeTest, AdditionRules) {
  EXPECT_EQ(ExtTime::neg_inf() + ExtTime::pos_inf(), ExtTime::neg_inf());
  EXPECT_EQ(ExtTime::pos_inf() + ExtTime::neg_inf(), ExtTime::neg_inf());
  EXPECT_EQ(ExtTime::pos_inf() + ExtTime(5), ExtTime::pos_inf());
  EXPECT_EQ(ExtTime(3) + ExtTime(4), ExtTime(7));
  EXPECT_LT(ExtTime::neg_inf(), ExtTime(-1000000));
  EXPECT_LT(ExtTime(1000000), ExtTime::pos_inf());
}

TEST(ExtTimeTest, OverflowIsAnError) {
  ExtTime big(std::numeric_limits<std::int64_t>::max() - 1);
  EXPECT_THROW(big + ExtTime(1), ArithmeticOverflow);
  EXPECT_THROW(ExtTime(std::numeric_limits<std::int64_t>::min()), ArithmeticOverflow);
  EXPECT_THROW(ExtTime(std::numeric_limits<std::int64_t>::min() + 1) - ExtTime(1),
               ArithmeticOverflow);
}

TEST(ExtTimeTest, SubtractionOfInfinities) {
  EXPECT_EQ(ExtTime::pos_inf() - ExtTime(5), ExtTime::pos_inf());
  EXPECT_EQ(ExtTime::neg_inf() - ExtTime(5), ExtTime::neg_inf());
  EXPECT_THROW(ExtTime(5) - ExtTime::pos_inf(), std::domain_error);
}

TEST(XddTest, LeavesAreInterned) {
  XddStore s;
  EXPECT_EQ(s.leaf(7), s.leaf(7));
  EXPECT_EQ(s.leaf(0), s.one());
  EXPECT_EQ(s.leaf(ExtTime::neg_inf()), s.zero());
  EXPECT_NE(s.leaf(7), s.leaf(8));
}

TEST(XddTest, NodeReductionAndOrdering) {
  XddStore s;
  EventId e1{s.new_event_base("a"), 0};
  EventId e2{s.new_event_base("b"), 0};
  Xdd l = s.leaf(3);
  EXPECT_EQ(s.node(e1, l, l), l);

  Xdd bus = s.node(e1, s.zero(), s.one());
  EXPECT_FALSE(bus.is_leaf());
  EXPECT_EQ(bus.lo(), s.zero());
  EXPECT_EQ(bus.hi(), s.one());

  Xdd inner = s.node(e1, s.leaf(1), s.leaf(2));
  EXPECT_THROW(s.node(e2, inner, l), OrderingViolation);
  EXPECT_THROW(s.node(e1, inner, l), OrderingViolation);
  EXPECT_NO_THROW(s.node(e1, s.node(e2, l, s.leaf(4)), l));
}

TEST(XddTest, GenerationOrdersBeforeBase) {
  XddStore s;
  EventId late{s.new_event_base("late"), 0};
  EventId early{s.new_event_base("early"), 0};
  EventId old{late.base, 1};
  EXPECT_LT(late, early);
  EXPECT_LT(early, old);
}

TEST(XddTest, SampleExplicitTableBuildsTheDiagram) {
  Sample f;
  Xdd d = f.diagram();
  EXPECT_EQ(from_explicit(f.store, f.table()), d);
  EXPECT_EQ(to_text(d), "DC2[0](IC1[0](IC0[0](7, 16), 24), IC0[0](16, 25))");
  EXPECT_EQ(d.event(), f.dc2);
  EXPECT_EQ(d.hi().event(), f.ic0);
  EXPECT_EQ(d.lo().event(), f.ic1);
}

TEST(XddTest, SampleEvaluation) {
  Sample f;
  Xdd d = f.diagram();
  std::vector<EventId> all{f.ic0, f.ic1, f.dc2};
  EXPECT_EQ(eval(d, Configuration(all, all)), ExtTime(25));
  EXPECT_EQ(eval(d, Configuration(all, {})), ExtTime(7));
  EXPECT_EQ(eval(d, Configuration(all, {f.ic1})), ExtTime(24));
  EXPECT_EQ(eval(f.store.leaf(9), Configuration()), ExtTime(9));
  EXPECT_THROW(eval(d, Configuration({f.dc2}, {})), UndefinedEvent);
}

TEST(XddTest, SampleOplusExample) {
  Sample f;
  auto& s = f.store;
  Xdd a = s.node(f.dc2, s.node(f.ic1, s.leaf(3), s.leaf(5)), s.node(f.ic0, s.leaf(4), s.leaf(6)));
  Xdd b = s.node(f.dc2, s.leaf(4), s.leaf(7));
  Xdd expected = s.node(f.dc2, s.node(f.ic1, s.leaf(4), s.leaf(5)), s.leaf(7));
  EXPECT_EQ(oplus(a, b), expected);
  EXPECT_EQ(to_text(oplus(a, b)), "DC2[0](IC1[0](4, 5), 7)");
}

TEST(XddTest, Support) {
  Sample f;
  EXPECT_TRUE(support(f.store.leaf(7)).empty());
  std::vector<EventId> expected{f.dc2, f.ic1, f.ic0};
  EXPECT_EQ(support(f.diagram()), expected);
}

TEST(XddTest, IdentitiesAndAnnihilator) {
  Sample f;
  Xdd d = f.diagram();
  auto& s = f.store;
  EXPECT_EQ(oplus(d, s.zero()), d);
  EXPECT_EQ(otimes(d, s.one()), d);
  EXPECT_EQ(otimes(d, s.zero()), s.zero());
  EXPECT_EQ(ominus(s.pos_inf(), s.leaf(5)), s.leaf(5));
  EXPECT_EQ(otimes(s.pos_inf(), s.zero()), s.zero());
}

TEST(XddTest, ScheduleOperatorsOnLeaves) {
  XddStore s;
  EXPECT_EQ(sched_me(s.leaf(5), s.leaf(5)), s.leaf(5));
  EXPECT_EQ(sched_me(s.leaf(5), s.leaf(3)), s.pos_inf());
  EXPECT_EQ(sched_fe(s.leaf(5), s.leaf(5)), s.pos_inf());
  EXPECT_EQ(sched_fe(s.zero(), s.leaf(5)), s.zero());
}

TEST(XddTest, OslashRejectsInfiniteSubtrahend) {
  Sample f;
  auto& s = f.store;
  EXPECT_THROW(oslash(f.diagram(), s.node(f.dc2, s.leaf(1), s.pos_inf())), std::domain_error);
  EXPECT_EQ(oslash(s.pos_inf(), s.leaf(3)), s.pos_inf());
}

TEST(XddTest, ExplicitSupportGuards) {
  XddStore s;
  auto ev = make_events(s, 21);
  EXPECT_THROW(to_explicit(s.one(), ev), std::invalid_argument);
  Sample f;
  EXPECT_THROW(to_explicit(f.diagram(), {f.dc2}), std::invalid_argument);
  ExplicitMap z = to_explicit(f.store.zero(), {f.dc2});
  ASSERT_EQ(z.values.size(), 2u);
  EXPECT_EQ(z.values[0], ExtTime::neg_inf());
  EXPECT_EQ(z.values[1], ExtTime::neg_inf());
}

// Every operator agrees with the pointwise operator on explicit tables.
TEST(XddPropertyTest, OperatorsMatchExplicitOracle) {
  XddStore s;
  std::mt19937_64 rng(12345);
  auto events = make_events(s, 6, 2);
  LeafDist d{-20, 20, 0.1, 0.1};
  LeafDist finite{-20, 20, 0.0, 0.0};
  const BinaryOp ops[] = {BinaryOp::kMax,     BinaryOp::kPlus,    BinaryOp::kMin,
                          BinaryOp::kMinus,   BinaryOp::kSchedMe, BinaryOp::kSchedFe,
                          BinaryOp::kDropBelow};
  auto configs = all_configurations(events);
  for (int round = 0; round < 200; ++round) {
    for (BinaryOp op : ops) {
      ExplicitMap mf = random_map(rng, events, d);
      ExplicitMap mg = random_map(rng, events, op == BinaryOp::kMinus ? finite : d);
      Xdd f = from_explicit(s, mf);
      Xdd g = from_explicit(s, mg);
      Xdd r = s.apply(op, f, g);
      for (const auto& act : configs) {
        Configuration gamma(events, act);
        ASSERT_EQ(eval(r, gamma), apply_scalar(op, lookup(mf, act), lookup(mg, act)));
      }
    }
  }
}

TEST(XddPropertyTest, ExplicitRoundTrip) {
  XddStore s;
  std::mt19937_64 rng(7);
  auto events = make_events(s, 8, 2);
  for (int i = 0; i < 500; ++i) {
    ExplicitMap m = random_map(rng, events, {-5, 5, 0.1, 0.1});
    Xdd f = from_explicit(s, m);
    EXPECT_EQ(to_explicit(f, m.support), m);
    EXPECT_EQ(from_explicit(s, to_explicit(f, m.support)), f);
  }
}

TEST(XddPropertyTest, SupportOfOplusIsWithinUnion) {
  XddStore s;
  std::mt19937_64 rng(99);
  auto events = make_events(s, 6);
  for (int i = 0; i < 200; ++i) {
    Xdd f = from_explicit(s, random_map(rng, events, {}));
    Xdd g = from_explicit(s, random_map(rng, events, {}));
    auto sf = support(f), sg = support(g);
    for (EventId e : support(oplus(f, g)))
      EXPECT_TRUE(std::count(sf.begin(), sf.end(), e) || std::count(sg.begin(), sg.end(), e));
  }
}

TEST(XddPropertyTest, MemoClearingIsTransparent) {
  XddStore s;
  std::mt19937_64 rng(5);
  auto events = make_events(s, 6);
  for (int i = 0; i < 50; ++i) {
    Xdd f = from_explicit(s, random_map(rng, events, {}));
    Xdd g = from_explicit(s, random_map(rng, events, {}));
    Xdd r1 = otimes(oplus(f, g), g);
    s.clear_memo();
    EXPECT_EQ(s.memo_size(), 0u);
    EXPECT_EQ(otimes(oplus(f, g), g), r1);
  }
}

TEST(XddTest, RelabelRestoresOrder) {
  XddStore s;
  EventId a{s.new_event_base("a"), 0};
  EventId b{s.new_event_base("b"), 0};
  Xdd f = s.node(a, s.node(b, s.leaf(1), s.leaf(2)), s.leaf(3));
  // a[0] -> a[1] moves `a` below `b`.
  Xdd g = s.relabel(f, [&](EventId e) { return e == a ? EventId{a.base, 1} : e; });
  EXPECT_EQ(g.event(), b);
  EventId a1{a.base, 1};
  for (bool pa : {false, true})
    for (bool pb : {false, true}) {
      std::vector<EventId> act0, act1;
      if (pa) act0.push_back(a), act1.push_back(a1);
      if (pb) act0.push_back(b), act1.push_back(b);
      EXPECT_EQ(eval(f, Configuration({a, b}, act0)), eval(g, Configuration({a1, b}, act1)));
    }
}

TEST(XddTest, EliminateTakesTheMaximum) {
  XddStore s;
  EventId e{s.new_event_base("e"), 1};
  EXPECT_EQ(s.eliminate(s.node(e, s.leaf(3), s.leaf(7)), [](EventId) { return true; }), s.leaf(7));
}

TEST(XddTest, DotOutputIsStable) {
  Sample f;
  std::string dot = to_dot(f.diagram());
  EXPECT_EQ(dot, to_dot(f.diagram()));
  EXPECT_NE(dot.find("style=dashed"), std::string::npos);
  EXPECT_NE(dot.find("label=\"DC2[0]\""), std::string::npos);
}

}  // namespace
}  // namespace xddpipe
